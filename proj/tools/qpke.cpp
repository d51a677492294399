#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "qpke/attacks.hpp"
#include "qpke/errors.hpp"
#include "qpke/scheme_bitqpke.hpp"
#include "qpke/scheme_py12.hpp"
#include "qpke/security_verify.hpp"

namespace fs = std::filesystem;
using namespace qpke;

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out << std::scientific << std::setprecision(12) << v;
    return out.str();
}

// Draws a seed from the system when none was given and prints it, so every
// run is replayable.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    std::random_device dev;
    const std::uint64_t drawn = (std::uint64_t(dev()) << 32) ^ dev();
    std::cout << "seed " << drawn << "\n";
    return drawn;
}

int run_keygen(int n, int m, std::optional<int> p, std::optional<std::uint64_t> seed,
               const std::string& out_dir) {
    Rng rng = fork_rng(resolve_seed(seed), 0);
    const PrivateKey sk = keygen(n, m, p.value_or(n), rng);
    fs::create_directories(out_dir);
    const fs::path path = fs::path(out_dir) / "private_key.txt";
    save_private_key(sk, path);
    std::cout << "private-key " << path.string() << " n=" << sk.n << " m=" << sk.m
              << " p=" << sk.p << "\n";
    return 0;
}

int run_issue(const std::string& key_dir, const std::string& registry_dir, int count,
              std::optional<std::uint64_t> seed) {
    Rng rng = fork_rng(resolve_seed(seed), 0);
    const PrivateKey sk = load_private_key(fs::path(key_dir) / "private_key.txt");
    KeyRegistry registry{fs::path(registry_dir)};
    for (int i = 0; i < count; ++i) {
        const PublicKey pk = issue_public_key(sk, registry, rng);
        std::cout << "issued key_id=" << pk.key_id << " s1=" << pk.tag.s1.to_string()
                  << " s2=" << pk.tag.s2.to_string() << " s3=" << pk.tag.s3.to_string() << "\n";
    }
    return 0;
}

int run_encrypt(const std::string& registry_dir, const std::string& key_id, int bit,
                const std::string& out_file) {
    KeyRegistry registry{fs::path(registry_dir)};
    const PublicKey pk = registry.load(key_id);
    const Ciphertext ct = encrypt(pk, bit, registry);
    save_ciphertext(ct, out_file);
    std::cout << "ciphertext " << out_file << " key_id=" << key_id << " consumed\n";
    return 0;
}

int run_decrypt(const std::string& key_dir, const std::string& ct_file) {
    const PrivateKey sk = load_private_key(fs::path(key_dir) / "private_key.txt");
    const Ciphertext ct = load_ciphertext(ct_file);
    std::cout << decrypt(sk, ct) << "\n";
    return 0;
}

int report_claims(const std::vector<std::tuple<std::string, double, double>>& claims) {
    bool all_pass = true;
    for (const auto& [id, value, tol] : claims) {
        const bool pass = value < tol;
        all_pass = all_pass && pass;
        std::cout << "claim=" << id << " value=" << fmt(value) << " tol=" << fmt(tol) << " "
                  << (pass ? "pass" : "FAIL") << "\n";
    }
    std::cout << "result " << (all_pass ? "pass" : "fail") << "\n";
    return all_pass ? 0 : 1;
}

int run_verify_pe(int n, double tol, std::optional<std::uint64_t> seed) {
    Rng rng = fork_rng(resolve_seed(seed), 0);
    std::vector<std::tuple<std::string, double, double>> claims;
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix pure = density_of(random_pure_state(n, rng));
        claims.emplace_back("perfect-encryption/pure/" + std::to_string(trial),
                            check_maximally_mixed(perfect_encryption_transform(pure), tol)
                                .max_deviation,
                            tol);
        const DensityMatrix mixed = random_density_matrix(n, 4, rng);
        claims.emplace_back("perfect-encryption/mixed/" + std::to_string(trial),
                            check_maximally_mixed(perfect_encryption_transform(mixed), tol)
                                .max_deviation,
                            tol);
    }
    return report_claims(claims);
}

int run_verify_mixture(int n, double tol) {
    std::vector<std::tuple<std::string, double, double>> claims;
    for (const auto& [name, domain] :
         {std::pair{"odd", K1Domain::OddWeight}, std::pair{"all", K1Domain::All}}) {
        for (int bit : {0, 1}) {
            const double dev =
                check_maximally_mixed(ensemble_mixture(n, bit, domain), tol).max_deviation;
            claims.emplace_back("mixture/k1-" + std::string(name) + "/bit" + std::to_string(bit),
                                dev, tol);
        }
    }
    return report_claims(claims);
}

int run_verify_prop1(int n, double tol) {
    return report_claims({{"prop1/distance", bit_mixture_distance(n), tol}});
}

int run_verify_prop2(int n, double tol) {
    return report_claims({{"prop2/bit0", reenumerated_mixture_distance(n, 0), tol},
                          {"prop2/bit1", reenumerated_mixture_distance(n, 1), tol}});
}

int run_attack_py12(int n, std::optional<int> m, std::optional<int> p, int max_samples,
                    std::optional<std::uint64_t> seed) {
    Rng rng = fork_rng(resolve_seed(seed), 0);
    const Py12AttackRun run = run_py12_attack(n, m.value_or(n), p.value_or(n), max_samples, rng);
    for (std::size_t i = 0; i < run.samples.size(); ++i) {
        std::cout << "sample " << std::setw(3) << std::setfill('0') << (i + 1) << std::setfill(' ')
                  << " y=" << run.samples[i].to_string() << " rank=" << run.rank_progression[i]
                  << "\n";
    }
    std::cout << "true-k " << run.k_true.to_string() << "\n";
    std::cout << "orthogonal-samples " << (run.all_orthogonal ? "yes" : "no") << "\n";
    if (run.recovered) {
        std::cout << "recovered-k " << run.k_found.to_string() << " samples=" << run.samples_used
                  << " match=" << (run.k_found == run.k_true ? "yes" : "no") << "\n";
        return run.k_found == run.k_true ? 0 : 1;
    }
    std::cout << "recovered-k none rank=" << run.rank_progression.back() << "\n";
    return 1;
}

int run_attack_newscheme(int n, int trials, int samples, std::optional<std::uint64_t> seed) {
    Rng rng = fork_rng(resolve_seed(seed), 0);
    int successes = 0;
    int candidates = 0;
    for (int t = 0; t < trials; ++t) {
        const NewSchemeAttackRun run = run_newscheme_attack(n, samples, rng);
        successes += run.success ? 1 : 0;
        candidates += run.produced_candidate ? 1 : 0;
        std::cout << "trial " << std::setw(3) << std::setfill('0') << (t + 1) << std::setfill(' ')
                  << " rank=" << run.final_rank << " candidate="
                  << (run.produced_candidate ? run.k_found.to_string() : std::string("none"))
                  << " success=" << (run.success ? 1 : 0) << "\n";
    }
    const double rate = static_cast<double>(successes) / trials;
    std::cout << "summary trials=" << trials << " samples-per-trial=" << samples
              << " candidates=" << candidates << " successes=" << successes
              << " rate=" << fmt(rate) << "\n";
    return 0;
}

int run_attack_recover_f(int m, int p, std::optional<int> n_out,
                         std::optional<std::uint64_t> seed) {
    Rng rng = fork_rng(resolve_seed(seed), 0);
    const int n = n_out.value_or(m);
    const BooleanFunction f = sample_boolean_function(m, n, p, rng);
    std::vector<std::pair<BitVec, BitVec>> pairs;
    for (std::uint64_t idx = 0; idx < (std::uint64_t(1) << m); ++idx) {
        const BitVec s = BitVec::from_index(idx, m);
        pairs.emplace_back(s, eval_boolean_function(f, s));
    }
    std::cout << "observations " << pairs.size() << " (full truth table)\n";
    const AnfRecovery rec = recover_boolean_function(pairs, m, n);
    if (!rec.consistent) {
        std::cout << "recovery inconsistent\n";
        return 1;
    }
    bool exact = true;
    for (const auto& [s, k] : pairs) exact = exact && (rec.eval(s) == k);
    for (int j = 0; j < n; ++j)
        std::cout << "output " << (j + 1) << " anf-terms=" << rec.outputs[j].size() << "\n";
    std::cout << "recovered " << (exact ? "exact" : "mismatch")
              << " underdetermined=" << (rec.underdetermined ? "yes" : "no") << "\n";
    return exact ? 0 : 1;
}

int run_attack_guess(int n, int l, long trials, std::optional<std::uint64_t> seed) {
    Rng rng = fork_rng(resolve_seed(seed), 0);
    const GuessingEstimate est = guessing_attack_estimate(n, l, trials, rng);
    const double formula = 0.5 + std::ldexp(1.0, -l - 1);  // 1/2^l + (1 - 1/2^l)/2
    std::cout << "trials " << est.trials << "\n";
    std::cout << "success-rate " << fmt(est.success_rate) << " half-width " << fmt(est.half_width)
              << "\n";
    std::cout << "closed-form " << fmt(formula) << " (stated formula at l=" << l << ")\n";
    std::cout << "prose-value " << fmt(0.25) << " (stated for the last-bit case)\n";
    const bool matches_formula = std::abs(est.success_rate - formula) < 0.02;
    const bool matches_prose = std::abs(est.success_rate - 0.25) < 0.02;
    std::cout << "reproduces "
              << (matches_formula ? "closed-form" : (matches_prose ? "prose-value" : "neither"))
              << "\n";
    return 0;
}

int run_multicopy(int n, int t, const std::string& pattern_str) {
    std::vector<int> pattern;
    for (char c : pattern_str) {
        if (c != '0' && c != '1') throw ParameterError("pattern must be a bit string");
        pattern.push_back(c - '0');
    }
    const DensityMatrix given = multi_copy_mixture(n, t, pattern);
    const DensityMatrix given_rev = multi_copy_mixture_reversed(n, t, pattern);
    const DensityMatrix baseline = multi_copy_mixture(n, t, std::vector<int>(t, 0));
    std::cout << "pattern " << pattern_str << " dim=" << given.dim() << "\n";
    std::cout << "trace " << fmt(given.trace().real()) << "\n";
    std::cout << "hermitian " << (is_hermitian(given, 1e-12) ? "yes" : "no") << "\n";
    std::cout << "min-eigenvalue " << fmt(min_eigenvalue(given)) << "\n";
    std::cout << "order-invariant " << (max_abs_entry_diff(given, given_rev) == 0.0 ? "yes" : "no")
              << "\n";
    std::cout << "distance-to-zero-pattern " << fmt(trace_distance(given, baseline)) << "\n";
    return 0;
}

int run_bench(int n) {
    const auto start = std::chrono::steady_clock::now();
    const DensityMatrix rho = ensemble_mixture(n, 0);
    const auto stop = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(stop - start).count();
    const double terms = std::ldexp(1.0, 3 * n - 1);  // |Omega_n| * 4^n
    std::cout << "ensemble n=" << n << " terms=" << static_cast<long long>(terms) << " seconds="
              << fmt(seconds) << " terms-per-second=" << fmt(terms / seconds) << "\n";
    std::cout << "deviation-from-mixed " << fmt(check_maximally_mixed(rho, 1e-10).max_deviation)
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bit-oriented quantum public-key encryption toolkit"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    int exit_code = 0;

    // keygen
    auto* keygen_cmd = app.add_subcommand("keygen", "generate a private key");
    int kg_n = 4, kg_m = 4;
    std::optional<int> kg_p;
    std::string kg_out;
    keygen_cmd->add_option("--n", kg_n, "qubit count (even)")->required();
    keygen_cmd->add_option("--m", kg_m, "tag string length")->required();
    keygen_cmd->add_option("--p", kg_p, "monomials per output (default n)");
    keygen_cmd->add_option("--seed", seed, "rng seed");
    keygen_cmd->add_option("--out", kg_out, "output directory")->required();
    keygen_cmd->callback([&] { exit_code = run_keygen(kg_n, kg_m, kg_p, seed, kg_out); });

    // issue
    auto* issue_cmd = app.add_subcommand("issue", "issue public keys into a registry");
    std::string is_key, is_registry;
    int is_count = 1;
    issue_cmd->add_option("--key", is_key, "private key directory")->required();
    issue_cmd->add_option("--registry", is_registry, "registry directory")->required();
    issue_cmd->add_option("--count", is_count, "number of keys to issue");
    issue_cmd->add_option("--seed", seed, "rng seed");
    issue_cmd->callback([&] { exit_code = run_issue(is_key, is_registry, is_count, seed); });

    // encrypt
    auto* encrypt_cmd = app.add_subcommand("encrypt", "encrypt one bit with a registered key");
    std::string en_registry, en_key_id, en_out;
    int en_bit = 0;
    encrypt_cmd->add_option("--registry", en_registry, "registry directory")->required();
    encrypt_cmd->add_option("--key-id", en_key_id, "public key id")->required();
    encrypt_cmd->add_option("--bit", en_bit, "message bit")->required()->check(CLI::Range(0, 1));
    encrypt_cmd->add_option("--out", en_out, "ciphertext file")->required();
    encrypt_cmd->callback([&] { exit_code = run_encrypt(en_registry, en_key_id, en_bit, en_out); });

    // decrypt
    auto* decrypt_cmd = app.add_subcommand("decrypt", "decrypt a ciphertext file");
    std::string de_key, de_ct;
    decrypt_cmd->add_option("--key", de_key, "private key directory")->required();
    decrypt_cmd->add_option("--ct", de_ct, "ciphertext file")->required();
    decrypt_cmd->callback([&] { exit_code = run_decrypt(de_key, de_ct); });

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "numerical security verification");
    verify_cmd->require_subcommand(1);
    int vf_n = 2;
    double vf_tol = 1e-10;
    auto* vf_pe = verify_cmd->add_subcommand("perfect-encryption", "Y^a H^b average = I/2^n");
    auto* vf_mix = verify_cmd->add_subcommand("mixture", "public-key/ciphertext ensembles");
    auto* vf_p1 = verify_cmd->add_subcommand("prop1", "same-key mixtures distance");
    auto* vf_p2 = verify_cmd->add_subcommand("prop2", "same-plaintext mixtures distance");
    for (auto* sub : {vf_pe, vf_mix, vf_p1, vf_p2}) {
        sub->add_option("--n", vf_n, "qubit count")->required();
        sub->add_option("--tol", vf_tol, "tolerance");
    }
    vf_pe->add_option("--seed", seed, "rng seed");
    vf_pe->callback([&] { exit_code = run_verify_pe(vf_n, vf_tol, seed); });
    vf_mix->callback([&] { exit_code = run_verify_mixture(vf_n, vf_tol); });
    vf_p1->callback([&] { exit_code = run_verify_prop1(vf_n, vf_tol); });
    vf_p2->callback([&] { exit_code = run_verify_prop2(vf_n, vf_tol); });

    // attack
    auto* attack_cmd = app.add_subcommand("attack", "adversarial procedures");
    attack_cmd->require_subcommand(1);

    auto* at_py12 = attack_cmd->add_subcommand("py12", "Hadamard key recovery vs the prior scheme");
    int ap_n = 8, ap_max = 50;
    std::optional<int> ap_m, ap_p;
    at_py12->add_option("--n", ap_n, "qubit count")->required();
    at_py12->add_option("--m", ap_m, "boolean function input length (default n)");
    at_py12->add_option("--p", ap_p, "monomials per output (default n)");
    at_py12->add_option("--max-samples", ap_max, "sample budget");
    at_py12->add_option("--seed", seed, "rng seed");
    at_py12->callback([&] { exit_code = run_attack_py12(ap_n, ap_m, ap_p, ap_max, seed); });

    auto* at_new = attack_cmd->add_subcommand("newscheme", "same pipeline vs dressed keys");
    int an_n = 8, an_trials = 200, an_samples = 50;
    at_new->add_option("--n", an_n, "qubit count")->required();
    at_new->add_option("--trials", an_trials, "trial count")->required();
    at_new->add_option("--samples", an_samples, "samples per trial");
    at_new->add_option("--seed", seed, "rng seed");
    at_new->callback([&] { exit_code = run_attack_newscheme(an_n, an_trials, an_samples, seed); });

    auto* at_rf = attack_cmd->add_subcommand("recover-f", "coefficient recovery demo");
    int rf_m = 6, rf_p = 4;
    std::optional<int> rf_n;
    at_rf->add_option("--m", rf_m, "input length")->required();
    at_rf->add_option("--p", rf_p, "monomials per output")->required();
    at_rf->add_option("--n", rf_n, "output length (default m)");
    at_rf->add_option("--seed", seed, "rng seed");
    at_rf->callback([&] { exit_code = run_attack_recover_f(rf_m, rf_p, rf_n, seed); });

    auto* at_guess = attack_cmd->add_subcommand("guess", "partial-key guessing attack");
    int ag_n = 4, ag_l = 1;
    long ag_trials = 100000;
    at_guess->add_option("--n", ag_n, "qubit count")->required();
    at_guess->add_option("--l", ag_l, "missing bit count")->required();
    at_guess->add_option("--trials", ag_trials, "Monte Carlo trials")->required();
    at_guess->add_option("--seed", seed, "rng seed");
    at_guess->callback([&] { exit_code = run_attack_guess(ag_n, ag_l, ag_trials, seed); });

    // multicopy
    auto* multi_cmd = app.add_subcommand("multicopy", "multi-copy ensemble mixture");
    int mc_n = 2, mc_t = 2;
    std::string mc_pattern;
    multi_cmd->add_option("--n", mc_n, "qubits per copy")->required();
    multi_cmd->add_option("--t", mc_t, "copy count")->required();
    multi_cmd->add_option("--pattern", mc_pattern, "bit pattern, one bit per copy")->required();
    multi_cmd->callback([&] { exit_code = run_multicopy(mc_n, mc_t, mc_pattern); });

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "time a full ensemble enumeration");
    int be_n = 4;
    bench_cmd->add_option("--n", be_n, "qubit count")->required();
    bench_cmd->callback([&] { exit_code = run_bench(be_n); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
