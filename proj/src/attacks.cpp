#include "qpke/attacks.hpp"

#include <cmath>

#include "qpke/errors.hpp"
#include "qpke/scheme_bitqpke.hpp"
#include "qpke/scheme_py12.hpp"

namespace qpke {

BitVec hadamard_attack_sample(const TwoBranchState& state, Rng& rng, int limit) {
    DenseState psi = expand(state, limit);
    psi = apply_hadamard_mask(psi, BitVec(state.n).complemented());
    return sample_basis_outcome(psi, rng);
}

KRecovery recover_k_from_samples(const std::vector<BitVec>& samples, int n) {
    for (const BitVec& s : samples)
        if (s.len() != n) throw DimensionError("sample length does not match n");
    Gf2System sys;
    sys.rows = samples;
    sys.cols = n;
    std::vector<BitVec> basis = gf2_nullspace(sys);
    KRecovery r;
    r.rank = n - static_cast<int>(basis.size());
    if (basis.size() == 1) {
        r.found = true;
        r.k = basis.front();
    }
    return r;
}

BitVec AnfRecovery::eval(const BitVec& s) const {
    if (s.len() != m) throw DimensionError("input length does not match m");
    BitVec out(n);
    for (int j = 0; j < n; ++j) {
        int bit = 0;
        for (const Monomial& t : outputs[j]) bit ^= eval_monomial(t, s);
        out.set_bit(j + 1, bit);
    }
    return out;
}

AnfRecovery recover_boolean_function(const std::vector<std::pair<BitVec, BitVec>>& pairs, int m,
                                     int n) {
    if (m < 1 || n < 1) throw ParameterError("m and n must be >= 1");
    if (m > 16) throw CapacityError("coefficient basis 2^m is too large beyond m=16");
    const std::size_t basis_size = std::size_t(1) << m;

    AnfRecovery rec;
    rec.m = m;
    rec.n = n;
    rec.outputs.resize(n);

    // One coefficient row per observation: entry t is the monomial with mask
    // t evaluated at s. Rows are shared by all n output systems.
    std::vector<BitVec> rows;
    rows.reserve(pairs.size());
    for (const auto& [s, k] : pairs) {
        if (s.len() != m || k.len() != n) throw DimensionError("observation dimensions disagree");
        BitVec row(static_cast<int>(basis_size));
        const std::uint64_t s_idx = s.to_index();
        for (std::size_t t = 0; t < basis_size; ++t) {
            // Monomial with mask t is 1 at s iff the selected bits are all set.
            if ((s_idx & t) == t) row.set_bit(static_cast<int>(t) + 1, 1);
        }
        rows.push_back(std::move(row));
    }

    rec.consistent = true;
    rec.underdetermined = pairs.empty();
    for (int j = 0; j < n; ++j) {
        if (pairs.empty()) {
            rec.underdetermined = true;
            continue;  // all-zero function is one valid solution
        }
        Gf2System sys;
        sys.rows = rows;
        BitVec rhs(static_cast<int>(pairs.size()));
        for (std::size_t r = 0; r < pairs.size(); ++r) rhs.set_bit(static_cast<int>(r) + 1, pairs[r].second.bit(j + 1));
        sys.rhs = std::move(rhs);
        Gf2Solution sol = gf2_solve(sys);
        if (!sol.consistent) {
            rec.consistent = false;
            rec.outputs.assign(n, {});
            return rec;
        }
        if (!sol.nullspace.empty()) rec.underdetermined = true;
        for (std::size_t t = 0; t < basis_size; ++t) {
            if (sol.particular.bit(static_cast<int>(t) + 1))
                rec.outputs[j].push_back(Monomial{BitVec::from_index(t, m)});
        }
    }
    return rec;
}

BitVec random_odd_weight(int n, Rng& rng) {
    for (;;) {
        BitVec k = random_bits(n, rng);
        if (hamming_weight(k) % 2 == 1) return k;
    }
}

GuessingEstimate guessing_attack_estimate(int n, int l, long trials, Rng& rng) {
    if (n < 2 || l < 1 || l >= n) throw ParameterError("need 1 <= l < n");
    if (trials < 1) throw ParameterError("need at least one trial");
    if (n > kDenseLimit) throw CapacityError("guessing attack runs on the dense engine");

    GuessingEstimate est;
    est.n = n;
    est.l = l;
    est.trials = trials;
    for (long trial = 0; trial < trials; ++trial) {
        const BitVec k = random_odd_weight(n, rng);
        const BitVec i = random_bits(n, rng);
        const int message = coin(rng);
        const TwoBranchState ct = py12_encrypt(py12_issue_state(i, k), message);

        // The attacker keeps the first n-l bits of k and guesses the rest.
        BitVec k_guess = k;
        for (int pos = n - l + 1; pos <= n; ++pos) k_guess.set_bit(pos, coin(rng));

        const int decoded = py12_decrypt_dense_sampled(i, k_guess, expand(ct), rng);
        if (decoded == message) ++est.successes;
    }
    est.success_rate = static_cast<double>(est.successes) / static_cast<double>(trials);
    est.half_width =
        1.96 * std::sqrt(est.success_rate * (1.0 - est.success_rate) / static_cast<double>(trials));
    return est;
}

namespace {

DensityMatrix multi_copy_mixture_impl(int n, int t, const std::vector<int>& pattern, int limit,
                                      bool reversed) {
    if (n < 1 || t < 1) throw ParameterError("n and t must be >= 1");
    if (static_cast<int>(pattern.size()) != t) throw ParameterError("pattern length must equal t");
    for (int b : pattern)
        if (b != 0 && b != 1) throw ParameterError("pattern bits must be 0 or 1");
    if (n * t > limit) throw CapacityError("t*n exceeds the dense limit");

    std::vector<BitVec> odd;
    for (std::uint64_t idx = 0; idx < (std::uint64_t(1) << n); ++idx) {
        BitVec cand = BitVec::from_index(idx, n);
        if (hamming_weight(cand) % 2 == 1) odd.push_back(std::move(cand));
    }
    const std::uint64_t full = std::uint64_t(1) << n;
    const std::uint64_t terms = odd.size() * full * full;
    const double weight = 1.0 / static_cast<double>(terms);

    DensityMatrix acc = DensityMatrix::zero(n * t);
    for (std::uint64_t step = 0; step < terms; ++step) {
        const std::uint64_t enc = reversed ? terms - 1 - step : step;
        const BitVec& k1 = odd[enc / (full * full)];
        const BitVec k2 = BitVec::from_index((enc / full) % full, n);
        const BitVec k3 = BitVec::from_index(enc % full, n);

        std::vector<TwoBranchState> copies;
        copies.reserve(t);
        for (int c = 0; c < t; ++c)
            copies.push_back(encrypt_state(public_key_state(k1, k2, k3), pattern[c]));
        acc = add_scaled(acc, density_of_two_branch_product(copies, limit), weight);
    }
    return acc;
}

}  // namespace

DensityMatrix multi_copy_mixture(int n, int t, const std::vector<int>& pattern, int limit) {
    return multi_copy_mixture_impl(n, t, pattern, limit, false);
}

DensityMatrix multi_copy_mixture_reversed(int n, int t, const std::vector<int>& pattern, int limit) {
    return multi_copy_mixture_impl(n, t, pattern, limit, true);
}

Py12AttackRun run_py12_attack(int n, int m, int p, int max_samples, Rng& rng) {
    if (max_samples < 1) throw ParameterError("need at least one sample");
    Py12Key key = py12_keygen(n, m, p, rng);

    Py12AttackRun run;
    run.k_true = key.k;
    for (int s = 0; s < max_samples; ++s) {
        // Fresh public-key copy: same k = F(s), fresh basis offset.
        const BitVec i = random_bits(n, rng);
        const BitVec y = hadamard_attack_sample(py12_issue_state(i, key.k), rng);
        if (gf2_dot(y, key.k) != 0) run.all_orthogonal = false;
        run.samples.push_back(y);
        const KRecovery rec = recover_k_from_samples(run.samples, n);
        run.rank_progression.push_back(rec.rank);
        if (rec.found) {
            run.recovered = true;
            run.k_found = rec.k;
            run.samples_used = s + 1;
            break;
        }
    }
    if (!run.recovered) run.samples_used = static_cast<int>(run.samples.size());
    return run;
}

NewSchemeAttackRun run_newscheme_attack(int n, int samples, Rng& rng) {
    if (samples < 1) throw ParameterError("need at least one sample");
    NewSchemeAttackRun run;
    run.k1_true = random_odd_weight(n, rng);
    std::vector<BitVec> collected;
    collected.reserve(samples);
    for (int s = 0; s < samples; ++s) {
        const BitVec k2 = random_bits(n, rng);
        const BitVec k3 = random_bits(n, rng);
        collected.push_back(hadamard_attack_sample(public_key_state(run.k1_true, k2, k3), rng));
    }
    const KRecovery rec = recover_k_from_samples(collected, n);
    run.final_rank = rec.rank;
    if (rec.found) {
        run.produced_candidate = true;
        run.k_found = rec.k;
        run.success = (rec.k == run.k1_true);
    }
    return run;
}

}  // namespace qpke
