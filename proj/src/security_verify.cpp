#include "qpke/security_verify.hpp"

#include <cmath>
#include <vector>

#include "qpke/attacks.hpp"
#include "qpke/errors.hpp"
#include "qpke/scheme_bitqpke.hpp"

namespace qpke {

namespace {

std::vector<BitVec> k1_domain_values(int n, K1Domain domain) {
    std::vector<BitVec> values;
    for (std::uint64_t idx = 0; idx < (std::uint64_t(1) << n); ++idx) {
        BitVec cand = BitVec::from_index(idx, n);
        const int w = hamming_weight(cand);
        const bool keep = domain == K1Domain::OddWeight ? (w % 2 == 1)
                          : domain == K1Domain::AllNonzero ? (w > 0)
                                                           : true;
        if (keep) values.push_back(std::move(cand));
    }
    return values;
}

// Ciphertext density for one key tuple; k1 = 0 degenerates the inner state to
// the normalized single branch |0>. Even-weight k1 never leaves the scheme's
// keygen, but the widened proof ensembles still sum over it, so the state is
// assembled directly instead of through public_key_state.
DensityMatrix ciphertext_density(const BitVec& k1, const BitVec& k2, const BitVec& k3, int bit,
                                 int limit) {
    const int n = k1.len();
    if (k1.is_zero()) {
        BitVec y = bit == 0 ? k3 : k3.complemented();
        return density_of_dressed_basis(BitVec(n), k2, y, limit);
    }
    const TwoBranchState pk(BitVec(n), k1, PhasePower{}, PhasePower{}, k2, k3);
    return density_of_two_branch(encrypt_state(pk, bit), limit);
}

DensityMatrix ensemble_mixture_impl(int n, int bit, K1Domain domain, int limit, bool reversed) {
    if (bit != 0 && bit != 1) throw ParameterError("bit must be 0 or 1");
    if (n > limit) throw CapacityError("ensemble enumeration exceeds the dense limit");
    const std::vector<BitVec> k1s = k1_domain_values(n, domain);
    const std::uint64_t full = std::uint64_t(1) << n;
    const std::uint64_t terms = k1s.size() * full * full;
    const double weight = 1.0 / static_cast<double>(terms);

    DensityMatrix acc = DensityMatrix::zero(n);
    for (std::uint64_t step = 0; step < terms; ++step) {
        const std::uint64_t enc = reversed ? terms - 1 - step : step;
        const BitVec& k1 = k1s[enc / (full * full)];
        const BitVec k2 = BitVec::from_index((enc / full) % full, n);
        const BitVec k3 = BitVec::from_index(enc % full, n);
        acc = add_scaled(acc, ciphertext_density(k1, k2, k3, bit, limit), weight);
    }
    return acc;
}

}  // namespace

DensityMatrix ensemble_mixture(int n, int bit, K1Domain domain, int limit) {
    return ensemble_mixture_impl(n, bit, domain, limit, false);
}

DensityMatrix ensemble_mixture_reversed(int n, int bit, K1Domain domain, int limit) {
    return ensemble_mixture_impl(n, bit, domain, limit, true);
}

DensityMatrix perfect_encryption_transform(const DensityMatrix& rho, int limit) {
    if (rho.n > limit) throw CapacityError("perfect-encryption enumeration exceeds the dense limit");
    const int n = rho.n;
    const std::uint64_t full = std::uint64_t(1) << n;
    const double weight = std::ldexp(1.0, -2 * n);
    DensityMatrix acc = DensityMatrix::zero(n);
    for (std::uint64_t a = 0; a < full; ++a) {
        const BitVec alpha = BitVec::from_index(a, n);
        for (std::uint64_t b = 0; b < full; ++b) {
            const BitVec beta = BitVec::from_index(b, n);
            DensityMatrix term = conjugate_hadamard_mask(rho, beta);
            term = conjugate_pauli_mask(term, Pauli::Y, alpha);
            acc = add_scaled(acc, term, weight);
        }
    }
    return acc;
}

MixedVerdict check_maximally_mixed(const DensityMatrix& rho, double tol) {
    const DensityMatrix target = DensityMatrix::maximally_mixed(rho.n);
    MixedVerdict verdict;
    verdict.max_deviation = max_abs_entry_diff(rho, target);
    verdict.pass = verdict.max_deviation < tol;
    return verdict;
}

double bit_mixture_distance(int n, K1Domain domain) {
    return trace_distance(ensemble_mixture(n, 0, domain), ensemble_mixture(n, 1, domain));
}

double reenumerated_mixture_distance(int n, int bit, K1Domain domain) {
    return trace_distance(ensemble_mixture(n, bit, domain),
                          ensemble_mixture_reversed(n, bit, domain));
}

DensityMatrix sampled_mixture(int n, int bit, int count, Rng& rng, int limit) {
    if (count < 1) throw ParameterError("need at least one sampled key");
    const double weight = 1.0 / static_cast<double>(count);
    DensityMatrix acc = DensityMatrix::zero(n);
    for (int i = 0; i < count; ++i) {
        const BitVec k1 = random_odd_weight(n, rng);
        const BitVec k2 = random_bits(n, rng);
        const BitVec k3 = random_bits(n, rng);
        acc = add_scaled(acc, ciphertext_density(k1, k2, k3, bit, limit), weight);
    }
    return acc;
}

double sampled_bit_mixture_distance(int n, int count, Rng& rng) {
    if (count < 1) throw ParameterError("need at least one sampled key");
    const double weight = 1.0 / static_cast<double>(count);
    DensityMatrix acc0 = DensityMatrix::zero(n);
    DensityMatrix acc1 = DensityMatrix::zero(n);
    for (int i = 0; i < count; ++i) {
        const BitVec k1 = random_odd_weight(n, rng);
        const BitVec k2 = random_bits(n, rng);
        const BitVec k3 = random_bits(n, rng);
        acc0 = add_scaled(acc0, ciphertext_density(k1, k2, k3, 0, kDenseLimit), weight);
        acc1 = add_scaled(acc1, ciphertext_density(k1, k2, k3, 1, kDenseLimit), weight);
    }
    return trace_distance(acc0, acc1);
}

double disjoint_sample_distance(int n, int bit, int count, Rng& rng) {
    DensityMatrix a = sampled_mixture(n, bit, count, rng);
    DensityMatrix b = sampled_mixture(n, bit, count, rng);
    return trace_distance(a, b);
}

Complex basis_overlap_trace(const BitVec& alpha, const BitVec& beta, const BitVec& gamma,
                            const BitVec& delta, int limit) {
    const int n = alpha.len();
    if (beta.len() != n || gamma.len() != n || delta.len() != n)
        throw DimensionError("mask lengths disagree");
    if (n > limit) throw CapacityError("operator overlap exceeds the dense limit");
    // tr(Y^a H^b H^d Y^c) column by column: apply the operator product to each
    // basis state and read the diagonal amplitude.
    Complex trace(0, 0);
    for (std::uint64_t col = 0; col < (std::uint64_t(1) << n); ++col) {
        DenseState e = DenseState::basis_state(BitVec::from_index(col, n), limit);
        e = apply_pauli_mask(e, Pauli::Y, gamma);
        e = apply_hadamard_mask(e, delta);
        e = apply_hadamard_mask(e, beta);
        e = apply_pauli_mask(e, Pauli::Y, alpha);
        trace += e.amps[col];
    }
    return trace;
}

}  // namespace qpke
