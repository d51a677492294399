#include "qpke/scheme_py12.hpp"

#include "qpke/errors.hpp"

namespace qpke {

namespace {

int pivot_position(const BitVec& k) {
    for (int pos = 1; pos <= k.len(); ++pos)
        if (k.bit(pos)) return pos;
    return 0;
}

}  // namespace

Py12Key py12_keygen(int n, int m, int p, Rng& rng) {
    if (n < 1) throw ParameterError("py12 keygen needs n >= 1");
    Py12Key key;
    key.f = sample_boolean_function(m, n, p, rng);
    const long draw_cap = m <= 20 ? (1L << m) * 64L : (1L << 20);
    for (long attempt = 0;; ++attempt) {
        if (attempt >= draw_cap) throw ParameterError("private key admits no valid k");
        BitVec s = random_bits(m, rng);
        BitVec k = eval_boolean_function(key.f, s);
        if (hamming_weight(k) % 2 == 1) {
            key.s = std::move(s);
            key.k = std::move(k);
            break;
        }
    }
    key.i = random_bits(n, rng);
    return key;
}

TwoBranchState py12_issue_state(const BitVec& i, const BitVec& k) {
    if (i.len() != k.len()) throw DimensionError("i and k differ in length");
    if (hamming_weight(k) % 2 == 0) throw ParameterError("k must have odd hamming weight");
    return TwoBranchState(i, i ^ k, PhasePower{});
}

TwoBranchState py12_issue(const Py12Key& key) { return py12_issue_state(key.i, key.k); }

TwoBranchState py12_encrypt(const TwoBranchState& state, int bit) {
    if (bit != 0 && bit != 1) throw ParameterError("message bit must be 0 or 1");
    if (!state.masks_empty()) throw ParameterError("py12 states carry no dressing masks");
    if (bit == 0) return state;
    return sym_apply_z_mask(state, BitVec(state.n).complemented());
}

int py12_decrypt(const Py12Key& key, const TwoBranchState& ct) {
    return py12_decrypt_with_key(key.i, key.k, ct);
}

int py12_decrypt_with_key(const BitVec& i, const BitVec& k, const TwoBranchState& ct) {
    if (!ct.masks_empty()) throw ParameterError("py12 states carry no dressing masks");
    if (i.len() != ct.n || k.len() != ct.n) throw DimensionError("key length mismatch");
    if (!((ct.u ^ ct.v) == k) || !(ct.u == i || ct.v == i))
        throw KeyMismatchError("ciphertext does not match key");

    TwoBranchState state = sym_apply_x_mask(ct, i);  // branches now {0, k}
    const int pivot = pivot_position(k);
    for (int q = 1; q <= k.len(); ++q)
        if (q != pivot && k.bit(q)) state = sym_apply_cnot(state, pivot, q);

    // Branches differ only at the pivot now; canonical() orients u to the
    // branch with pivot bit 0.
    TwoBranchState c = state.canonical();
    BitVec e_pivot(ct.n);
    e_pivot.set_bit(pivot, 1);
    if (!((c.u ^ c.v) == e_pivot)) throw KeyMismatchError("ciphertext does not match key");
    switch (c.rel.t) {
        case 0:
            return 0;
        case 2:
            return 1;
        default:
            throw KeyMismatchError("ciphertext does not match key");
    }
}

int py12_decrypt_dense_sampled(const BitVec& i_guess, const BitVec& k_guess, const DenseState& ct,
                               Rng& rng) {
    if (i_guess.len() != ct.n || k_guess.len() != ct.n) throw DimensionError("key length mismatch");
    if (k_guess.is_zero()) return coin(rng);
    DenseState psi = apply_pauli_mask(ct, Pauli::X, i_guess);
    const int pivot = pivot_position(k_guess);
    for (int q = 1; q <= ct.n; ++q)
        if (q != pivot && k_guess.bit(q)) psi = apply_cnot(psi, pivot, q);
    const PmMeasurement meas = measure_pm(psi, pivot);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double total = meas.prob_plus + meas.prob_minus;
    return unif(rng) * total < meas.prob_plus ? 0 : 1;
}

}  // namespace qpke
