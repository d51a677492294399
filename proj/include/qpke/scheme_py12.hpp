#pragma once

#include "qpke/boolfunc.hpp"
#include "qpke/gf2.hpp"
#include "qpke/qsim.hpp"
#include "qpke/rng.hpp"

namespace qpke {

// Key material of the prior scheme: one Boolean function, one tag string s
// with k = F(s) of odd weight, and a basis offset i.
struct Py12Key {
    BooleanFunction f;
    BitVec s;  // length m
    BitVec k;  // = f(s), odd weight
    BitVec i;  // length n
};

// Samples f, resamples s until hamming_weight(f(s)) is odd, draws i.
Py12Key py12_keygen(int n, int m, int p, Rng& rng);

// (|i> + |i^k>)/sqrt(2) with no dressing.
TwoBranchState py12_issue_state(const BitVec& i, const BitVec& k);
TwoBranchState py12_issue(const Py12Key& key);

// Bit 1 applies Z at every qubit; for odd-weight k this flips the relative
// phase (the branch parities differ).
TwoBranchState py12_encrypt(const TwoBranchState& state, int bit);

// X^i to move the branches onto {0, k}, pivot-CNOT disentangle over the set
// bits of k, then read the +- form at the pivot.
int py12_decrypt(const Py12Key& key, const TwoBranchState& ct);
int py12_decrypt_with_key(const BitVec& i, const BitVec& k, const TwoBranchState& ct);

// Same procedure on a dense ciphertext with the +- outcome actually sampled;
// this is what a guessing attacker runs with possibly-wrong key material.
// A zero k_guess leaves no pivot to measure, so the attacker outputs a coin.
int py12_decrypt_dense_sampled(const BitVec& i_guess, const BitVec& k_guess, const DenseState& ct,
                               Rng& rng);

}  // namespace qpke
