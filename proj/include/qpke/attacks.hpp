#pragma once

#include <utility>
#include <vector>

#include "qpke/boolfunc.hpp"
#include "qpke/gf2.hpp"
#include "qpke/qsim.hpp"
#include "qpke/rng.hpp"

namespace qpke {

// Hadamard-transform measurement of one state copy: expand, apply H at every
// qubit, sample a basis outcome from the Born distribution. Against an
// undressed |u>+|v> every outcome y satisfies y.(u^v)=0; the dressing masks
// of the newer scheme break that relation.
BitVec hadamard_attack_sample(const TwoBranchState& state, Rng& rng, int limit = kDenseLimit);

struct KRecovery {
    bool found = false;
    BitVec k;     // meaningful when found
    int rank = 0; // rank of the sample system either way
};

// Nullspace of the homogeneous sample system; unique nonzero solution means
// the key is pinned down, anything else is "insufficient".
KRecovery recover_k_from_samples(const std::vector<BitVec>& samples, int n);

// ANF recovered from (s, F(s)) observations over the full 2^m monomial basis;
// no sparsity knowledge assumed. With all 2^m inputs observed the solution is
// unique and equals F everywhere.
struct AnfRecovery {
    bool consistent = false;
    bool underdetermined = false;
    int m = 0;
    int n = 0;
    std::vector<std::vector<Monomial>> outputs;  // monomials with coefficient 1

    BitVec eval(const BitVec& s) const;
};

AnfRecovery recover_boolean_function(const std::vector<std::pair<BitVec, BitVec>>& pairs, int m,
                                     int n);

// Partial-key guessing attack against the prior scheme: reveal the first n-l
// bits of k, guess the last l uniformly, run the dense decryption procedure
// with the guessed key on a fresh ciphertext of a random bit (measurement
// sampled), count message hits.
struct GuessingEstimate {
    int n = 0;
    int l = 0;
    long trials = 0;
    long successes = 0;
    double success_rate = 0;
    double half_width = 0;  // 95% binomial confidence half-width
};

GuessingEstimate guessing_attack_estimate(int n, int l, long trials, Rng& rng);

// Uniform average over the full ensemble (k1 odd-weight, k2, k3 free) of the
// t-fold tensor product of ciphertext states with the given bit pattern, all
// copies sharing one key. Entries are exact dyadics, so the result is
// bit-identical for any enumeration order.
DensityMatrix multi_copy_mixture(int n, int t, const std::vector<int>& pattern,
                                 int limit = kDenseLimit);
DensityMatrix multi_copy_mixture_reversed(int n, int t, const std::vector<int>& pattern,
                                          int limit = kDenseLimit);

// --- end-to-end attack runs (transcript material for the CLI) -----------------

struct Py12AttackRun {
    BitVec k_true;
    std::vector<BitVec> samples;
    std::vector<int> rank_progression;  // rank after each sample
    bool all_orthogonal = true;         // every sample orthogonal to k_true
    bool recovered = false;
    BitVec k_found;
    int samples_used = 0;
};

// Full pipeline against the prior scheme: key from a sampled Boolean
// function, fresh basis offset per issued copy, sample until the nullspace
// pins one candidate or max_samples is hit.
Py12AttackRun run_py12_attack(int n, int m, int p, int max_samples, Rng& rng);

struct NewSchemeAttackRun {
    BitVec k1_true;
    bool produced_candidate = false;
    BitVec k_found;
    bool success = false;
    int final_rank = 0;
};

// Same pipeline pointed at the newer scheme: fixed k1, uniformly random
// (k2, k3) dressing per sampled copy.
NewSchemeAttackRun run_newscheme_attack(int n, int samples, Rng& rng);

// Random odd-weight bit string (rejection sampling).
BitVec random_odd_weight(int n, Rng& rng);

}  // namespace qpke
