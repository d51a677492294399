#pragma once

#include "qpke/gf2.hpp"
#include "qpke/qsim.hpp"
#include "qpke/rng.hpp"

namespace qpke {

// Which inner branch differences the ensemble sums over. The scheme issues
// odd-weight k1 only, but the maximally-mixed conclusion holds for the
// unrestricted sum too; exposing the domain keeps both checkable.
enum class K1Domain { OddWeight, AllNonzero, All };

// Exact uniform mixture over k1 in the domain and free k2, k3 of the
// ciphertext density for the given bit. Entries are exact dyadics, so the
// result does not depend on enumeration order, bit for bit.
DensityMatrix ensemble_mixture(int n, int bit, K1Domain domain = K1Domain::OddWeight,
                               int limit = kDenseLimit);
DensityMatrix ensemble_mixture_reversed(int n, int bit, K1Domain domain = K1Domain::OddWeight,
                                        int limit = kDenseLimit);

// 2^(-2n) sum_{alpha,beta} Y^alpha H^beta rho H^beta Y^alpha; equals I/2^n
// for every density input.
DensityMatrix perfect_encryption_transform(const DensityMatrix& rho, int limit = kDenseLimit);

struct MixedVerdict {
    bool pass = false;
    double max_deviation = 0;  // entrywise max |rho - I/2^n|
};

MixedVerdict check_maximally_mixed(const DensityMatrix& rho, double tol);

// Trace distance between the bit-0 and bit-1 full mixtures: what a key-less
// adversary could exploit to tell the two messages apart.
double bit_mixture_distance(int n, K1Domain domain = K1Domain::OddWeight);

// Trace distance between two independently enumerated full mixtures of the
// same bit; the enumerations run in opposite orders.
double reenumerated_mixture_distance(int n, int bit, K1Domain domain = K1Domain::OddWeight);

// Sampled-ensemble studies backing the convergence claims.
DensityMatrix sampled_mixture(int n, int bit, int count, Rng& rng, int limit = kDenseLimit);
// Bit-0 vs bit-1 mixtures over one shared sampled key set.
double sampled_bit_mixture_distance(int n, int count, Rng& rng);
// Same bit over two disjoint sampled key sets.
double disjoint_sample_distance(int n, int bit, int count, Rng& rng);

// trace(Y^a H^b * H^d Y^c) for single-qubit masks; the 4^n operators are
// pairwise trace-orthogonal, which is what makes them an operator basis.
Complex basis_overlap_trace(const BitVec& alpha, const BitVec& beta, const BitVec& gamma,
                            const BitVec& delta, int limit = kDenseLimit);

}  // namespace qpke
