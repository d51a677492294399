#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qpke/gf2.hpp"
#include "qpke/rng.hpp"

namespace qpke {

using Complex = std::complex<double>;

// Largest qubit count the dense engine will materialize (2^n amplitudes).
inline constexpr int kDenseLimit = 12;

// The scalar i^t. Every phase the protocol produces is a fourth root of
// unity, and the set is closed under all operations used here, so symbolic
// states stay exact at any n.
struct PhasePower {
    int t = 0;

    static PhasePower of(int k) { return PhasePower{((k % 4) + 4) % 4}; }
    PhasePower operator*(PhasePower o) const { return of(t + o.t); }
    Complex value() const {
        static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return table[t & 3];
    }
    bool operator==(const PhasePower&) const = default;
};

// Exact n-qubit state  i^global * Y^y_mask H^h_mask (|u> + i^rel |v>)/sqrt(2).
// Y^mask and H^mask apply the single-qubit gate at every set position. Every
// state the protocol touches has this shape; the branch labels are the only
// O(n) storage.
class TwoBranchState {
  public:
    TwoBranchState(BitVec u, BitVec v, PhasePower rel, PhasePower global, BitVec h_mask,
                   BitVec y_mask);

    // Undressed constructor: (|u> + i^rel |v>)/sqrt(2).
    TwoBranchState(BitVec u, BitVec v, PhasePower rel = {});

    int n;
    BitVec u, v;
    PhasePower rel;
    PhasePower global;
    BitVec h_mask, y_mask;

    bool masks_empty() const { return h_mask.is_zero() && y_mask.is_zero(); }

    // Branch-order normal form (u lexicographically smallest); physically the
    // same state, convenient for comparisons.
    TwoBranchState canonical() const;

    // One line: "n=<int> u=<bits> v=<bits> rel=<0..3> global=<0..3> h=<bits> y=<bits>".
    std::string to_line() const;
    static TwoBranchState from_line(const std::string& line);

    bool operator==(const TwoBranchState&) const = default;
};

// 2^n complex amplitudes; index is the big-endian value of the basis string
// (qubit 1 is the most significant bit).
struct DenseState {
    int n = 0;
    std::vector<Complex> amps;

    static DenseState zero_state(int n, int limit = kDenseLimit);
    static DenseState basis_state(const BitVec& b, int limit = kDenseLimit);
    std::size_t dim() const { return amps.size(); }
    double norm() const;
};

struct DensityMatrix {
    int n = 0;
    std::vector<Complex> a;  // row-major 2^n x 2^n

    static DensityMatrix zero(int n);
    static DensityMatrix maximally_mixed(int n);
    std::size_t dim() const { return std::size_t(1) << n; }
    Complex& at(std::size_t r, std::size_t c) { return a[r * dim() + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return a[r * dim() + c]; }
    Complex trace() const;
};

enum class Pauli { X, Y, Z };

// --- dense engine -----------------------------------------------------------

DenseState expand(const TwoBranchState& s, int limit = kDenseLimit);

DenseState apply_hadamard(const DenseState& psi, int qubit);
DenseState apply_hadamard_mask(const DenseState& psi, const BitVec& mask);
// Per-qubit action on basis states: X|b>=|~b>, Z|b>=(-1)^b |b>, Y|b>=i(-1)^b |~b>.
DenseState apply_pauli(const DenseState& psi, Pauli which, int qubit);
DenseState apply_pauli_mask(const DenseState& psi, Pauli which, const BitVec& mask);
DenseState apply_cnot(const DenseState& psi, int control, int target);

struct PmMeasurement {
    double prob_plus = 0;
    double prob_minus = 0;
    DenseState post_plus;
    DenseState post_minus;
};
// Projective measurement in the {|+>,|->} basis at one qubit.
PmMeasurement measure_pm(const DenseState& psi, int qubit);

// Samples one computational-basis outcome from the Born distribution.
BitVec sample_basis_outcome(const DenseState& psi, Rng& rng);

DenseState tensor(const DenseState& a, const DenseState& b, int limit = kDenseLimit);

double max_amp_diff(const DenseState& a, const DenseState& b);

// --- symbolic engine --------------------------------------------------------

// Y at every qubit: y_mask flips, nothing else moves (Y commutes with Y and
// Y^2 = I).
TwoBranchState sym_apply_y_all(const TwoBranchState& s);

// The following act on undressed states (empty h/y masks).
TwoBranchState sym_apply_x_mask(const TwoBranchState& s, const BitVec& mask);
TwoBranchState sym_apply_z_mask(const TwoBranchState& s, const BitVec& mask);
TwoBranchState sym_apply_cnot(const TwoBranchState& s, int control, int target);

// Applies (Y^k3 H^k2)^dagger and returns the undressed inner state. Requires
// h_mask = k2 and y_mask ^ k3 in {0^n, 1^n}; the leftover Y^(1^n) is pushed
// through H^k2 (per qubit HYH = -Y) and folded into branches and phases.
TwoBranchState sym_undo_dressing(const TwoBranchState& s, const BitVec& k2, const BitVec& k3);

// --- density matrices -------------------------------------------------------

DensityMatrix density_of(const DenseState& psi);

// |psi><psi| for a two-branch state, computed over Gaussian-integer
// numerators with a single power-of-two scale. Every entry is an exactly
// representable dyadic, which makes ensemble sums independent of summation
// order bit for bit.
DensityMatrix density_of_two_branch(const TwoBranchState& s, int limit = kDenseLimit);

// Same exact path for a t-fold tensor product of two-branch states.
DensityMatrix density_of_two_branch_product(const std::vector<TwoBranchState>& factors,
                                            int limit = kDenseLimit);

// Exact density of the dressed single-branch ket Y^y H^h |u> (the inner state
// degenerates to one branch when the ensemble is widened to k1 = 0).
DensityMatrix density_of_dressed_basis(const BitVec& u, const BitVec& h_mask, const BitVec& y_mask,
                                       int limit = kDenseLimit);

DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& parts);

DensityMatrix add_scaled(const DensityMatrix& acc, const DensityMatrix& term, double w);

// Fused U rho U^dagger for one single-qubit gate; coefficients are exact
// (+-1/2 for H, +-1/+-i for Paulis), so dyadic inputs stay dyadic.
DensityMatrix conjugate_hadamard_mask(const DensityMatrix& rho, const BitVec& mask);
DensityMatrix conjugate_pauli_mask(const DensityMatrix& rho, Pauli which, const BitVec& mask);

// Eigenvalues of a Hermitian matrix via cyclic Jacobi sweeps on the real
// symmetric embedding [[Re,-Im],[Im,Re]] (each eigenvalue appears twice).
// Iterates until the off-diagonal Frobenius norm is below 1e-12.
std::vector<double> hermitian_eigenvalues(const DensityMatrix& m);

// (1/2) sum |lambda_i| over eigenvalues of rho - sigma.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

double max_abs_entry_diff(const DensityMatrix& a, const DensityMatrix& b);
bool is_hermitian(const DensityMatrix& m, double tol);
double min_eigenvalue(const DensityMatrix& m);

// Test/verification inputs.
DenseState random_pure_state(int n, Rng& rng, int limit = kDenseLimit);
DensityMatrix random_density_matrix(int n, int components, Rng& rng, int limit = kDenseLimit);

}  // namespace qpke
