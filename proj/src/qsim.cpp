#include "qpke/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qpke/errors.hpp"

namespace qpke {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_dense_capacity(int n, int limit) {
    if (n < 1) throw ParameterError("qubit count must be >= 1");
    if (n > limit) throw CapacityError("dense engine limited to " + std::to_string(limit) + " qubits");
}

// 0-based bit mask of qubit q (1-based, qubit 1 is the most significant).
std::size_t qubit_mask(int n, int q) {
    if (q < 1 || q > n) throw DimensionError("qubit index out of range");
    return std::size_t(1) << (n - q);
}

}  // namespace

TwoBranchState::TwoBranchState(BitVec u_, BitVec v_, PhasePower rel_, PhasePower global_,
                               BitVec h_mask_, BitVec y_mask_)
    : n(u_.len()),
      u(std::move(u_)),
      v(std::move(v_)),
      rel(rel_),
      global(global_),
      h_mask(std::move(h_mask_)),
      y_mask(std::move(y_mask_)) {
    if (v.len() != n || h_mask.len() != n || y_mask.len() != n)
        throw DimensionError("two-branch state fields differ in length");
    if (u == v) throw ParameterError("two-branch state needs distinct branches");
}

TwoBranchState::TwoBranchState(BitVec u_, BitVec v_, PhasePower rel_)
    : TwoBranchState(u_, v_, rel_, PhasePower{}, BitVec(u_.len()), BitVec(u_.len())) {}

TwoBranchState TwoBranchState::canonical() const {
    if (u < v) return *this;
    // |u> + i^r |v> = i^r (|v> + i^-r |u>)
    return TwoBranchState(v, u, PhasePower::of(-rel.t), global * rel, h_mask, y_mask);
}

std::string TwoBranchState::to_line() const {
    std::ostringstream out;
    out << "n=" << n << " u=" << u.to_string() << " v=" << v.to_string() << " rel=" << rel.t
        << " global=" << global.t << " h=" << h_mask.to_string() << " y=" << y_mask.to_string();
    return out.str();
}

TwoBranchState TwoBranchState::from_line(const std::string& line) {
    std::istringstream in(line);
    std::string tok;
    int n = -1, rel = -1, global = -1;
    std::string u, v, h, y;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("bad two-branch field: " + tok);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "n")
            n = std::stoi(val);
        else if (key == "u")
            u = val;
        else if (key == "v")
            v = val;
        else if (key == "rel")
            rel = std::stoi(val);
        else if (key == "global")
            global = std::stoi(val);
        else if (key == "h")
            h = val;
        else if (key == "y")
            y = val;
        else
            throw ParseError("unknown two-branch field: " + key);
    }
    if (n < 1 || rel < 0 || rel > 3 || global < 0 || global > 3 || u.empty() || v.empty() ||
        h.empty() || y.empty())
        throw ParseError("incomplete two-branch state line");
    TwoBranchState s(BitVec::from_string(u), BitVec::from_string(v), PhasePower::of(rel),
                     PhasePower::of(global), BitVec::from_string(h), BitVec::from_string(y));
    if (s.n != n) throw ParseError("two-branch state n does not match field widths");
    return s;
}

DenseState DenseState::zero_state(int n, int limit) {
    check_dense_capacity(n, limit);
    DenseState s;
    s.n = n;
    s.amps.assign(std::size_t(1) << n, Complex(0, 0));
    s.amps[0] = Complex(1, 0);
    return s;
}

DenseState DenseState::basis_state(const BitVec& b, int limit) {
    DenseState s = zero_state(b.len(), limit);
    s.amps[0] = Complex(0, 0);
    s.amps[b.to_index()] = Complex(1, 0);
    return s;
}

double DenseState::norm() const {
    double acc = 0;
    for (const Complex& a : amps) acc += std::norm(a);
    return std::sqrt(acc);
}

DensityMatrix DensityMatrix::zero(int n) {
    DensityMatrix m;
    m.n = n;
    m.a.assign((std::size_t(1) << n) * (std::size_t(1) << n), Complex(0, 0));
    return m;
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
    DensityMatrix m = zero(n);
    const double w = std::ldexp(1.0, -n);
    for (std::size_t i = 0; i < m.dim(); ++i) m.at(i, i) = w;
    return m;
}

Complex DensityMatrix::trace() const {
    Complex t(0, 0);
    for (std::size_t i = 0; i < dim(); ++i) t += at(i, i);
    return t;
}

DenseState expand(const TwoBranchState& s, int limit) {
    check_dense_capacity(s.n, limit);
    DenseState psi;
    psi.n = s.n;
    psi.amps.assign(std::size_t(1) << s.n, Complex(0, 0));
    psi.amps[s.u.to_index()] = kInvSqrt2;
    psi.amps[s.v.to_index()] = s.rel.value() * kInvSqrt2;
    for (int q = 1; q <= s.n; ++q)
        if (s.h_mask.bit(q)) psi = apply_hadamard(psi, q);
    for (int q = 1; q <= s.n; ++q)
        if (s.y_mask.bit(q)) psi = apply_pauli(psi, Pauli::Y, q);
    const Complex omega = s.global.value();
    if (omega != Complex(1, 0))
        for (Complex& a : psi.amps) a *= omega;
    return psi;
}

DenseState apply_hadamard(const DenseState& psi, int qubit) {
    const std::size_t m = qubit_mask(psi.n, qubit);
    DenseState out = psi;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (i & m) continue;
        const Complex a0 = psi.amps[i];
        const Complex a1 = psi.amps[i | m];
        out.amps[i] = (a0 + a1) * kInvSqrt2;
        out.amps[i | m] = (a0 - a1) * kInvSqrt2;
    }
    return out;
}

DenseState apply_hadamard_mask(const DenseState& psi, const BitVec& mask) {
    if (mask.len() != psi.n) throw DimensionError("mask length does not match qubit count");
    DenseState out = psi;
    for (int q = 1; q <= psi.n; ++q)
        if (mask.bit(q)) out = apply_hadamard(out, q);
    return out;
}

DenseState apply_pauli(const DenseState& psi, Pauli which, int qubit) {
    const std::size_t m = qubit_mask(psi.n, qubit);
    DenseState out = psi;
    const Complex i_unit(0, 1);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (i & m) continue;
        const Complex a0 = psi.amps[i];
        const Complex a1 = psi.amps[i | m];
        switch (which) {
            case Pauli::X:
                out.amps[i] = a1;
                out.amps[i | m] = a0;
                break;
            case Pauli::Y:
                // Y|0> = i|1>, Y|1> = -i|0>
                out.amps[i] = -i_unit * a1;
                out.amps[i | m] = i_unit * a0;
                break;
            case Pauli::Z:
                out.amps[i] = a0;
                out.amps[i | m] = -a1;
                break;
        }
    }
    return out;
}

DenseState apply_pauli_mask(const DenseState& psi, Pauli which, const BitVec& mask) {
    if (mask.len() != psi.n) throw DimensionError("mask length does not match qubit count");
    DenseState out = psi;
    for (int q = 1; q <= psi.n; ++q)
        if (mask.bit(q)) out = apply_pauli(out, which, q);
    return out;
}

DenseState apply_cnot(const DenseState& psi, int control, int target) {
    if (control == target) throw DimensionError("cnot control and target must differ");
    const std::size_t cm = qubit_mask(psi.n, control);
    const std::size_t tm = qubit_mask(psi.n, target);
    DenseState out = psi;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if ((i & cm) && !(i & tm)) {
            out.amps[i] = psi.amps[i | tm];
            out.amps[i | tm] = psi.amps[i];
        }
    }
    return out;
}

PmMeasurement measure_pm(const DenseState& psi, int qubit) {
    const std::size_t m = qubit_mask(psi.n, qubit);
    PmMeasurement r;
    r.post_plus = psi;
    r.post_minus = psi;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (i & m) continue;
        const Complex a0 = psi.amps[i];
        const Complex a1 = psi.amps[i | m];
        const Complex plus = (a0 + a1) * 0.5;
        const Complex minus = (a0 - a1) * 0.5;
        r.post_plus.amps[i] = plus;
        r.post_plus.amps[i | m] = plus;
        r.post_minus.amps[i] = minus;
        r.post_minus.amps[i | m] = -minus;
        r.prob_plus += 2.0 * std::norm(plus);
        r.prob_minus += 2.0 * std::norm(minus);
    }
    const auto renorm = [](DenseState& s, double p) {
        if (p < 1e-300) {
            std::fill(s.amps.begin(), s.amps.end(), Complex(0, 0));
            return;
        }
        const double inv = 1.0 / std::sqrt(p);
        for (Complex& a : s.amps) a *= inv;
    };
    renorm(r.post_plus, r.prob_plus);
    renorm(r.post_minus, r.prob_minus);
    return r;
}

BitVec sample_basis_outcome(const DenseState& psi, Rng& rng) {
    double total = 0;
    for (const Complex& a : psi.amps) total += std::norm(a);
    if (total <= 0) throw ParameterError("cannot sample from a zero state");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double r = unif(rng) * total;
    double acc = 0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        const double p = std::norm(psi.amps[i]);
        if (p <= 0) continue;  // probability-zero outcomes are never produced
        last_positive = i;
        acc += p;
        if (r < acc) return BitVec::from_index(i, psi.n);
    }
    return BitVec::from_index(last_positive, psi.n);
}

DenseState tensor(const DenseState& a, const DenseState& b, int limit) {
    check_dense_capacity(a.n + b.n, limit);
    DenseState out;
    out.n = a.n + b.n;
    out.amps.assign(std::size_t(1) << out.n, Complex(0, 0));
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a.amps[i] == Complex(0, 0)) continue;
        for (std::size_t j = 0; j < b.dim(); ++j) out.amps[(i << b.n) | j] = a.amps[i] * b.amps[j];
    }
    return out;
}

double max_amp_diff(const DenseState& a, const DenseState& b) {
    if (a.n != b.n) throw DimensionError("states differ in qubit count");
    double worst = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a.amps[i] - b.amps[i]));
    return worst;
}

TwoBranchState sym_apply_y_all(const TwoBranchState& s) {
    BitVec ones = BitVec(s.n).complemented();
    return TwoBranchState(s.u, s.v, s.rel, s.global, s.h_mask, s.y_mask ^ ones);
}

TwoBranchState sym_apply_x_mask(const TwoBranchState& s, const BitVec& mask) {
    if (!s.masks_empty()) throw ParameterError("symbolic X needs an undressed state");
    return TwoBranchState(s.u ^ mask, s.v ^ mask, s.rel, s.global, s.h_mask, s.y_mask);
}

TwoBranchState sym_apply_z_mask(const TwoBranchState& s, const BitVec& mask) {
    if (!s.masks_empty()) throw ParameterError("symbolic Z needs an undressed state");
    // Z^mask |b> = (-1)^{mask.b} |b>
    const int du = gf2_dot(mask, s.u);
    const int dv = gf2_dot(mask, s.v);
    return TwoBranchState(s.u, s.v, s.rel * PhasePower::of(2 * (du ^ dv)),
                          s.global * PhasePower::of(2 * du), s.h_mask, s.y_mask);
}

TwoBranchState sym_apply_cnot(const TwoBranchState& s, int control, int target) {
    if (!s.masks_empty()) throw ParameterError("symbolic CNOT needs an undressed state");
    if (control == target) throw DimensionError("cnot control and target must differ");
    BitVec u = s.u, v = s.v;
    if (u.bit(control)) u.set_bit(target, u.bit(target) ^ 1);
    if (v.bit(control)) v.set_bit(target, v.bit(target) ^ 1);
    return TwoBranchState(u, v, s.rel, s.global, s.h_mask, s.y_mask);
}

TwoBranchState sym_undo_dressing(const TwoBranchState& s, const BitVec& k2, const BitVec& k3) {
    if (k2.len() != s.n || k3.len() != s.n) throw DimensionError("key mask length mismatch");
    if (!(s.h_mask == k2)) throw KeyMismatchError("ciphertext does not match key (h mask)");
    const BitVec leftover = s.y_mask ^ k3;
    const BitVec none(s.n);
    if (leftover == none)
        return TwoBranchState(s.u, s.v, s.rel, s.global, none, none);
    if (!leftover.all_ones()) throw KeyMismatchError("ciphertext does not match key (y mask)");
    // H^k2 Y^(1^n) H^k2 = (-1)^W(k2) Y^(1^n);  Y^(1^n)|b> = i^n (-1)^W(b) |~b>.
    const int wu = s.u.weight();
    const int wv = s.v.weight();
    PhasePower rel = s.rel * PhasePower::of(2 * (wu + wv));
    PhasePower global = s.global * PhasePower::of(s.n + 2 * wu + 2 * k2.weight());
    return TwoBranchState(s.u.complemented(), s.v.complemented(), rel, global, none, none);
}

DensityMatrix density_of(const DenseState& psi) {
    DensityMatrix m = DensityMatrix::zero(psi.n);
    for (std::size_t r = 0; r < psi.dim(); ++r) {
        if (psi.amps[r] == Complex(0, 0)) continue;
        for (std::size_t c = 0; c < psi.dim(); ++c) m.at(r, c) = psi.amps[r] * std::conj(psi.amps[c]);
    }
    return m;
}

namespace {

// Gaussian-integer amplitude numerators: the true amplitudes are
// g * 2^(-exp2/2), so density entries g_r * conj(g_c) * 2^(-exp2) are exact
// dyadics as long as the integers fit the double mantissa.
struct Numerators {
    int n = 0;
    int exp2 = 0;
    std::vector<Complex> g;
};

void butterfly_masks(Numerators& num, const BitVec& h_mask, const BitVec& y_mask) {
    const std::size_t dim = num.g.size();
    for (int q = 1; q <= num.n; ++q) {
        if (!h_mask.bit(q)) continue;
        const std::size_t m = qubit_mask(num.n, q);
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & m) continue;
            const Complex a0 = num.g[i], a1 = num.g[i | m];
            num.g[i] = a0 + a1;
            num.g[i | m] = a0 - a1;
        }
    }
    const Complex i_unit(0, 1);
    for (int q = 1; q <= num.n; ++q) {
        if (!y_mask.bit(q)) continue;
        const std::size_t m = qubit_mask(num.n, q);
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & m) continue;
            const Complex a0 = num.g[i], a1 = num.g[i | m];
            num.g[i] = -i_unit * a1;
            num.g[i | m] = i_unit * a0;
        }
    }
}

Numerators two_branch_numerators(const TwoBranchState& s) {
    Numerators num;
    num.n = s.n;
    num.exp2 = s.h_mask.weight() + 1;
    num.g.assign(std::size_t(1) << s.n, Complex(0, 0));
    num.g[s.u.to_index()] += s.global.value();
    num.g[s.v.to_index()] += (s.global * s.rel).value();
    butterfly_masks(num, s.h_mask, s.y_mask);
    return num;
}

Numerators tensor_numerators(const Numerators& a, const Numerators& b) {
    Numerators out;
    out.n = a.n + b.n;
    out.exp2 = a.exp2 + b.exp2;
    out.g.assign(std::size_t(1) << out.n, Complex(0, 0));
    for (std::size_t i = 0; i < a.g.size(); ++i) {
        if (a.g[i] == Complex(0, 0)) continue;
        for (std::size_t j = 0; j < b.g.size(); ++j) out.g[(i << b.n) | j] = a.g[i] * b.g[j];
    }
    return out;
}

DensityMatrix density_from_numerators(const Numerators& num) {
    const double scale = std::ldexp(1.0, -num.exp2);
    const std::size_t dim = num.g.size();
    DensityMatrix rho = DensityMatrix::zero(num.n);
    for (std::size_t r = 0; r < dim; ++r) {
        if (num.g[r] == Complex(0, 0)) continue;
        for (std::size_t c = 0; c < dim; ++c)
            if (num.g[c] != Complex(0, 0)) rho.at(r, c) = num.g[r] * std::conj(num.g[c]) * scale;
    }
    return rho;
}

}  // namespace

DensityMatrix density_of_two_branch(const TwoBranchState& s, int limit) {
    check_dense_capacity(s.n, limit);
    return density_from_numerators(two_branch_numerators(s));
}

DensityMatrix density_of_two_branch_product(const std::vector<TwoBranchState>& factors, int limit) {
    if (factors.empty()) throw ParameterError("empty tensor product");
    int total = 0;
    for (const TwoBranchState& s : factors) total += s.n;
    check_dense_capacity(total, limit);
    Numerators acc = two_branch_numerators(factors.front());
    for (std::size_t i = 1; i < factors.size(); ++i)
        acc = tensor_numerators(acc, two_branch_numerators(factors[i]));
    return density_from_numerators(acc);
}

DensityMatrix density_of_dressed_basis(const BitVec& u, const BitVec& h_mask, const BitVec& y_mask,
                                       int limit) {
    check_dense_capacity(u.len(), limit);
    if (h_mask.len() != u.len() || y_mask.len() != u.len())
        throw DimensionError("mask length does not match qubit count");
    Numerators num;
    num.n = u.len();
    num.exp2 = h_mask.weight();
    num.g.assign(std::size_t(1) << num.n, Complex(0, 0));
    num.g[u.to_index()] = Complex(1, 0);
    butterfly_masks(num, h_mask, y_mask);
    return density_from_numerators(num);
}

DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& parts) {
    if (parts.empty()) throw ParameterError("mix needs at least one component");
    double wsum = 0;
    for (const auto& [w, rho] : parts) {
        if (w < 0) throw ParameterError("mixture weights must be nonnegative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12) throw ParameterError("mixture weights must sum to 1");
    DensityMatrix acc = DensityMatrix::zero(parts.front().second.n);
    for (const auto& [w, rho] : parts) acc = add_scaled(acc, rho, w);
    return acc;
}

DensityMatrix add_scaled(const DensityMatrix& acc, const DensityMatrix& term, double w) {
    if (acc.n != term.n) throw DimensionError("density matrices differ in dimension");
    DensityMatrix out = acc;
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += w * term.a[i];
    return out;
}

DensityMatrix conjugate_hadamard_mask(const DensityMatrix& rho, const BitVec& mask) {
    if (mask.len() != rho.n) throw DimensionError("mask length does not match qubit count");
    DensityMatrix out = rho;
    const std::size_t dim = rho.dim();
    for (int q = 1; q <= rho.n; ++q) {
        if (!mask.bit(q)) continue;
        const std::size_t m = qubit_mask(rho.n, q);
        DensityMatrix next = out;
        for (std::size_t r = 0; r < dim; ++r) {
            if (r & m) continue;
            for (std::size_t c = 0; c < dim; ++c) {
                if (c & m) continue;
                const Complex b00 = out.at(r, c), b01 = out.at(r, c | m);
                const Complex b10 = out.at(r | m, c), b11 = out.at(r | m, c | m);
                next.at(r, c) = (b00 + b01 + b10 + b11) * 0.5;
                next.at(r, c | m) = (b00 - b01 + b10 - b11) * 0.5;
                next.at(r | m, c) = (b00 + b01 - b10 - b11) * 0.5;
                next.at(r | m, c | m) = (b00 - b01 - b10 + b11) * 0.5;
            }
        }
        out = std::move(next);
    }
    return out;
}

DensityMatrix conjugate_pauli_mask(const DensityMatrix& rho, Pauli which, const BitVec& mask) {
    if (mask.len() != rho.n) throw DimensionError("mask length does not match qubit count");
    DensityMatrix out = rho;
    const std::size_t dim = rho.dim();
    for (int q = 1; q <= rho.n; ++q) {
        if (!mask.bit(q)) continue;
        const std::size_t m = qubit_mask(rho.n, q);
        DensityMatrix next = out;
        for (std::size_t r = 0; r < dim; ++r) {
            if (r & m) continue;
            for (std::size_t c = 0; c < dim; ++c) {
                if (c & m) continue;
                const Complex b00 = out.at(r, c), b01 = out.at(r, c | m);
                const Complex b10 = out.at(r | m, c), b11 = out.at(r | m, c | m);
                switch (which) {
                    case Pauli::X:
                        next.at(r, c) = b11;
                        next.at(r, c | m) = b10;
                        next.at(r | m, c) = b01;
                        next.at(r | m, c | m) = b00;
                        break;
                    case Pauli::Y:
                        next.at(r, c) = b11;
                        next.at(r, c | m) = -b10;
                        next.at(r | m, c) = -b01;
                        next.at(r | m, c | m) = b00;
                        break;
                    case Pauli::Z:
                        next.at(r, c) = b00;
                        next.at(r, c | m) = -b01;
                        next.at(r | m, c) = -b10;
                        next.at(r | m, c | m) = b11;
                        break;
                }
            }
        }
        out = std::move(next);
    }
    return out;
}

namespace {

// Cyclic Jacobi on a real symmetric matrix, row-major, in place. Sweeps until
// the off-diagonal Frobenius norm drops below tol.
std::vector<double> jacobi_symmetric_eigenvalues(std::vector<double>& a, std::size_t d, double tol) {
    auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * d + c]; };
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0;
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = r + 1; c < d; ++c) off += 2 * at(r, c) * at(r, c);
        if (std::sqrt(off) < tol) {
            std::vector<double> eig(d);
            for (std::size_t i = 0; i < d; ++i) eig[i] = at(i, i);
            return eig;
        }
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2 * apq);
                const double sgn = theta >= 0 ? 1.0 : -1.0;
                const double t = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1.0 / std::sqrt(t * t + 1);
                const double s = t * c;
                const double tau = s / (1 + c);
                const double app = at(p, p), aqq = at(q, q);
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = at(q, p) = 0;
                for (std::size_t r = 0; r < d; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = at(r, p), arq = at(r, q);
                    at(r, p) = at(p, r) = arp - s * (arq + tau * arp);
                    at(r, q) = at(q, r) = arq + s * (arp - tau * arq);
                }
            }
        }
    }
    throw std::runtime_error("jacobi eigenvalue iteration did not converge");
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const DensityMatrix& m) {
    const std::size_t d = m.dim();
    const std::size_t dd = 2 * d;
    std::vector<double> re(dd * dd, 0.0);
    // [[Re, -Im], [Im, Re]] is symmetric when m is Hermitian and carries each
    // eigenvalue of m twice.
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const Complex z = m.at(r, c);
            re[r * dd + c] = z.real();
            re[(r + d) * dd + (c + d)] = z.real();
            re[r * dd + (c + d)] = -z.imag();
            re[(r + d) * dd + c] = z.imag();
        }
    }
    std::vector<double> doubled = jacobi_symmetric_eigenvalues(re, dd, 1e-12);
    std::sort(doubled.begin(), doubled.end());
    // Collapse the doubled spectrum pairwise.
    std::vector<double> eig(d);
    for (std::size_t i = 0; i < d; ++i) eig[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    return eig;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.n != sigma.n) throw DimensionError("density matrices differ in dimension");
    // Orient the difference deterministically so D(a,b) and D(b,a) run the
    // eigenvalue iteration on the identical matrix (exact symmetry).
    const DensityMatrix* first = &rho;
    const DensityMatrix* second = &sigma;
    for (std::size_t i = 0; i < rho.a.size(); ++i) {
        if (rho.a[i].real() != sigma.a[i].real()) {
            if (rho.a[i].real() < sigma.a[i].real()) std::swap(first, second);
            break;
        }
        if (rho.a[i].imag() != sigma.a[i].imag()) {
            if (rho.a[i].imag() < sigma.a[i].imag()) std::swap(first, second);
            break;
        }
    }
    DensityMatrix diff = add_scaled(*first, *second, -1.0);
    double acc = 0;
    for (double lambda : hermitian_eigenvalues(diff)) acc += std::abs(lambda);
    return 0.5 * acc;
}

double max_abs_entry_diff(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.n != b.n) throw DimensionError("density matrices differ in dimension");
    double worst = 0;
    for (std::size_t i = 0; i < a.a.size(); ++i) worst = std::max(worst, std::abs(a.a[i] - b.a[i]));
    return worst;
}

bool is_hermitian(const DensityMatrix& m, double tol) {
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = r; c < m.dim(); ++c)
            if (std::abs(m.at(r, c) - std::conj(m.at(c, r))) > tol) return false;
    return true;
}

double min_eigenvalue(const DensityMatrix& m) {
    std::vector<double> eig = hermitian_eigenvalues(m);
    return *std::min_element(eig.begin(), eig.end());
}

DenseState random_pure_state(int n, Rng& rng, int limit) {
    check_dense_capacity(n, limit);
    std::normal_distribution<double> gauss(0.0, 1.0);
    DenseState psi;
    psi.n = n;
    psi.amps.resize(std::size_t(1) << n);
    for (Complex& a : psi.amps) a = Complex(gauss(rng), gauss(rng));
    const double nrm = psi.norm();
    for (Complex& a : psi.amps) a /= nrm;
    return psi;
}

DensityMatrix random_density_matrix(int n, int components, Rng& rng, int limit) {
    if (components < 1) throw ParameterError("need at least one component");
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    std::vector<std::pair<double, DensityMatrix>> parts;
    double wsum = 0;
    std::vector<double> weights(components);
    for (double& w : weights) {
        w = unif(rng);
        wsum += w;
    }
    for (int i = 0; i < components; ++i)
        parts.emplace_back(weights[i] / wsum, density_of(random_pure_state(n, rng, limit)));
    // Renormalize exactly once more to absorb rounding in the weight sum.
    double total = 0;
    for (auto& [w, rho] : parts) total += w;
    for (auto& [w, rho] : parts) w /= total;
    return mix(parts);
}

}  // namespace qpke
