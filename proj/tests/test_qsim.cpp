#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qpke/qsim.hpp"

using namespace qpke;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

TwoBranchState random_two_branch(int n, Rng& rng, bool dressed = true) {
    BitVec u = random_bits(n, rng);
    BitVec v = random_bits(n, rng);
    while (v == u) v = random_bits(n, rng);
    BitVec h = dressed ? random_bits(n, rng) : BitVec(n);
    BitVec y = dressed ? random_bits(n, rng) : BitVec(n);
    return TwoBranchState(u, v, PhasePower::of(static_cast<int>(rng() % 4)),
                          PhasePower::of(static_cast<int>(rng() % 4)), h, y);
}

}  // namespace

TEST_CASE("phase powers multiply mod 4") {
    CHECK(PhasePower::of(1).value() == Complex(0, 1));
    CHECK((PhasePower::of(3) * PhasePower::of(2)) == PhasePower::of(1));
    CHECK(PhasePower::of(4) == PhasePower::of(0));
    CHECK(PhasePower::of(-1) == PhasePower::of(3));
}

TEST_CASE("expand worked examples") {
    // |0> tensor |+>
    TwoBranchState s(BitVec::from_string("00"), BitVec::from_string("01"), PhasePower{});
    DenseState psi = expand(s);
    CHECK(std::abs(psi.amps[0] - Complex(kInvSqrt2, 0)) < 1e-15);
    CHECK(std::abs(psi.amps[1] - Complex(kInvSqrt2, 0)) < 1e-15);
    CHECK(std::abs(psi.amps[2]) == 0.0);
    CHECK(std::abs(psi.amps[3]) == 0.0);

    // rel = 2 gives |->
    TwoBranchState minus(BitVec::from_string("0"), BitVec::from_string("1"), PhasePower::of(2));
    DenseState m = expand(minus);
    CHECK(std::abs(m.amps[0] - Complex(kInvSqrt2, 0)) < 1e-15);
    CHECK(std::abs(m.amps[1] + Complex(kInvSqrt2, 0)) < 1e-15);
}

TEST_CASE("expand equals gate-by-gate dense application") {
    TwoBranchState s(BitVec::from_string("00"), BitVec::from_string("01"), PhasePower{},
                     PhasePower{}, BitVec::from_string("10"), BitVec::from_string("01"));
    DenseState direct = expand(s);
    DenseState staged = expand(TwoBranchState(s.u, s.v, s.rel));
    staged = apply_hadamard_mask(staged, s.h_mask);
    staged = apply_pauli_mask(staged, Pauli::Y, s.y_mask);
    CHECK(max_amp_diff(direct, staged) < 1e-15);
}

TEST_CASE("expand refuses oversized states") {
    Rng rng(5);
    CHECK_THROWS_AS(expand(random_two_branch(13, rng)), CapacityError);
}

TEST_CASE("unit norm for random expansions") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        DenseState psi = expand(random_two_branch(1 + static_cast<int>(rng() % 6), rng));
        CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("hadamard basics and involution") {
    DenseState zero = DenseState::zero_state(1);
    DenseState plus = apply_hadamard(zero, 1);
    CHECK(std::abs(plus.amps[0] - Complex(kInvSqrt2, 0)) < 1e-15);
    CHECK(std::abs(plus.amps[1] - Complex(kInvSqrt2, 0)) < 1e-15);
    CHECK(max_amp_diff(apply_hadamard(plus, 1), zero) < 1e-15);

    DenseState two = DenseState::zero_state(2);
    DenseState uniform = apply_hadamard_mask(two, BitVec::from_string("11"));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(uniform.amps[i] - Complex(0.5, 0)) < 1e-15);
}

TEST_CASE("pauli definitions on basis states") {
    DenseState zero = DenseState::zero_state(1);
    DenseState y0 = apply_pauli(zero, Pauli::Y, 1);
    CHECK(std::abs(y0.amps[0]) == 0.0);
    CHECK(std::abs(y0.amps[1] - Complex(0, 1)) < 1e-15);  // Y|0> = i|1>

    DenseState one = DenseState::basis_state(BitVec::from_string("1"));
    DenseState y1 = apply_pauli(one, Pauli::Y, 1);
    CHECK(std::abs(y1.amps[0] - Complex(0, -1)) < 1e-15);  // Y|1> = -i|0>

    DenseState z1 = apply_pauli(one, Pauli::Z, 1);
    CHECK(std::abs(z1.amps[1] + Complex(1, 0)) < 1e-15);

    DenseState x0 = apply_pauli(zero, Pauli::X, 1);
    CHECK(std::abs(x0.amps[1] - Complex(1, 0)) < 1e-15);
}

TEST_CASE("pauli mask gates are involutions and preserve norm") {
    Rng rng(11);
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        for (int trial = 0; trial < 20; ++trial) {
            DenseState psi = random_pure_state(4, rng);
            BitVec mask = random_bits(4, rng);
            DenseState once = apply_pauli_mask(psi, p, mask);
            CHECK(std::abs(once.norm() - 1.0) < 1e-12);
            CHECK(max_amp_diff(apply_pauli_mask(once, p, mask), psi) < 1e-12);
        }
    }
}

TEST_CASE("hadamard and cnot preserve norm") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        DenseState psi = random_pure_state(4, rng);
        CHECK(std::abs(apply_hadamard_mask(psi, random_bits(4, rng)).norm() - 1.0) < 1e-12);
        const int control = 1 + static_cast<int>(rng() % 4);
        int target = 1 + static_cast<int>(rng() % 4);
        while (target == control) target = 1 + static_cast<int>(rng() % 4);
        CHECK(std::abs(apply_cnot(psi, control, target).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("mixing is associative, so partitioned reductions agree bit for bit") {
    Rng rng(14);
    std::vector<TwoBranchState> states;
    for (int i = 0; i < 4; ++i) {
        BitVec u = random_bits(3, rng);
        BitVec v = random_bits(3, rng);
        while (v == u) v = random_bits(3, rng);
        states.emplace_back(u, v, PhasePower::of(static_cast<int>(rng() % 4)), PhasePower{},
                            random_bits(3, rng), random_bits(3, rng));
    }
    std::vector<std::pair<double, DensityMatrix>> parts;
    for (const auto& s : states) parts.emplace_back(0.25, density_of_two_branch(s));
    const DensityMatrix flat = mix(parts);
    // same sum as two half-partitions combined
    const DensityMatrix left = mix({parts[0], parts[1], {0.5, DensityMatrix::zero(3)}});
    const DensityMatrix right = mix({parts[2], parts[3], {0.5, DensityMatrix::zero(3)}});
    const DensityMatrix combined = add_scaled(left, right, 1.0);
    CHECK(max_abs_entry_diff(flat, combined) == 0.0);
}

TEST_CASE("Y tensor Y worked example") {
    // Y x Y on (|00>+|01>)/sqrt(2) = (|10>-|11>)/sqrt(2) up to global -1...
    // literal per-qubit action: i(-1)^0 i(-1)^0 |11>, i(-1)^0 i(-1)^1 |10>
    TwoBranchState s(BitVec::from_string("00"), BitVec::from_string("01"), PhasePower{});
    DenseState out = apply_pauli_mask(expand(s), Pauli::Y, BitVec::from_string("11"));
    // i*i = -1 on |00> -> |11>; i*(-i) = 1 ... check against hand expansion:
    // Y Y |00> = (i|1>)(i|1>) = -|11>;  Y Y |01> = (i|1>)(-i|0>) = |10>
    CHECK(std::abs(out.amps[0b11] + Complex(kInvSqrt2, 0)) < 1e-15);
    CHECK(std::abs(out.amps[0b10] - Complex(kInvSqrt2, 0)) < 1e-15);
}

TEST_CASE("Z^n flips the relative phase of odd-weight branch pairs") {
    // (|i> + |i^k>)/sqrt(2) with odd-weight k at n=3
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        BitVec i = random_bits(3, rng);
        BitVec k = random_bits(3, rng);
        if (hamming_weight(k) % 2 == 0 || k.is_zero()) continue;
        TwoBranchState s(i, i ^ k, PhasePower{});
        DenseState dense = apply_pauli_mask(expand(s), Pauli::Z, BitVec::from_string("111"));
        TwoBranchState sym = sym_apply_z_mask(s, BitVec::from_string("111"));
        CHECK(sym.rel == PhasePower::of(2));
        CHECK(max_amp_diff(dense, expand(sym)) < 1e-15);
    }
}

TEST_CASE("cnot on basis states and bell disentangle") {
    DenseState s10 = DenseState::basis_state(BitVec::from_string("10"));
    CHECK(std::abs(apply_cnot(s10, 1, 2).amps[0b11] - Complex(1, 0)) < 1e-15);
    DenseState s01 = DenseState::basis_state(BitVec::from_string("01"));
    CHECK(std::abs(apply_cnot(s01, 1, 2).amps[0b01] - Complex(1, 0)) < 1e-15);

    TwoBranchState bell(BitVec::from_string("00"), BitVec::from_string("11"), PhasePower{});
    DenseState out = apply_cnot(expand(bell), 1, 2);
    CHECK(std::abs(out.amps[0b00] - Complex(kInvSqrt2, 0)) < 1e-15);
    CHECK(std::abs(out.amps[0b10] - Complex(kInvSqrt2, 0)) < 1e-15);
    CHECK_THROWS_AS(apply_cnot(out, 1, 1), DimensionError);
}

TEST_CASE("HYH = -Y as a 1-qubit matrix identity") {
    for (int col = 0; col < 2; ++col) {
        DenseState e = DenseState::basis_state(BitVec::from_index(col, 1));
        DenseState lhs = apply_hadamard(apply_pauli(apply_hadamard(e, 1), Pauli::Y, 1), 1);
        DenseState rhs = apply_pauli(e, Pauli::Y, 1);
        for (int row = 0; row < 2; ++row) CHECK(std::abs(lhs.amps[row] + rhs.amps[row]) < 1e-15);
    }
}

TEST_CASE("symbolic Y-all matches the dense oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        TwoBranchState s = random_two_branch(4, rng);
        TwoBranchState t = sym_apply_y_all(s);
        CHECK(t.y_mask == s.y_mask.complemented());
        CHECK(t.u == s.u);
        CHECK(t.v == s.v);
        CHECK(max_amp_diff(expand(t), apply_pauli_mask(expand(s), Pauli::Y,
                                                       BitVec(4).complemented())) < 1e-12);
    }
    TwoBranchState a(BitVec::from_string("0001"), BitVec::from_string("0111"), PhasePower{},
                     PhasePower{}, BitVec(4), BitVec::from_string("0000"));
    CHECK(sym_apply_y_all(a).y_mask.to_string() == "1111");
    TwoBranchState b(BitVec::from_string("0001"), BitVec::from_string("0111"), PhasePower{},
                     PhasePower{}, BitVec(4), BitVec::from_string("1010"));
    CHECK(sym_apply_y_all(b).y_mask.to_string() == "0101");
}

TEST_CASE("symbolic X and CNOT match the dense oracle") {
    Rng rng(19);
    for (int trial = 0; trial < 60; ++trial) {
        TwoBranchState s = random_two_branch(4, rng, /*dressed=*/false);
        BitVec mask = random_bits(4, rng);
        CHECK(max_amp_diff(expand(sym_apply_x_mask(s, mask)),
                           apply_pauli_mask(expand(s), Pauli::X, mask)) < 1e-12);
        const int control = 1 + static_cast<int>(rng() % 4);
        int target = 1 + static_cast<int>(rng() % 4);
        while (target == control) target = 1 + static_cast<int>(rng() % 4);
        CHECK(max_amp_diff(expand(sym_apply_cnot(s, control, target)),
                           apply_cnot(expand(s), control, target)) < 1e-12);
    }
}

TEST_CASE("undo dressing: clean mask cancellation") {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        TwoBranchState inner = random_two_branch(4, rng, /*dressed=*/false);
        BitVec k2 = random_bits(4, rng);
        BitVec k3 = random_bits(4, rng);
        TwoBranchState dressed(inner.u, inner.v, inner.rel, inner.global, k2, k3);
        TwoBranchState undone = sym_undo_dressing(dressed, k2, k3);
        CHECK(undone == inner);
    }
}

TEST_CASE("undo dressing matches the dense oracle in the flipped case") {
    Rng rng(29);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + trial % 6;  // odd n exercises the imaginary i^n global
        TwoBranchState inner = random_two_branch(n, rng, /*dressed=*/false);
        BitVec k2 = random_bits(n, rng);
        BitVec k3 = random_bits(n, rng);
        // ciphertext of "1": y mask is k3 complemented
        TwoBranchState ct(inner.u, inner.v, inner.rel, inner.global, k2, k3.complemented());
        TwoBranchState undone = sym_undo_dressing(ct, k2, k3);
        CHECK(undone.masks_empty());
        DenseState dense = expand(ct);
        dense = apply_pauli_mask(dense, Pauli::Y, k3);
        dense = apply_hadamard_mask(dense, k2);
        CHECK(max_amp_diff(expand(undone), dense) < 1e-12);
    }
}

TEST_CASE("undo dressing rejects mismatched masks") {
    TwoBranchState ct(BitVec::from_string("0000"), BitVec::from_string("0111"), PhasePower{},
                      PhasePower{}, BitVec::from_string("1100"), BitVec::from_string("0011"));
    CHECK_THROWS_AS(sym_undo_dressing(ct, BitVec::from_string("1101"), BitVec::from_string("0011")),
                    KeyMismatchError);
    // y mask off by one bit: neither all-zero nor all-one leftover
    CHECK_THROWS_AS(sym_undo_dressing(ct, BitVec::from_string("1100"), BitVec::from_string("0111")),
                    KeyMismatchError);
}

TEST_CASE("undressed bit-1 state at k1=0111") {
    // Y^(1^n) (|0>+|0111>)/sqrt(2) = (|1111> - |1000>)/sqrt(2) up to global phase
    TwoBranchState pk(BitVec::from_string("0000"), BitVec::from_string("0111"), PhasePower{});
    TwoBranchState ct = sym_apply_y_all(pk);
    TwoBranchState undone = sym_undo_dressing(ct, BitVec(4), BitVec(4)).canonical();
    CHECK(undone.u.to_string() == "1000");
    CHECK(undone.v.to_string() == "1111");
    CHECK(undone.rel == PhasePower::of(2));  // relative minus
}

TEST_CASE("canonical keeps the physical state") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        TwoBranchState s = random_two_branch(3, rng);
        TwoBranchState c = s.canonical();
        CHECK((c.u < c.v));
        CHECK(max_amp_diff(expand(s), expand(c)) < 1e-12);
    }
}

TEST_CASE("two-branch serialization round trip") {
    Rng rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        TwoBranchState s = random_two_branch(1 + static_cast<int>(rng() % 8), rng);
        CHECK(TwoBranchState::from_line(s.to_line()) == s);
    }
    TwoBranchState s(BitVec::from_string("00"), BitVec::from_string("01"), PhasePower::of(3),
                     PhasePower::of(1), BitVec::from_string("10"), BitVec::from_string("11"));
    CHECK(s.to_line() == "n=2 u=00 v=01 rel=3 global=1 h=10 y=11");
    CHECK_THROWS_AS(TwoBranchState::from_line("n=2 u=00 v=01"), ParseError);
}

TEST_CASE("density worked examples") {
    DensityMatrix d0 = density_of(DenseState::zero_state(1));
    CHECK(std::abs(d0.at(0, 0) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(d0.at(1, 1)) < 1e-15);

    DensityMatrix mixed = mix({{0.5, density_of(DenseState::zero_state(1))},
                               {0.5, density_of(DenseState::basis_state(BitVec::from_string("1")))}});
    CHECK(max_abs_entry_diff(mixed, DensityMatrix::maximally_mixed(1)) < 1e-15);

    // |0>, |1>, |+>, |-> at equal weights is also I/2
    DenseState plus = apply_hadamard(DenseState::zero_state(1), 1);
    DenseState minus = apply_pauli(plus, Pauli::Z, 1);
    DensityMatrix four = mix({{0.25, density_of(DenseState::zero_state(1))},
                              {0.25, density_of(DenseState::basis_state(BitVec::from_string("1")))},
                              {0.25, density_of(plus)},
                              {0.25, density_of(minus)}});
    CHECK(max_abs_entry_diff(four, DensityMatrix::maximally_mixed(1)) < 1e-15);

    CHECK_THROWS_AS(mix({{0.7, d0}, {0.7, d0}}), ParameterError);
}

TEST_CASE("exact two-branch density equals the float path") {
    Rng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        TwoBranchState s = random_two_branch(1 + static_cast<int>(rng() % 5), rng);
        CHECK(max_abs_entry_diff(density_of_two_branch(s), density_of(expand(s))) < 1e-12);
    }
}

TEST_CASE("dressed basis density is the dressed projector") {
    Rng rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        BitVec u = random_bits(n, rng);
        BitVec h = random_bits(n, rng);
        BitVec y = random_bits(n, rng);
        DenseState psi = DenseState::basis_state(u);
        psi = apply_hadamard_mask(psi, h);
        psi = apply_pauli_mask(psi, Pauli::Y, y);
        CHECK(max_abs_entry_diff(density_of_dressed_basis(u, h, y), density_of(psi)) < 1e-12);
    }
}

TEST_CASE("tensor-product density matches the dense tensor") {
    Rng rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        TwoBranchState a = random_two_branch(2, rng);
        TwoBranchState b = random_two_branch(2, rng);
        DensityMatrix exact = density_of_two_branch_product({a, b});
        DensityMatrix floatpath = density_of(tensor(expand(a), expand(b)));
        CHECK(max_abs_entry_diff(exact, floatpath) < 1e-12);
    }
}

TEST_CASE("trace distance worked values") {
    DensityMatrix rho = density_of(DenseState::zero_state(1));
    CHECK(trace_distance(rho, rho) == 0.0);

    DensityMatrix one = density_of(DenseState::basis_state(BitVec::from_string("1")));
    CHECK(std::abs(trace_distance(rho, one) - 1.0) < 1e-12);

    DensityMatrix plus = density_of(apply_hadamard(DenseState::zero_state(1), 1));
    CHECK(std::abs(trace_distance(rho, plus) - kInvSqrt2) < 1e-12);
}

TEST_CASE("trace distance is a metric on sampled triples") {
    Rng rng(53);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        DensityMatrix a = random_density_matrix(n, 3, rng);
        DensityMatrix b = random_density_matrix(n, 3, rng);
        DensityMatrix c = random_density_matrix(n, 3, rng);
        const double ab = trace_distance(a, b);
        const double ba = trace_distance(b, a);
        CHECK(ab == ba);  // symmetry is exact: same difference spectrum
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0 + 1e-12);
        CHECK(trace_distance(a, c) <= ab + trace_distance(b, c) + 1e-10);
    }
}

TEST_CASE("random density matrices satisfy the axioms") {
    Rng rng(59);
    for (int trial = 0; trial < 10; ++trial) {
        DensityMatrix rho = random_density_matrix(2, 4, rng);
        CHECK(std::abs(rho.trace() - Complex(1, 0)) < 1e-12);
        CHECK(is_hermitian(rho, 1e-12));
        CHECK(min_eigenvalue(rho) > -1e-10);
    }
}

TEST_CASE("pm measurement worked examples") {
    DenseState plus = apply_hadamard(DenseState::zero_state(1), 1);
    PmMeasurement mp = measure_pm(plus, 1);
    CHECK(std::abs(mp.prob_plus - 1.0) < 1e-12);
    CHECK(std::abs(mp.prob_minus) < 1e-12);

    DenseState minus = apply_pauli(plus, Pauli::Z, 1);
    PmMeasurement mm = measure_pm(minus, 1);
    CHECK(std::abs(mm.prob_minus - 1.0) < 1e-12);

    PmMeasurement mz = measure_pm(DenseState::zero_state(1), 1);
    CHECK(std::abs(mz.prob_plus - 0.5) < 1e-12);
    CHECK(std::abs(mz.prob_minus - 0.5) < 1e-12);
    CHECK(std::abs(mz.prob_plus + mz.prob_minus - 1.0) < 1e-12);
}

TEST_CASE("measurement probabilities sum to one on random states") {
    Rng rng(61);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        DenseState psi = random_pure_state(n, rng);
        PmMeasurement m = measure_pm(psi, 1 + static_cast<int>(rng() % n));
        CHECK(std::abs(m.prob_plus + m.prob_minus - 1.0) < 1e-12);
    }
}

TEST_CASE("born sampling never returns zero-probability outcomes") {
    Rng rng(67);
    TwoBranchState s(BitVec::from_string("000"), BitVec::from_string("011"), PhasePower{});
    DenseState psi = expand(s);
    for (int trial = 0; trial < 200; ++trial) {
        BitVec y = sample_basis_outcome(psi, rng);
        CHECK((y.to_string() == "000" || y.to_string() == "011"));
    }
}

TEST_CASE("commuting diagram over random symbolic states at n<=6") {
    Rng rng(71);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);  // 2..6
        TwoBranchState s = random_two_branch(n, rng);
        // op: Y-all
        CHECK(max_amp_diff(expand(sym_apply_y_all(s)),
                           apply_pauli_mask(expand(s), Pauli::Y, BitVec(n).complemented())) < 1e-12);
        // op: undo dressing against its own masks (bit-0 shape)
        TwoBranchState undone = sym_undo_dressing(s, s.h_mask, s.y_mask);
        DenseState dense = apply_hadamard_mask(apply_pauli_mask(expand(s), Pauli::Y, s.y_mask),
                                               s.h_mask);
        CHECK(max_amp_diff(expand(undone), dense) < 1e-12);
    }
}
