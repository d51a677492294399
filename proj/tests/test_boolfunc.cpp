#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpke/boolfunc.hpp"

using namespace qpke;

namespace {

// Independent oracle: a monomial is the subset test on integer bit masks,
// an output the XOR over its terms.
int oracle_eval_output(const std::vector<Monomial>& terms, const BitVec& s) {
    const std::uint64_t s_int = s.to_index();
    int acc = 0;
    for (const Monomial& t : terms) {
        const std::uint64_t mask = t.mask.to_index();
        acc ^= ((s_int & mask) == mask) ? 1 : 0;
    }
    return acc;
}

}  // namespace

TEST_CASE("monomial evaluation pins x^0 = 1") {
    Monomial empty{BitVec::from_string("000")};
    Rng rng(3);
    for (int trial = 0; trial < 8; ++trial) CHECK(eval_monomial(empty, random_bits(3, rng)) == 1);
    CHECK(eval_monomial(Monomial{BitVec::from_string("110")}, BitVec::from_string("110")) == 1);
    CHECK(eval_monomial(Monomial{BitVec::from_string("110")}, BitVec::from_string("100")) == 0);
    CHECK_THROWS_AS(eval_monomial(empty, BitVec::from_string("01")), DimensionError);
}

TEST_CASE("cancelling constant terms") {
    BooleanFunction f;
    f.m = 3;
    f.n = 2;
    f.p = 2;
    f.outputs = {{Monomial{BitVec(3)}, Monomial{BitVec(3)}},
                 {Monomial{BitVec(3)}, Monomial{BitVec(3)}}};
    for (std::uint64_t idx = 0; idx < 8; ++idx)
        CHECK(eval_boolean_function(f, BitVec::from_index(idx, 3)) == BitVec(2));
}

TEST_CASE("worked two-term output") {
    BooleanFunction f;
    f.m = 3;
    f.n = 1;
    f.p = 2;
    f.outputs = {{Monomial{BitVec::from_string("110")}, Monomial{BitVec::from_string("001")}}};
    CHECK(eval_boolean_function(f, BitVec::from_string("111")).bit(1) == 0);  // 1 xor 1
    CHECK(eval_boolean_function(f, BitVec::from_string("110")).bit(1) == 1);  // 1 xor 0
    // full truth table against the oracle
    for (std::uint64_t idx = 0; idx < 8; ++idx) {
        BitVec s = BitVec::from_index(idx, 3);
        CHECK(eval_boolean_function(f, s).bit(1) == oracle_eval_output(f.outputs[0], s));
    }
}

TEST_CASE("evaluation agrees with the truth-table oracle on random functions") {
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 7);  // 2..8
        const int n = 1 + static_cast<int>(rng() % 4);
        const int p = 1 + static_cast<int>(rng() % 4);
        BooleanFunction f = sample_boolean_function(m, n, p, rng);
        for (std::uint64_t idx = 0; idx < (std::uint64_t(1) << m); ++idx) {
            BitVec s = BitVec::from_index(idx, m);
            BitVec out = eval_boolean_function(f, s);
            for (int j = 0; j < n; ++j) CHECK(out.bit(j + 1) == oracle_eval_output(f.outputs[j], s));
        }
    }
}

TEST_CASE("doubling a monomial cancels it") {
    Rng rng(43);
    BooleanFunction f = sample_boolean_function(5, 3, 2, rng);
    BooleanFunction g = f;
    Monomial extra{random_bits(5, rng)};
    g.outputs[1].push_back(extra);
    g.outputs[1].push_back(extra);
    g.p += 2;  // not uniform across outputs, but eval only walks the lists
    for (std::uint64_t idx = 0; idx < 32; ++idx) {
        BitVec s = BitVec::from_index(idx, 5);
        CHECK(eval_boolean_function(f, s) == eval_boolean_function(g, s));
    }
}

TEST_CASE("sampling is reproducible and consumes n*p*m flips") {
    Rng a(99), b(99);
    BooleanFunction f1 = sample_boolean_function(2, 2, 2, a);
    BooleanFunction f2 = sample_boolean_function(2, 2, 2, b);
    CHECK(f1 == f2);
    // 8 flips consumed: both engines must be in the same position afterwards.
    CHECK(a() == b());

    Rng c(99), d(99);
    sample_boolean_function(8, 8, 4, c);
    d.discard(256);  // n*p*m = 8*4*8
    CHECK(c() == d());

    Rng e(100);
    CHECK_FALSE(sample_boolean_function(2, 2, 2, e) == f1);
}

TEST_CASE("repeated evaluation is identical") {
    Rng rng(47);
    BooleanFunction f = sample_boolean_function(6, 4, 3, rng);
    BitVec s = random_bits(6, rng);
    BitVec first = eval_boolean_function(f, s);
    for (int rep = 0; rep < 10; ++rep) CHECK(eval_boolean_function(f, s) == first);
}

TEST_CASE("coefficient frequencies are fair over many samples") {
    // 10^4 samples at m=4, n=4, p=2: every coefficient position within 0.5 +- 0.02.
    Rng rng(53);
    const int samples = 10000;
    int counts[4][2][4] = {};
    for (int s = 0; s < samples; ++s) {
        BooleanFunction f = sample_boolean_function(4, 4, 2, rng);
        for (int j = 0; j < 4; ++j)
            for (int t = 0; t < 2; ++t)
                for (int pos = 1; pos <= 4; ++pos)
                    counts[j][t][pos - 1] += f.outputs[j][t].mask.bit(pos);
    }
    for (int j = 0; j < 4; ++j)
        for (int t = 0; t < 2; ++t)
            for (int pos = 0; pos < 4; ++pos) {
                const double freq = counts[j][t][pos] / static_cast<double>(samples);
                CHECK(freq == doctest::Approx(0.5).epsilon(0.04));  // +-0.02 absolute
            }
}

TEST_CASE("serialization round trip is bit exact") {
    Rng rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 8);
        const int n = 1 + static_cast<int>(rng() % 5);
        const int p = 1 + static_cast<int>(rng() % 5);
        BooleanFunction f = sample_boolean_function(m, n, p, rng);
        CHECK(parse_boolean_function(serialize(f)) == f);
    }
    CHECK_THROWS_AS(parse_boolean_function(std::string("2 1")), ParseError);
    CHECK_THROWS_AS(parse_boolean_function(std::string("2 1 1\n0")), ParseError);
}
