#include "qpke/boolfunc.hpp"

#include <sstream>

#include "qpke/errors.hpp"

namespace qpke {

int eval_monomial(const Monomial& t, const BitVec& s) {
    if (s.len() != t.mask.len()) throw DimensionError("monomial mask and input differ in length");
    int acc = 1;
    for (int pos = 1; pos <= s.len(); ++pos) {
        const int a = t.mask.bit(pos);
        // s^a = sa (+) a (+) 1
        acc &= (s.bit(pos) & a) ^ a ^ 1;
    }
    return acc;
}

BooleanFunction sample_boolean_function(int m, int n, int p, Rng& rng) {
    if (m < 1 || n < 1 || p < 1) throw ParameterError("sample_boolean_function needs m, n, p >= 1");
    BooleanFunction f;
    f.m = m;
    f.n = n;
    f.p = p;
    f.outputs.resize(n);
    for (int j = 0; j < n; ++j) {
        f.outputs[j].reserve(p);
        for (int t = 0; t < p; ++t) {
            Monomial mono{BitVec(m)};
            for (int pos = 1; pos <= m; ++pos) mono.mask.set_bit(pos, coin(rng));
            f.outputs[j].push_back(std::move(mono));
        }
    }
    return f;
}

BitVec eval_boolean_function(const BooleanFunction& f, const BitVec& s) {
    if (s.len() != f.m) throw DimensionError("input length does not match the function's m");
    BitVec out(f.n);
    for (int j = 0; j < f.n; ++j) {
        int bit = 0;
        for (const Monomial& t : f.outputs[j]) bit ^= eval_monomial(t, s);
        out.set_bit(j + 1, bit);
    }
    return out;
}

std::string serialize(const BooleanFunction& f) {
    std::ostringstream out;
    out << f.m << ' ' << f.n << ' ' << f.p << '\n';
    for (int j = 0; j < f.n; ++j) {
        for (int t = 0; t < f.p; ++t) {
            if (t) out << ' ';
            out << f.outputs[j][t].mask.to_string();
        }
        out << '\n';
    }
    return out.str();
}

BooleanFunction parse_boolean_function(std::istream& in) {
    BooleanFunction f;
    if (!(in >> f.m >> f.n >> f.p)) throw ParseError("bad boolean function header");
    if (f.m < 1 || f.n < 1 || f.p < 1) throw ParseError("boolean function header out of range");
    f.outputs.resize(f.n);
    for (int j = 0; j < f.n; ++j) {
        for (int t = 0; t < f.p; ++t) {
            std::string mask;
            if (!(in >> mask)) throw ParseError("truncated boolean function body");
            BitVec bits = BitVec::from_string(mask);
            if (bits.len() != f.m) throw ParseError("monomial mask length does not match m");
            f.outputs[j].push_back(Monomial{std::move(bits)});
        }
    }
    return f;
}

BooleanFunction parse_boolean_function(const std::string& text) {
    std::istringstream in(text);
    return parse_boolean_function(in);
}

}  // namespace qpke
