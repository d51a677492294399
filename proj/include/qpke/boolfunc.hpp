#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qpke/gf2.hpp"
#include "qpke/rng.hpp"

namespace qpke {

// One AND-monomial over m inputs. The mask selects which variables appear;
// x^a = xa (+) a (+) 1, so an unselected variable contributes the constant 1
// and the empty mask is the constant-1 term.
struct Monomial {
    BitVec mask;

    bool operator==(const Monomial&) const = default;
};

int eval_monomial(const Monomial& t, const BitVec& s);

// m-input n-output Boolean function in minor-term (monomial XOR) form:
// output j is the XOR of exactly p monomials. This is the private-key
// material of both schemes.
struct BooleanFunction {
    int m = 0;
    int n = 0;
    int p = 0;
    std::vector<std::vector<Monomial>> outputs;  // n lists of p monomials

    bool operator==(const BooleanFunction&) const = default;
};

// Every coefficient is one independent coin flip, consumed output-major,
// term-next, variable-minor: n*p*m flips total, so a seed reproduces the
// function bit-exactly.
BooleanFunction sample_boolean_function(int m, int n, int p, Rng& rng);

BitVec eval_boolean_function(const BooleanFunction& f, const BitVec& s);

// Text form: header "m n p", then n lines of p whitespace-separated masks.
std::string serialize(const BooleanFunction& f);
BooleanFunction parse_boolean_function(std::istream& in);
BooleanFunction parse_boolean_function(const std::string& text);

}  // namespace qpke
