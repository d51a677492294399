#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpke/errors.hpp"
#include "qpke/rng.hpp"

namespace qpke {

// Fixed-length bit string over GF(2). Positions are 1-based; position 1 is
// the leftmost (most significant) bit, matching the |0_1,...,0_n> convention,
// and the textual form is the big-endian '0'/'1' string.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(int len) : bits_(check_len(len), 0) {}

    static BitVec from_string(std::string_view s);
    // Big-endian decode of the low `len` bits of idx.
    static BitVec from_index(std::uint64_t idx, int len);

    int len() const { return static_cast<int>(bits_.size()); }

    int bit(int pos) const { return bits_[index(pos)]; }
    void set_bit(int pos, int value) { bits_[index(pos)] = static_cast<std::uint8_t>(value & 1); }

    int weight() const;
    bool is_zero() const { return weight() == 0; }
    bool all_ones() const { return weight() == len(); }

    BitVec complemented() const;
    std::uint64_t to_index() const;  // requires len <= 63
    std::string to_string() const;

    friend BitVec operator^(const BitVec& a, const BitVec& b);
    bool operator==(const BitVec&) const = default;
    // Lexicographic on the big-endian string; used for branch canonicalization.
    bool operator<(const BitVec& other) const { return bits_ < other.bits_; }

  private:
    static int check_len(int len) {
        if (len < 1) throw ParameterError("BitVec length must be >= 1");
        return len;
    }
    int index(int pos) const {
        if (pos < 1 || pos > len()) throw DimensionError("bit position out of range");
        return pos - 1;
    }

    std::vector<std::uint8_t> bits_;  // bits_[0] is position 1
};

int hamming_weight(const BitVec& v);
int gf2_dot(const BitVec& u, const BitVec& v);

// Uniform bit string: len coin flips, position 1 first.
BitVec random_bits(int len, Rng& rng);

// Linear system over GF(2). Without rhs the system is homogeneous; rhs has
// one bit per row. `cols` carries the width when there are no rows yet.
struct Gf2System {
    std::vector<BitVec> rows;
    std::optional<BitVec> rhs;
    int cols = 0;

    int num_cols() const { return rows.empty() ? cols : rows.front().len(); }
};

struct Gf2Solution {
    bool consistent = false;
    BitVec particular;            // meaningful only when consistent
    std::vector<BitVec> nullspace;
    int rank = 0;
};

int gf2_rank(const Gf2System& sys);

// Basis of {x : rows * x = 0}, dimension len - rank. Reduced-row-echelon
// pivoting with lowest-index pivot first; basis vectors are ordered by their
// free-column position, so output is deterministic for a fixed row order.
std::vector<BitVec> gf2_nullspace(const Gf2System& sys);

// Particular solution plus homogeneous basis, or consistent=false.
Gf2Solution gf2_solve(const Gf2System& sys);

}  // namespace qpke
