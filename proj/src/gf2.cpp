#include "qpke/gf2.hpp"

#include <algorithm>

namespace qpke {

BitVec BitVec::from_string(std::string_view s) {
    if (s.empty()) throw ParseError("empty bit string");
    BitVec v(static_cast<int>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '0') continue;
        if (s[i] == '1')
            v.bits_[i] = 1;
        else
            throw ParseError("bit string may contain only '0' and '1'");
    }
    return v;
}

BitVec BitVec::from_index(std::uint64_t idx, int len) {
    BitVec v(len);
    for (int pos = len; pos >= 1; --pos) {
        v.bits_[pos - 1] = static_cast<std::uint8_t>(idx & 1u);
        idx >>= 1;
    }
    return v;
}

int BitVec::weight() const {
    int w = 0;
    for (auto b : bits_) w += b;
    return w;
}

BitVec BitVec::complemented() const {
    BitVec v(len());
    for (int i = 0; i < len(); ++i) v.bits_[i] = bits_[i] ^ 1u;
    return v;
}

std::uint64_t BitVec::to_index() const {
    if (len() > 63) throw CapacityError("BitVec too long for index conversion");
    std::uint64_t idx = 0;
    for (auto b : bits_) idx = (idx << 1) | b;
    return idx;
}

std::string BitVec::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) s[i] = '1';
    return s;
}

BitVec operator^(const BitVec& a, const BitVec& b) {
    if (a.len() != b.len()) throw DimensionError("xor of BitVecs of different length");
    BitVec r(a.len());
    for (int i = 0; i < a.len(); ++i) r.bits_[i] = a.bits_[i] ^ b.bits_[i];
    return r;
}

int hamming_weight(const BitVec& v) { return v.weight(); }

int gf2_dot(const BitVec& u, const BitVec& v) {
    if (u.len() != v.len()) throw DimensionError("gf2_dot of BitVecs of different length");
    int acc = 0;
    for (int pos = 1; pos <= u.len(); ++pos) acc ^= (u.bit(pos) & v.bit(pos));
    return acc;
}

BitVec random_bits(int len, Rng& rng) {
    BitVec v(len);
    for (int pos = 1; pos <= len; ++pos) v.set_bit(pos, coin(rng));
    return v;
}

namespace {

// Rows packed into 64-bit words; the optional augmented column sits one past
// the coefficient columns.
struct PackedSystem {
    int cols = 0;
    int words = 0;
    bool augmented = false;
    std::vector<std::vector<std::uint64_t>> rows;

    static PackedSystem pack(const Gf2System& sys) {
        PackedSystem p;
        p.cols = sys.num_cols();
        p.augmented = sys.rhs.has_value();
        if (p.augmented && sys.rhs->len() != static_cast<int>(sys.rows.size()))
            throw DimensionError("rhs length must equal the number of rows");
        const int total = p.cols + (p.augmented ? 1 : 0);
        p.words = (total + 63) / 64;
        p.rows.reserve(sys.rows.size());
        for (std::size_t r = 0; r < sys.rows.size(); ++r) {
            const BitVec& row = sys.rows[r];
            if (row.len() != p.cols) throw DimensionError("all rows must share one length");
            std::vector<std::uint64_t> packed(p.words, 0);
            for (int c = 0; c < p.cols; ++c)
                if (row.bit(c + 1)) packed[c / 64] |= (1ULL << (c % 64));
            if (p.augmented && sys.rhs->bit(static_cast<int>(r) + 1))
                packed[p.cols / 64] |= (1ULL << (p.cols % 64));
            p.rows.push_back(std::move(packed));
        }
        return p;
    }

    int get(std::size_t r, int c) const {
        return static_cast<int>((rows[r][c / 64] >> (c % 64)) & 1u);
    }

    void xor_into(std::size_t dst, std::size_t src) {
        for (int w = 0; w < words; ++w) rows[dst][w] ^= rows[src][w];
    }
};

struct Rref {
    PackedSystem sys;
    std::vector<int> pivot_col;   // per pivot row, ascending
    std::vector<int> free_cols;   // ascending

    static Rref reduce(const Gf2System& input) {
        Rref r;
        r.sys = PackedSystem::pack(input);
        std::size_t pivot_row = 0;
        for (int c = 0; c < r.sys.cols; ++c) {
            std::size_t found = r.sys.rows.size();
            for (std::size_t row = pivot_row; row < r.sys.rows.size(); ++row) {
                if (r.sys.get(row, c)) {
                    found = row;
                    break;
                }
            }
            if (found == r.sys.rows.size()) {
                r.free_cols.push_back(c);
                continue;
            }
            std::swap(r.sys.rows[pivot_row], r.sys.rows[found]);
            for (std::size_t row = 0; row < r.sys.rows.size(); ++row) {
                if (row != pivot_row && r.sys.get(row, c)) r.sys.xor_into(row, pivot_row);
            }
            r.pivot_col.push_back(c);
            ++pivot_row;
        }
        return r;
    }

    int rank() const { return static_cast<int>(pivot_col.size()); }

    std::vector<BitVec> nullspace_basis() const {
        std::vector<BitVec> basis;
        basis.reserve(free_cols.size());
        for (int f : free_cols) {
            BitVec x(sys.cols);
            x.set_bit(f + 1, 1);
            for (std::size_t r = 0; r < pivot_col.size(); ++r)
                if (sys.get(r, f)) x.set_bit(pivot_col[r] + 1, 1);
            basis.push_back(std::move(x));
        }
        return basis;
    }
};

}  // namespace

int gf2_rank(const Gf2System& sys) {
    if (sys.rows.empty()) return 0;
    return Rref::reduce(sys).rank();
}

std::vector<BitVec> gf2_nullspace(const Gf2System& sys) {
    if (sys.rhs.has_value()) throw ParameterError("gf2_nullspace expects a homogeneous system");
    if (sys.num_cols() < 1)
        throw ParameterError("gf2_nullspace needs rows or an explicit column count");
    if (sys.rows.empty()) {
        // No constraints: the standard basis spans the whole space.
        std::vector<BitVec> basis;
        for (int c = 1; c <= sys.num_cols(); ++c) {
            BitVec e(sys.num_cols());
            e.set_bit(c, 1);
            basis.push_back(std::move(e));
        }
        return basis;
    }
    Rref r = Rref::reduce(sys);
    return r.nullspace_basis();
}

Gf2Solution gf2_solve(const Gf2System& sys) {
    if (!sys.rhs.has_value()) throw ParameterError("gf2_solve expects a system with rhs");
    Rref r = Rref::reduce(sys);

    Gf2Solution sol;
    sol.rank = r.rank();
    // A zero coefficient row with rhs bit 1 witnesses inconsistency.
    for (std::size_t row = r.pivot_col.size(); row < r.sys.rows.size(); ++row) {
        if (r.sys.get(row, r.sys.cols)) {
            sol.consistent = false;
            return sol;
        }
    }
    sol.consistent = true;
    sol.particular = BitVec(r.sys.cols);
    for (std::size_t row = 0; row < r.pivot_col.size(); ++row)
        if (r.sys.get(row, r.sys.cols)) sol.particular.set_bit(r.pivot_col[row] + 1, 1);
    sol.nullspace = r.nullspace_basis();
    return sol;
}

}  // namespace qpke
