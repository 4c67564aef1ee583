#ifndef XYZCA_GF2_H
#define XYZCA_GF2_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xyzca {

constexpr std::size_t words_for_bits(std::size_t n) {
    return (n + 63) / 64;
}

/// Word-level kernels shared by rows, matrices and lattice planes. Every span
/// holds `words_for_bits(n)` words and keeps bits at positions >= n cleared.
namespace bitops {

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
std::size_t popcount(std::span<const std::uint64_t> w);
bool any(std::span<const std::uint64_t> w);
bool dot(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// dst[i] = src[(i + 1) mod n]
void rotate_down(std::span<const std::uint64_t> src, std::span<std::uint64_t> dst, std::size_t n);
/// dst[i] = src[(i - 1) mod n]
void rotate_up(std::span<const std::uint64_t> src, std::span<std::uint64_t> dst, std::size_t n);

/// dst[i] = src[i] ^ src[(i + 1) mod n]   (rule 108)
void rule108(std::span<const std::uint64_t> src, std::span<std::uint64_t> dst, std::size_t n);
/// dst[i] = src[i] ^ src[(i - 1) mod n]   (rule 108 mirrored left-right)
void rule108_mirrored(std::span<const std::uint64_t> src, std::span<std::uint64_t> dst, std::size_t n);

}  // namespace bitops

/// Cyclic bit vector over GF(2). Text form is a string of '0'/'1', index 0 leftmost.
class BitRow {
   public:
    BitRow() = default;
    explicit BitRow(std::size_t n);

    static BitRow from_string(std::string_view text);
    static BitRow single_one(std::size_t n, std::size_t index);

    std::size_t size() const {
        return n_;
    }
    bool get(std::size_t i) const {
        return (w_[i >> 6] >> (i & 63)) & 1;
    }
    void set(std::size_t i, bool value);
    void flip(std::size_t i) {
        w_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }

    std::size_t weight() const;
    bool any() const;
    bool dot(const BitRow &other) const;

    std::span<std::uint64_t> words() {
        return w_;
    }
    std::span<const std::uint64_t> words() const {
        return w_;
    }

    BitRow &operator^=(const BitRow &other);
    friend BitRow operator^(BitRow a, const BitRow &b) {
        a ^= b;
        return a;
    }
    bool operator==(const BitRow &other) const = default;

    std::string str() const;

   private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

/// One application of rule 108 with periodic boundary: out_i = r_i + r_{i+1}.
BitRow rule108_step(const BitRow &row);
/// `steps` applications of rule108_step.
BitRow rule108_evolve(BitRow row, std::uint64_t steps);

/// Dense bit-packed matrix over GF(2); row r is a BitRow-compatible word span.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);

    std::size_t rows() const {
        return rows_;
    }
    std::size_t cols() const {
        return cols_;
    }
    std::size_t row_words() const {
        return stride_;
    }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * stride_ + (c >> 6)] >> (c & 63)) & 1;
    }
    void set(std::size_t r, std::size_t c, bool value);
    void flip(std::size_t r, std::size_t c) {
        data_[r * stride_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63);
    }

    std::span<std::uint64_t> row(std::size_t r) {
        return {data_.data() + r * stride_, stride_};
    }
    std::span<const std::uint64_t> row(std::size_t r) const {
        return {data_.data() + r * stride_, stride_};
    }
    BitRow row_copy(std::size_t r) const;
    void set_row(std::size_t r, const BitRow &value);

    BitMatrix operator*(const BitMatrix &rhs) const;
    BitRow operator*(const BitRow &v) const;
    BitMatrix &operator^=(const BitMatrix &rhs);
    bool operator==(const BitMatrix &other) const = default;

    bool any() const;
    std::size_t weight() const;
    std::size_t rank() const;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> data_;
};

using Gf2Matrix = BitMatrix;

/// F = I + S where (S v)_i = v_{i+1}; F v == rule108_step(v).
BitMatrix rule108_matrix(std::size_t n);

/// M^e by repeated squaring. M must be square.
BitMatrix mat_pow(const BitMatrix &m, std::uint64_t e);

struct LinearSolution {
    BitRow particular;
    std::vector<BitRow> nullspace;
};

/// Row-reduced factorization of A supporting many right-hand sides.
/// Stores T with T*A == R, R in reduced row echelon form.
class Gf2Solver {
   public:
    explicit Gf2Solver(const BitMatrix &a);

    std::size_t rank() const {
        return rank_;
    }
    /// Some x with A x == b, free variables set to zero; nullopt if inconsistent.
    std::optional<BitRow> solve(const BitRow &b) const;
    /// Basis of {v : A v == 0}, one vector per free column in increasing order.
    std::vector<BitRow> nullspace() const;

   private:
    std::size_t rows_;
    std::size_t cols_;
    std::size_t rank_ = 0;
    BitMatrix reduced_;
    BitMatrix transform_;
    std::vector<std::size_t> pivot_cols_;
};

/// Solves A x == b; nullopt signals b outside the column space.
std::optional<LinearSolution> solve_linear(const BitMatrix &a, const BitRow &b);

std::vector<BitRow> kernel_basis(const BitMatrix &m);

/// Length of the cycle eventually reached by rule 108 from `start` (transient excluded).
std::uint64_t rule108_cycle_length(const BitRow &start);

/// Pi_L: cycle length reached from a single 1 in a row of length n. All cycle
/// lengths of rule 108 on n cells divide it.
std::uint64_t cycle_length_from_single_one(std::size_t n);

}  // namespace xyzca

#endif
