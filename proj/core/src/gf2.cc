#include "xyzca/gf2.h"

#include <algorithm>
#include <bit>
#include <cassert>
#include <unordered_map>

#include "xyzca/errors.h"

namespace xyzca {

namespace {

std::uint64_t tail_mask(std::size_t n) {
    std::size_t r = n & 63;
    return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
}

}  // namespace

namespace bitops {

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
    assert(dst.size() == src.size());
    for (std::size_t k = 0; k < dst.size(); k++) {
        dst[k] ^= src[k];
    }
}

std::size_t popcount(std::span<const std::uint64_t> w) {
    std::size_t total = 0;
    for (auto x : w) {
        total += std::popcount(x);
    }
    return total;
}

bool any(std::span<const std::uint64_t> w) {
    return std::any_of(w.begin(), w.end(), [](std::uint64_t x) {
        return x != 0;
    });
}

bool dot(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < a.size(); k++) {
        acc ^= a[k] & b[k];
    }
    return std::popcount(acc) & 1;
}

void rotate_down(std::span<const std::uint64_t> src, std::span<std::uint64_t> dst, std::size_t n) {
    std::size_t nw = words_for_bits(n);
    if (nw == 1) {
        std::uint64_t w = src[0];
        dst[0] = ((w >> 1) | ((w & 1) << (n - 1))) & tail_mask(n);
        return;
    }
    bool first = src[0] & 1;
    for (std::size_t k = 0; k < nw; k++) {
        std::uint64_t carry = k + 1 < nw ? src[k + 1] << 63 : 0;
        dst[k] = (src[k] >> 1) | carry;
    }
    std::size_t top = n - 1;
    dst[top >> 6] = (dst[top >> 6] & ~(std::uint64_t{1} << (top & 63))) | (std::uint64_t{first} << (top & 63));
}

void rotate_up(std::span<const std::uint64_t> src, std::span<std::uint64_t> dst, std::size_t n) {
    std::size_t nw = words_for_bits(n);
    std::size_t top = n - 1;
    std::uint64_t last = (src[top >> 6] >> (top & 63)) & 1;
    if (nw == 1) {
        dst[0] = ((src[0] << 1) | last) & tail_mask(n);
        return;
    }
    for (std::size_t k = nw; k-- > 0;) {
        std::uint64_t carry = k > 0 ? src[k - 1] >> 63 : last;
        dst[k] = (src[k] << 1) | carry;
    }
    dst[nw - 1] &= tail_mask(n);
}

void rule108(std::span<const std::uint64_t> src, std::span<std::uint64_t> dst, std::size_t n) {
    rotate_down(src, dst, n);
    xor_into(dst, src);
}

void rule108_mirrored(std::span<const std::uint64_t> src, std::span<std::uint64_t> dst, std::size_t n) {
    rotate_up(src, dst, n);
    xor_into(dst, src);
}

}  // namespace bitops

BitRow::BitRow(std::size_t n) : n_(n), w_(words_for_bits(n), 0) {
}

BitRow BitRow::from_string(std::string_view text) {
    BitRow row(text.size());
    for (std::size_t i = 0; i < text.size(); i++) {
        if (text[i] == '1') {
            row.flip(i);
        } else if (text[i] != '0') {
            throw FormatError("bit string may only contain '0' and '1'");
        }
    }
    return row;
}

BitRow BitRow::single_one(std::size_t n, std::size_t index) {
    BitRow row(n);
    row.flip(index % n);
    return row;
}

void BitRow::set(std::size_t i, bool value) {
    std::uint64_t m = std::uint64_t{1} << (i & 63);
    w_[i >> 6] = value ? (w_[i >> 6] | m) : (w_[i >> 6] & ~m);
}

std::size_t BitRow::weight() const {
    return bitops::popcount(w_);
}

bool BitRow::any() const {
    return bitops::any(w_);
}

bool BitRow::dot(const BitRow &other) const {
    return bitops::dot(w_, other.w_);
}

BitRow &BitRow::operator^=(const BitRow &other) {
    assert(n_ == other.n_);
    bitops::xor_into(w_, other.w_);
    return *this;
}

std::string BitRow::str() const {
    std::string out(n_, '0');
    for (std::size_t i = 0; i < n_; i++) {
        if (get(i)) {
            out[i] = '1';
        }
    }
    return out;
}

BitRow rule108_step(const BitRow &row) {
    BitRow out(row.size());
    if (row.size() > 0) {
        bitops::rule108(row.words(), out.words(), row.size());
    }
    return out;
}

BitRow rule108_evolve(BitRow row, std::uint64_t steps) {
    BitRow scratch(row.size());
    for (std::uint64_t s = 0; s < steps; s++) {
        bitops::rule108(row.words(), scratch.words(), row.size());
        std::swap(row, scratch);
    }
    return row;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for_bits(cols)), data_(rows * words_for_bits(cols), 0) {
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t k = 0; k < n; k++) {
        m.flip(k, k);
    }
    return m;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
    std::uint64_t m = std::uint64_t{1} << (c & 63);
    auto &w = data_[r * stride_ + (c >> 6)];
    w = value ? (w | m) : (w & ~m);
}

BitRow BitMatrix::row_copy(std::size_t r) const {
    BitRow out(cols_);
    std::copy_n(row(r).begin(), stride_, out.words().begin());
    return out;
}

void BitMatrix::set_row(std::size_t r, const BitRow &value) {
    assert(value.size() == cols_);
    std::copy_n(value.words().begin(), stride_, row(r).begin());
}

BitMatrix BitMatrix::operator*(const BitMatrix &rhs) const {
    assert(cols_ == rhs.rows_);
    BitMatrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; r++) {
        auto dst = out.row(r);
        for (std::size_t k = 0; k < cols_; k++) {
            if (get(r, k)) {
                bitops::xor_into(dst, rhs.row(k));
            }
        }
    }
    return out;
}

BitRow BitMatrix::operator*(const BitRow &v) const {
    assert(v.size() == cols_);
    BitRow out(rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        if (bitops::dot(row(r), v.words())) {
            out.flip(r);
        }
    }
    return out;
}

BitMatrix &BitMatrix::operator^=(const BitMatrix &rhs) {
    assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
    bitops::xor_into(data_, rhs.data_);
    return *this;
}

bool BitMatrix::any() const {
    return bitops::any(data_);
}

std::size_t BitMatrix::weight() const {
    return bitops::popcount(data_);
}

std::size_t BitMatrix::rank() const {
    return Gf2Solver(*this).rank();
}

BitMatrix rule108_matrix(std::size_t n) {
    BitMatrix f(n, n);
    for (std::size_t i = 0; i < n; i++) {
        f.flip(i, i);
        f.flip(i, (i + 1) % n);
    }
    return f;
}

BitMatrix mat_pow(const BitMatrix &m, std::uint64_t e) {
    assert(m.rows() == m.cols());
    BitMatrix result = BitMatrix::identity(m.rows());
    BitMatrix base = m;
    while (e > 0) {
        if (e & 1) {
            result = result * base;
        }
        e >>= 1;
        if (e > 0) {
            base = base * base;
        }
    }
    return result;
}

Gf2Solver::Gf2Solver(const BitMatrix &a)
    : rows_(a.rows()), cols_(a.cols()), reduced_(a), transform_(BitMatrix::identity(a.rows())) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; c++) {
        std::size_t p = r;
        while (p < rows_ && !reduced_.get(p, c)) {
            p++;
        }
        if (p == rows_) {
            continue;
        }
        if (p != r) {
            std::swap_ranges(reduced_.row(p).begin(), reduced_.row(p).end(), reduced_.row(r).begin());
            std::swap_ranges(transform_.row(p).begin(), transform_.row(p).end(), transform_.row(r).begin());
        }
        for (std::size_t s = 0; s < rows_; s++) {
            if (s != r && reduced_.get(s, c)) {
                bitops::xor_into(reduced_.row(s), reduced_.row(r));
                bitops::xor_into(transform_.row(s), transform_.row(r));
            }
        }
        pivot_cols_.push_back(c);
        r++;
    }
    rank_ = r;
}

std::optional<BitRow> Gf2Solver::solve(const BitRow &b) const {
    assert(b.size() == rows_);
    BitRow y = transform_ * b;
    for (std::size_t k = rank_; k < rows_; k++) {
        if (y.get(k)) {
            return std::nullopt;
        }
    }
    BitRow x(cols_);
    for (std::size_t k = 0; k < rank_; k++) {
        if (y.get(k)) {
            x.flip(pivot_cols_[k]);
        }
    }
    return x;
}

std::vector<BitRow> Gf2Solver::nullspace() const {
    std::vector<BitRow> basis;
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivot_cols_) {
        is_pivot[c] = true;
    }
    for (std::size_t f = 0; f < cols_; f++) {
        if (is_pivot[f]) {
            continue;
        }
        BitRow v(cols_);
        v.flip(f);
        for (std::size_t k = 0; k < rank_; k++) {
            if (reduced_.get(k, f)) {
                v.flip(pivot_cols_[k]);
            }
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<LinearSolution> solve_linear(const BitMatrix &a, const BitRow &b) {
    Gf2Solver solver(a);
    auto x = solver.solve(b);
    if (!x) {
        return std::nullopt;
    }
    return LinearSolution{std::move(*x), solver.nullspace()};
}

std::vector<BitRow> kernel_basis(const BitMatrix &m) {
    return Gf2Solver(m).nullspace();
}

namespace {

std::uint64_t cycle_length_hashed(const BitRow &start) {
    std::unordered_map<std::uint64_t, std::uint64_t> seen;
    BitRow cur = start;
    for (std::uint64_t t = 0;; t++) {
        std::uint64_t key = cur.size() == 0 ? 0 : cur.words()[0];
        auto [it, inserted] = seen.emplace(key, t);
        if (!inserted) {
            return t - it->second;
        }
        cur = rule108_step(cur);
    }
}

// Brent's algorithm; only the cycle length is needed, not the transient.
std::uint64_t cycle_length_brent(const BitRow &start) {
    std::uint64_t power = 1;
    std::uint64_t lam = 1;
    BitRow tortoise = start;
    BitRow hare = rule108_step(start);
    while (tortoise != hare) {
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = rule108_step(hare);
        lam++;
    }
    return lam;
}

}  // namespace

std::uint64_t rule108_cycle_length(const BitRow &start) {
    if (start.size() == 0) {
        return 1;
    }
    if (start.size() <= 64) {
        return cycle_length_hashed(start);
    }
    return cycle_length_brent(start);
}

std::uint64_t cycle_length_from_single_one(std::size_t n) {
    if (n == 0) {
        throw DomainError("row length must be positive");
    }
    return rule108_cycle_length(BitRow::single_one(n, 0));
}

}  // namespace xyzca
