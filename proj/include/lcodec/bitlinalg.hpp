#ifndef LCODEC_BITLINALG_HPP
#define LCODEC_BITLINALG_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcodec {

// Dense bit-packed vector over GF(2).  XOR is addition; no implicit
// resizing.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t len)
        : len_(len), words_((len + 63) / 64, 0) {}

    static BitVector from_bits(const std::vector<int>& bits) {
        BitVector v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i)
            v.set(i, bits[i] != 0);
        return v;
    }

    std::size_t size() const { return len_; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool b) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (b)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVector operator^(const BitVector& o) const {
        if (len_ != o.len_)
            throw std::invalid_argument("BitVector xor: length mismatch");
        BitVector r(len_);
        for (std::size_t w = 0; w < words_.size(); ++w)
            r.words_[w] = words_[w] ^ o.words_[w];
        return r;
    }
    BitVector& operator^=(const BitVector& o) {
        if (len_ != o.len_)
            throw std::invalid_argument("BitVector xor: length mismatch");
        for (std::size_t w = 0; w < words_.size(); ++w)
            words_[w] ^= o.words_[w];
        return *this;
    }

    bool operator==(const BitVector& o) const {
        return len_ == o.len_ && words_ == o.words_;
    }
    bool operator!=(const BitVector& o) const { return !(*this == o); }

    bool is_zero() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    std::size_t weight() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    std::string to_string() const {
        std::string s;
        s.reserve(len_);
        for (std::size_t i = 0; i < len_; ++i) s.push_back(get(i) ? '1' : '0');
        return s;
    }

  private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

// Row-major bit-packed matrix over GF(2).
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64),
          words_(rows * wpr_, 0) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    static BitMatrix from_rows(const std::vector<std::vector<int>>& rows) {
        if (rows.empty()) return BitMatrix();
        BitMatrix m(rows.size(), rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.cols_)
                throw std::invalid_argument("BitMatrix: ragged rows");
            for (std::size_t c = 0; c < m.cols_; ++c)
                m.set(r, c, rows[r][c] != 0);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (words_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool b) {
        const std::uint64_t mask = std::uint64_t{1} << (c & 63);
        if (b)
            words_[r * wpr_ + (c >> 6)] |= mask;
        else
            words_[r * wpr_ + (c >> 6)] &= ~mask;
    }

    BitVector row(std::size_t r) const {
        BitVector v(cols_);
        for (std::size_t c = 0; c < cols_; ++c) v.set(c, get(r, c));
        return v;
    }
    void set_row(std::size_t r, const BitVector& v) {
        if (v.size() != cols_)
            throw std::invalid_argument("set_row: length mismatch");
        for (std::size_t c = 0; c < cols_; ++c) set(r, c, v.get(c));
    }

    void xor_row_into(std::size_t dst, std::size_t src) {
        for (std::size_t w = 0; w < wpr_; ++w)
            words_[dst * wpr_ + w] ^= words_[src * wpr_ + w];
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t w = 0; w < wpr_; ++w)
            std::swap(words_[a * wpr_ + w], words_[b * wpr_ + w]);
    }

    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && words_ == o.words_;
    }
    bool operator!=(const BitMatrix& o) const { return !(*this == o); }

    BitMatrix transpose() const {
        BitMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (get(r, c)) t.set(c, r, true);
        return t;
    }

    BitMatrix multiply(const BitMatrix& o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("BitMatrix multiply: dimension mismatch");
        BitMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k)
                if (get(i, k)) r.xor_row_from(i, o, k);
        return r;
    }

    static BitMatrix stack(const BitMatrix& top, const BitMatrix& bottom) {
        if (top.cols_ != bottom.cols_)
            throw std::invalid_argument("stack: column count mismatch");
        BitMatrix r(top.rows_ + bottom.rows_, top.cols_);
        for (std::size_t i = 0; i < top.rows_; ++i)
            r.set_row(i, top.row(i));
        for (std::size_t i = 0; i < bottom.rows_; ++i)
            r.set_row(top.rows_ + i, bottom.row(i));
        return r;
    }

  private:
    void xor_row_from(std::size_t dst, const BitMatrix& o, std::size_t src) {
        for (std::size_t w = 0; w < wpr_; ++w)
            words_[dst * wpr_ + w] ^= o.words_[src * o.wpr_ + w];
    }

    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<std::uint64_t> words_;
};

inline BitVector mat_vec_mod2(const BitMatrix& m, const BitVector& v) {
    if (m.cols() != v.size())
        throw std::invalid_argument("mat_vec_mod2: dimension mismatch");
    BitVector r(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        int acc = 0;
        for (std::size_t j = 0; j < m.cols(); ++j)
            acc ^= static_cast<int>(m.get(i, j) & v.get(j));
        r.set(i, acc != 0);
    }
    return r;
}

inline std::size_t rank_mod2(BitMatrix m) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows() && !m.get(pivot, col)) ++pivot;
        if (pivot == m.rows()) continue;
        m.swap_rows(rank, pivot);
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != rank && m.get(r, col)) m.xor_row_into(r, rank);
        ++rank;
    }
    return rank;
}

// A (K x N) with A*G = I_K, for full-column-rank G (N x K).  Eliminates in
// natural column order so the returned inverse is deterministic.
inline BitMatrix left_inverse(const BitMatrix& g) {
    const std::size_t n = g.rows(), k = g.cols();
    // augmented [G | I_N], row reduce
    BitMatrix aug(n, k + n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < k; ++c) aug.set(r, c, g.get(r, c));
        aug.set(r, k + r, true);
    }
    std::vector<std::size_t> pivot_row(k);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = rank;
        while (pivot < n && !aug.get(pivot, col)) ++pivot;
        if (pivot == n)
            throw std::invalid_argument("left_inverse: matrix is rank deficient");
        aug.swap_rows(rank, pivot);
        for (std::size_t r = 0; r < n; ++r)
            if (r != rank && aug.get(r, col)) aug.xor_row_into(r, rank);
        pivot_row[col] = rank;
        ++rank;
    }
    BitMatrix a(k, n);
    for (std::size_t col = 0; col < k; ++col)
        for (std::size_t c = 0; c < n; ++c)
            a.set(col, c, aug.get(pivot_row[col], k + c));
    return a;
}

// D (N x M) with H*D = I_M, for full-row-rank H (M x N).  Pivot columns are
// scanned from the right, so a systematic H = [P | I_M] yields the canonical
// D = [0 over I_M] supported on the parity positions.
inline BitMatrix right_inverse(const BitMatrix& h) {
    const std::size_t m = h.rows(), n = h.cols();
    BitMatrix aug(m, n + m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.set(r, c, h.get(r, c));
        aug.set(r, n + r, true);
    }
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t ci = 0; ci < n && rank < m; ++ci) {
        const std::size_t col = n - 1 - ci;
        std::size_t pivot = rank;
        while (pivot < m && !aug.get(pivot, col)) ++pivot;
        if (pivot == m) continue;
        aug.swap_rows(rank, pivot);
        for (std::size_t r = 0; r < m; ++r)
            if (r != rank && aug.get(r, col)) aug.xor_row_into(r, rank);
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank < m)
        throw std::invalid_argument("right_inverse: matrix is rank deficient");
    BitMatrix d(n, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t c = 0; c < m; ++c)
            d.set(pivot_col[j], c, aug.get(j, n + c));
    return d;
}

inline std::size_t leading_bit(const BitVector& v) {
    for (std::size_t c = 0; c < v.size(); ++c)
        if (v.get(c)) return c;
    return v.size();
}

// Indices of the earliest maximal linearly independent subset of rows.
inline std::vector<std::size_t> independent_row_indices(const BitMatrix& h) {
    std::vector<std::size_t> keep;
    std::vector<BitVector> basis;  // reduced representatives, distinct leads
    for (std::size_t r = 0; r < h.rows(); ++r) {
        BitVector red = h.row(r);
        bool progressed = true;
        while (progressed && !red.is_zero()) {
            progressed = false;
            const std::size_t lead = leading_bit(red);
            for (const auto& b : basis) {
                if (leading_bit(b) == lead) {
                    red ^= b;
                    progressed = true;
                    break;
                }
            }
        }
        if (!red.is_zero()) {
            basis.push_back(red);
            keep.push_back(r);
        }
    }
    return keep;
}

// Keeps the earliest maximal linearly independent subset of rows; row space
// and original order of kept rows are preserved.
inline BitMatrix remove_redundant_rows(const BitMatrix& h) {
    const std::vector<std::size_t> keep = independent_row_indices(h);
    BitMatrix out(keep.size(), h.cols());
    for (std::size_t i = 0; i < keep.size(); ++i)
        out.set_row(i, h.row(keep[i]));
    return out;
}

}  // namespace lcodec

#endif
