#ifndef LCODEC_CODE_HPP
#define LCODEC_CODE_HPP

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcodec/bitlinalg.hpp"

namespace lcodec {

// Linear block code: codeword = G * m (N x K times K), syndrome = H * y^b.
// A recovers the message from a codeword: A * G = I_K.
// Layout is systematic with message bits in positions 0..K-1 and parity in
// the last N-K positions; parity_layout marks H's trailing identity block.
struct LinearCode {
    std::size_t n = 0;
    std::size_t k = 0;
    BitMatrix G;  // N x K
    BitMatrix H;  // >= (N-K) x N, rank N-K
    BitMatrix A;  // K x N
    BitMatrix D;  // N x (N-K), right inverse of the full-rank part of H
    bool parity_layout = false;
    std::size_t bch_m = 0;  // 2^m - 1 == n for BCH codes, 0 otherwise
    std::string name;

    bool is_bch() const { return bch_m != 0; }
};

inline BitVector encode(const LinearCode& code, const BitVector& m) {
    if (m.size() != code.k)
        throw std::invalid_argument("encode: message length mismatch");
    return mat_vec_mod2(code.G, m);
}

inline BitVector syndrome(const LinearCode& code, const BitVector& yb) {
    if (yb.size() != code.n)
        throw std::invalid_argument("syndrome: vector length mismatch");
    return mat_vec_mod2(code.H, yb);
}

inline BitVector recover_message(const LinearCode& code, const BitVector& xb) {
    return mat_vec_mod2(code.A, xb);
}

// Builds the derived matrices (A, D) and checks the code invariants.
inline void finalize_code(LinearCode& code) {
    code.n = code.G.rows();
    code.k = code.G.cols();
    if (rank_mod2(code.G) != code.k)
        throw std::invalid_argument("code: G is not full column rank");
    BitMatrix h_full = remove_redundant_rows(code.H);
    if (h_full.rows() != code.n - code.k)
        throw std::invalid_argument("code: rank(H) != N-K");
    code.A = left_inverse(code.G);
    code.D = right_inverse(h_full);
    // H * G must vanish
    BitMatrix hg = code.H.multiply(code.G);
    for (std::size_t r = 0; r < hg.rows(); ++r)
        if (!hg.row(r).is_zero())
            throw std::invalid_argument("code: H*G != 0");
}

// Systematic code from a (N-K) x K parity block P:
//   G = [I_K ; P],  H = [P | I_{N-K}].
inline LinearCode systematic_code(const BitMatrix& parity,
                                  const std::string& name = "") {
    const std::size_t k = parity.cols();
    const std::size_t r = parity.rows();
    const std::size_t n = k + r;
    LinearCode code;
    code.G = BitMatrix(n, k);
    for (std::size_t i = 0; i < k; ++i) code.G.set(i, i, true);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < k; ++j)
            code.G.set(k + i, j, parity.get(i, j));
    code.H = BitMatrix(r, n);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            code.H.set(i, j, parity.get(i, j));
        code.H.set(i, k + i, true);
    }
    code.parity_layout = true;
    code.name = name;
    finalize_code(code);
    return code;
}

inline LinearCode hamming_7_4() {
    // parity rows 110, 101, 011, 111 (as columns of P per message bit)
    BitMatrix p = BitMatrix::from_rows({{1, 1, 0, 1},
                                        {1, 0, 1, 1},
                                        {0, 1, 1, 1}});
    LinearCode c = systematic_code(p, "hamming-7-4");
    return c;
}

// ---------------------------------------------------------------------------
// GF(2^m) arithmetic and BCH construction
// ---------------------------------------------------------------------------

struct BchParams {
    unsigned m = 0;
    unsigned t = 0;
    // Binary polynomial, bit i = coefficient of x^i.  0 selects the default
    // primitive polynomial for m.
    std::uint32_t primitive_poly = 0;
};

namespace detail {

inline std::uint32_t default_primitive_poly(unsigned m) {
    // x^m + ... + 1, one primitive polynomial per degree
    static const std::uint32_t table[] = {
        0,       0x3,     0x7,      0xb,      0x13,    0x25,
        0x43,    0x89,    0x11d,    0x211,    0x409,   0x805,
        0x1053,  0x201b,  0x4143,   0x8003,   0x1100b,
    };
    if (m < 2 || m > 16) throw std::invalid_argument("bch: m out of range");
    return table[m];
}

struct Gf2m {
    unsigned m;
    std::uint32_t n;  // 2^m - 1
    std::vector<std::uint32_t> exp_tab;
    std::vector<int> log_tab;

    Gf2m(unsigned m_, std::uint32_t poly) : m(m_), n((1u << m_) - 1) {
        exp_tab.assign(2 * n, 0);
        log_tab.assign(n + 1, -1);
        std::uint32_t x = 1;
        for (std::uint32_t i = 0; i < n; ++i) {
            exp_tab[i] = x;
            if (log_tab[x] != -1)
                throw std::invalid_argument("bch: polynomial is not primitive");
            log_tab[x] = static_cast<int>(i);
            x <<= 1;
            if (x & (1u << m)) x ^= poly;
            x &= (1u << m) - 1;
            if (x == 0)
                throw std::invalid_argument("bch: polynomial is not primitive");
        }
        if (x != 1)
            throw std::invalid_argument("bch: polynomial is not primitive");
        for (std::uint32_t i = 0; i < n; ++i) exp_tab[n + i] = exp_tab[i];
    }
};

// polynomials over GF(2), bit i of word j*64.. stored as vector<int> coeffs
inline std::vector<int> poly_mul(const std::vector<int>& a,
                                 const std::vector<int>& b) {
    std::vector<int> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] ^= b[j];
    return r;
}

inline std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& b) {
    const std::size_t db = b.size() - 1;
    while (a.size() > db) {
        if (a.back()) {
            const std::size_t shift = a.size() - 1 - db;
            for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] ^= b[j];
        }
        a.pop_back();
        while (a.size() > 1 && !a.back()) a.pop_back();
        if (a.size() <= db) break;
    }
    while (a.size() > 1 && !a.back()) a.pop_back();
    return a;
}

// minimal polynomial of alpha^e: prod over the cyclotomic coset of (x - alpha^j)
inline std::vector<int> minimal_poly(const Gf2m& gf, std::uint32_t e) {
    std::set<std::uint32_t> coset;
    std::uint32_t j = e % gf.n;
    while (!coset.count(j)) {
        coset.insert(j);
        j = (2 * j) % gf.n;
    }
    // product over GF(2^m); coefficients end up in GF(2)
    std::vector<std::uint32_t> poly{1};  // GF(2^m) coefficients, low to high
    for (std::uint32_t root_exp : coset) {
        const std::uint32_t root = gf.exp_tab[root_exp];
        std::vector<std::uint32_t> next(poly.size() + 1, 0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] ^= poly[i];
            if (poly[i]) {
                // poly[i] * root
                const int l = gf.log_tab[poly[i]];
                next[i] ^= gf.exp_tab[(l + gf.log_tab[root]) % gf.n];
            }
        }
        poly = std::move(next);
    }
    std::vector<int> out(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly[i] > 1)
            throw std::logic_error("minimal_poly: non-binary coefficient");
        out[i] = static_cast<int>(poly[i]);
    }
    return out;
}

}  // namespace detail

// Generator polynomial g(x) = lcm of the minimal polynomials of
// alpha, alpha^3, ..., alpha^(2t-1).  Coefficients low to high.
inline std::vector<int> bch_generator_poly(const BchParams& params) {
    const std::uint32_t poly = params.primitive_poly
                                   ? params.primitive_poly
                                   : detail::default_primitive_poly(params.m);
    detail::Gf2m gf(params.m, poly);
    std::set<std::uint32_t> covered;
    std::vector<int> g{1};
    for (unsigned i = 1; i <= 2 * params.t - 1; i += 2) {
        if (covered.count(i % gf.n)) continue;
        std::uint32_t j = i % gf.n;
        while (!covered.count(j)) {
            covered.insert(j);
            j = (2 * j) % gf.n;
        }
        g = detail::poly_mul(g, detail::minimal_poly(gf, i));
    }
    return g;
}

// Primitive narrow-sense binary BCH code, systematic with message bits in
// positions 0..K-1.  Position j of a codeword carries the coefficient of
// x^(N-1-j) of the cyclic-code polynomial.
inline LinearCode bch_construct(const BchParams& params) {
    if (params.m < 2 || params.m > 16)
        throw std::invalid_argument("bch: m out of range");
    if (params.t < 1) throw std::invalid_argument("bch: t must be >= 1");
    const std::size_t n = (std::size_t{1} << params.m) - 1;
    const std::vector<int> g = bch_generator_poly(params);
    const std::size_t deg = g.size() - 1;
    if (deg >= n) throw std::invalid_argument("bch: k <= 0");
    const std::size_t k = n - deg;

    // Systematic cyclic encoding of unit messages yields the parity block:
    // message bit j sits at polynomial degree N-1-j, parity at the low
    // degrees; remainder of x^(N-1-j) mod g(x) gives its parity pattern.
    BitMatrix parity(n - k, k);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<int> mono(n - j, 0);
        mono[n - 1 - j] = 1;
        std::vector<int> rem = detail::poly_mod(mono, g);
        rem.resize(deg, 0);
        // parity position K+i holds coefficient of x^(N-1-(K+i)) = x^(deg-1-i)
        for (std::size_t i = 0; i < deg; ++i)
            parity.set(i, j, rem[deg - 1 - i] != 0);
    }
    std::ostringstream name;
    name << "bch-" << n << "-" << k;
    LinearCode code = systematic_code(parity, name.str());
    code.bch_m = params.m;
    return code;
}

// Appends `count` redundant rows to H (XORs of existing row pairs); the row
// space and rank are unchanged.  Allowed by the framework as long as
// rank(H) stays N-K.
inline LinearCode with_redundant_rows(const LinearCode& base,
                                      std::size_t count) {
    LinearCode code = base;
    const std::size_t r = base.H.rows();
    if (r < 2) throw std::invalid_argument("with_redundant_rows: H too small");
    BitMatrix extra(count, base.n);
    for (std::size_t i = 0; i < count; ++i)
        extra.set_row(i, base.H.row(i % r) ^ base.H.row((i + 1) % r));
    code.H = BitMatrix::stack(base.H, extra);
    code.parity_layout = false;
    finalize_code(code);
    code.parity_layout = base.parity_layout;
    return code;
}

// ---------------------------------------------------------------------------
// alist I/O
// ---------------------------------------------------------------------------

// Text format: "cols rows" header, max column/row degrees, per-column
// degrees, per-row degrees, then 1-based index lists per column and per row.
// Returns the rows x cols binary matrix.
inline BitMatrix load_alist(std::istream& in) {
    std::size_t line_no = 0;
    auto next_line = [&](std::vector<long>& vals) {
        std::string line;
        for (;;) {
            if (!std::getline(in, line))
                throw std::runtime_error("alist: unexpected end of input at line " +
                                         std::to_string(line_no + 1));
            ++line_no;
            std::istringstream ss(line);
            vals.clear();
            long v;
            while (ss >> v) vals.push_back(v);
            if (!ss.eof() && ss.fail()) {
                ss.clear();
                std::string tok;
                if (ss >> tok)
                    throw std::runtime_error("alist: bad token at line " +
                                             std::to_string(line_no));
            }
            if (!vals.empty()) return;
        }
    };

    std::vector<long> vals;
    next_line(vals);
    if (vals.size() != 2 || vals[0] <= 0 || vals[1] <= 0)
        throw std::runtime_error("alist: malformed header at line " +
                                 std::to_string(line_no));
    const std::size_t cols = static_cast<std::size_t>(vals[0]);
    const std::size_t rows = static_cast<std::size_t>(vals[1]);

    next_line(vals);
    if (vals.size() != 2)
        throw std::runtime_error("alist: malformed max-degree line " +
                                 std::to_string(line_no));

    next_line(vals);
    if (vals.size() != cols)
        throw std::runtime_error("alist: column degree list at line " +
                                 std::to_string(line_no) + " has wrong length");
    std::vector<std::size_t> col_deg(cols);
    for (std::size_t i = 0; i < cols; ++i) {
        if (vals[i] < 0)
            throw std::runtime_error("alist: negative degree at line " +
                                     std::to_string(line_no));
        col_deg[i] = static_cast<std::size_t>(vals[i]);
    }

    next_line(vals);
    if (vals.size() != rows)
        throw std::runtime_error("alist: row degree list at line " +
                                 std::to_string(line_no) + " has wrong length");
    std::vector<std::size_t> row_deg(rows);
    for (std::size_t i = 0; i < rows; ++i)
        row_deg[i] = static_cast<std::size_t>(vals[i]);

    BitMatrix h(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        next_line(vals);
        std::size_t nonzero = 0;
        for (long v : vals) {
            if (v == 0) continue;  // zero padding tolerated
            if (v < 1 || static_cast<std::size_t>(v) > rows)
                throw std::runtime_error("alist: row index out of range at line " +
                                         std::to_string(line_no));
            h.set(static_cast<std::size_t>(v) - 1, c, true);
            ++nonzero;
        }
        if (nonzero != col_deg[c])
            throw std::runtime_error("alist: column list at line " +
                                     std::to_string(line_no) +
                                     " does not match its degree");
    }
    for (std::size_t r = 0; r < rows; ++r) {
        next_line(vals);
        std::size_t nonzero = 0;
        for (long v : vals) {
            if (v == 0) continue;
            if (v < 1 || static_cast<std::size_t>(v) > cols)
                throw std::runtime_error("alist: column index out of range at line " +
                                         std::to_string(line_no));
            if (!h.get(r, static_cast<std::size_t>(v) - 1))
                throw std::runtime_error("alist: row list at line " +
                                         std::to_string(line_no) +
                                         " is inconsistent with column lists");
            ++nonzero;
        }
        if (nonzero != row_deg[r])
            throw std::runtime_error("alist: row list at line " +
                                     std::to_string(line_no) +
                                     " does not match its degree");
    }
    return h;
}

inline void emit_alist(const BitMatrix& h, std::ostream& out) {
    const std::size_t rows = h.rows(), cols = h.cols();
    std::vector<std::vector<std::size_t>> by_col(cols), by_row(rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (h.get(r, c)) {
                by_col[c].push_back(r + 1);
                by_row[r].push_back(c + 1);
            }
    std::size_t max_col = 0, max_row = 0;
    for (const auto& v : by_col) max_col = std::max(max_col, v.size());
    for (const auto& v : by_row) max_row = std::max(max_row, v.size());
    out << cols << " " << rows << "\n";
    out << max_col << " " << max_row << "\n";
    for (std::size_t c = 0; c < cols; ++c)
        out << by_col[c].size() << (c + 1 < cols ? " " : "\n");
    for (std::size_t r = 0; r < rows; ++r)
        out << by_row[r].size() << (r + 1 < rows ? " " : "\n");
    for (const auto& v : by_col) {
        for (std::size_t i = 0; i < v.size(); ++i)
            out << v[i] << (i + 1 < v.size() ? " " : "");
        out << "\n";
    }
    for (const auto& v : by_row) {
        for (std::size_t i = 0; i < v.size(); ++i)
            out << v[i] << (i + 1 < v.size() ? " " : "");
        out << "\n";
    }
}

// Basis of the right nullspace of H, as columns of an N x K matrix.
inline BitMatrix nullspace_basis(const BitMatrix& h) {
    const std::size_t rows = h.rows(), cols = h.cols();
    BitMatrix r = h;
    std::vector<std::size_t> pivot_col;
    std::size_t rr = 0;
    for (std::size_t c = 0; c < cols && rr < rows; ++c) {
        std::size_t p = rr;
        while (p < rows && !r.get(p, c)) ++p;
        if (p == rows) continue;
        r.swap_rows(rr, p);
        for (std::size_t i = 0; i < rows; ++i)
            if (i != rr && r.get(i, c)) r.xor_row_into(i, rr);
        pivot_col.push_back(c);
        ++rr;
    }
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    const std::size_t k = cols - pivot_col.size();
    if (k == 0)
        throw std::invalid_argument("nullspace_basis: only the zero codeword");
    BitMatrix g(cols, k);
    std::size_t j = 0;
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        g.set(c, j, true);
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            if (r.get(i, c)) g.set(pivot_col[i], j, true);
        ++j;
    }
    return g;
}

// Builds a code from explicit G and H (alist-loaded or otherwise).
inline LinearCode code_from_matrices(const BitMatrix& g, const BitMatrix& h,
                                     const std::string& name = "") {
    LinearCode code;
    code.G = g;
    code.H = h;
    code.name = name;
    // detect trailing identity block
    const std::size_t n = g.rows(), k = g.cols();
    bool diag = h.rows() == n - k;
    for (std::size_t i = 0; diag && i < n - k; ++i)
        for (std::size_t j = 0; j < n - k; ++j)
            if (h.get(i, k + j) != (i == j)) diag = false;
    code.parity_layout = diag;
    finalize_code(code);
    return code;
}

// Code from a parity-check matrix alone: G spans the nullspace of H.
inline LinearCode code_from_alist(std::istream& in,
                                  const std::string& name = "") {
    const BitMatrix h = load_alist(in);
    return code_from_matrices(nullspace_basis(h), h, name);
}

// Named built-in codes used throughout the tool.
inline LinearCode builtin_code(const std::string& name) {
    if (name == "hamming-7-4") return hamming_7_4();
    if (name == "bch-15-11") return bch_construct({4, 1, 0});
    if (name == "bch-15-7") return bch_construct({4, 2, 0});
    if (name == "bch-31-21") return bch_construct({5, 2, 0});
    if (name == "bch-63-45") return bch_construct({6, 3, 0});
    if (name == "bch-63-36") return bch_construct({6, 5, 0});
    if (name == "bch-127-64") return bch_construct({7, 10, 0});
    throw std::invalid_argument("unknown code: " + name);
}

}  // namespace lcodec

#endif
