#ifndef LCODEC_AUTOMORPHISM_HPP
#define LCODEC_AUTOMORPHISM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lcodec/bitlinalg.hpp"
#include "lcodec/code.hpp"

namespace lcodec {

// pi_{k,l}(i) = 2^k * i + l mod N on positions 0..N-1, N = 2^m - 1.
// These maps lie in the automorphism group of primitive narrow-sense
// binary BCH codes.
struct BchPermutation {
    unsigned m = 0;
    unsigned k = 0;
    std::size_t l = 0;

    std::size_t n() const { return (std::size_t{1} << m) - 1; }

    std::size_t map(std::size_t i) const {
        const std::size_t nn = n();
        return ((std::size_t{1} << k) % nn * i + l) % nn;
    }

    bool is_identity() const { return k == 0 && l == 0; }

    bool operator==(const BchPermutation& o) const {
        return m == o.m && k == o.k && l == o.l;
    }
};

// out_i = v[pi(i)]
template <typename T>
std::vector<T> perm_apply(const BchPermutation& p, const std::vector<T>& v) {
    if (v.size() != p.n())
        throw std::invalid_argument("perm_apply: length mismatch");
    std::vector<T> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[p.map(i)];
    return out;
}

inline BitVector perm_apply(const BchPermutation& p, const BitVector& v) {
    if (v.size() != p.n())
        throw std::invalid_argument("perm_apply: length mismatch");
    BitVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.set(i, v.get(p.map(i)));
    return out;
}

// pi_{k,l}^{-1} = pi_{s,t} with s = (m-k) mod m, t = -2^s * l mod N
inline BchPermutation perm_inverse(const BchPermutation& p) {
    const std::size_t nn = p.n();
    const unsigned s = (p.m - p.k) % p.m;
    const std::size_t pow_s = (std::size_t{1} << s) % nn;
    const std::size_t t = (nn - (pow_s * p.l) % nn) % nn;
    return BchPermutation{p.m, s, t};
}

// True iff the permuted version of every basis codeword stays in the code.
inline bool is_automorphism(const LinearCode& code, const BchPermutation& p) {
    if (code.n != p.n())
        throw std::invalid_argument("is_automorphism: code length mismatch");
    for (std::size_t j = 0; j < code.k; ++j) {
        BitVector basis(code.k);
        basis.set(j, true);
        const BitVector cw = encode(code, basis);
        if (!syndrome(code, perm_apply(p, cw)).is_zero()) return false;
    }
    return true;
}

// Argmax over the m*N maps pi_{k,l} of the adjusted-reliability mass in the
// first K permuted positions.  For fixed k the objective over l is a cyclic
// length-K window sum in w_j = rel[2^k * j mod N] (substituting
// l = 2^k * l' mod N), so each k costs O(N) via prefix sums.  Ties break
// toward smaller k, then smaller l.
inline BchPermutation best_permutation(const LinearCode& code,
                                       const std::vector<double>& rel) {
    if (!code.is_bch())
        throw std::invalid_argument("best_permutation: code is not BCH");
    if (rel.size() != code.n)
        throw std::invalid_argument("best_permutation: length mismatch");
    const std::size_t nn = code.n;
    const unsigned m = static_cast<unsigned>(code.bch_m);
    const std::size_t kk = code.k;

    // direct i-order evaluation, identical to the defining objective
    auto exact_objective = [&](const BchPermutation& p) {
        double s = 0.0;
        for (std::size_t i = 0; i < kk; ++i) s += rel[p.map(i)];
        return s;
    };

    BchPermutation best{m, 0, 0};
    double best_obj = 0.0;
    bool have_best = false;

    std::vector<double> w(nn), prefix(2 * nn + 1);
    for (unsigned k = 0; k < m; ++k) {
        const std::size_t pow_k = (std::size_t{1} << k) % nn;
        for (std::size_t j = 0; j < nn; ++j) w[j] = rel[(pow_k * j) % nn];
        prefix[0] = 0.0;
        double scale = 0.0;
        for (std::size_t j = 0; j < 2 * nn; ++j) {
            prefix[j + 1] = prefix[j] + w[j % nn];
            scale += std::fabs(w[j % nn]);
        }
        // window starting at l' covers w[l'..l'+K-1] and scores pi_{k,l}
        // with l = 2^k l' mod N
        double win_max = prefix[kk] - prefix[0];
        for (std::size_t lp = 1; lp < nn; ++lp)
            win_max = std::max(win_max, prefix[lp + kk] - prefix[lp]);
        // prefix sums carry accumulation error; rescore every near-maximal
        // window exactly before comparing
        const double tol = 1e-9 * (scale + 1.0);
        std::size_t best_l = 0;
        double best_win = 0.0;
        bool have_win = false;
        for (std::size_t lp = 0; lp < nn; ++lp) {
            if (prefix[lp + kk] - prefix[lp] < win_max - tol) continue;
            const std::size_t l = (pow_k * lp) % nn;
            const double win = exact_objective(BchPermutation{m, k, l});
            if (!have_win || win > best_win ||
                (win == best_win && l < best_l)) {
                have_win = true;
                best_win = win;
                best_l = l;
            }
        }
        if (!have_best || best_win > best_obj) {
            have_best = true;
            best_obj = best_win;
            best = BchPermutation{m, k, best_l};
        }
    }
    return best;
}

}  // namespace lcodec

#endif
