#ifndef LCODEC_OSD_HPP
#define LCODEC_OSD_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lcodec/channel.hpp"
#include "lcodec/code.hpp"

namespace lcodec {

// Ordered statistics decoding of order `order`: hard-decide the K most
// reliable linearly independent positions, test every error pattern of
// weight <= order on them, and keep the re-encoding with the best
// correlation to the channel LLRs.  Ties resolve to the earliest candidate
// in enumeration order.
inline std::vector<int> osd_decode(const LinearCode& code,
                                   const std::vector<double>& y,
                                   const BisoChannel& ch, unsigned order) {
    const std::size_t n = code.n, k = code.k;
    if (y.size() != n)
        throw std::invalid_argument("osd_decode: channel output length mismatch");
    if (order > k)
        throw std::invalid_argument("osd_decode: order exceeds K");

    std::vector<double> llr(n);
    for (std::size_t i = 0; i < n; ++i) llr[i] = ch.llr(y[i]);

    // reliability order (|llr| descending, stable)
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(llr[a]) > std::fabs(llr[b]);
    });

    // generator in K x N row form, columns permuted by reliability
    BitMatrix gen(k, n);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < n; ++c)
            gen.set(r, c, code.G.get(perm[c], r));

    // Gaussian elimination selecting the first K independent columns in
    // reliability order (the most reliable basis)
    std::vector<std::size_t> basis_cols;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < k; ++col) {
        std::size_t pivot = rank;
        while (pivot < k && !gen.get(pivot, col)) ++pivot;
        if (pivot == k) continue;
        gen.swap_rows(rank, pivot);
        for (std::size_t r = 0; r < k; ++r)
            if (r != rank && gen.get(r, col)) gen.xor_row_into(r, rank);
        basis_cols.push_back(col);
        ++rank;
    }
    if (rank < k)
        throw std::logic_error("osd_decode: generator not full rank");

    // hard decisions on the basis positions (in permuted coordinates)
    std::vector<int> base_bits(k);
    for (std::size_t j = 0; j < k; ++j)
        base_bits[j] = llr[perm[basis_cols[j]]] < 0.0 ? 1 : 0;

    auto reencode = [&](const std::vector<int>& info) {
        // codeword (permuted coordinates) = sum of selected rows; row j of
        // the reduced generator has a 1 exactly at basis_cols[j] among the
        // basis columns
        BitVector cw(n);
        for (std::size_t j = 0; j < k; ++j)
            if (info[j])
                for (std::size_t c = 0; c < n; ++c)
                    if (gen.get(j, c)) cw.flip(c);
        return cw;
    };
    auto correlation = [&](const BitVector& cw_perm) {
        double s = 0.0;
        for (std::size_t c = 0; c < n; ++c)
            s += llr[perm[c]] * (cw_perm.get(c) ? -1.0 : 1.0);
        return s;
    };

    std::vector<int> best_info = base_bits;
    BitVector best_cw = reencode(base_bits);
    double best_corr = correlation(best_cw);

    // error patterns of weight 1..order on the basis positions
    std::vector<std::size_t> idx;
    std::vector<int> info = base_bits;
    auto consider = [&]() {
        const BitVector cw = reencode(info);
        const double corr = correlation(cw);
        if (corr > best_corr) {
            best_corr = corr;
            best_cw = cw;
        }
    };
    // weight-w combinations in lexicographic order
    for (unsigned w = 1; w <= order; ++w) {
        idx.assign(w, 0);
        for (unsigned j = 0; j < w; ++j) idx[j] = j;
        for (;;) {
            info = base_bits;
            for (unsigned j = 0; j < w; ++j) info[idx[j]] ^= 1;
            consider();
            // next combination
            int j = static_cast<int>(w) - 1;
            while (j >= 0 && idx[j] == k - w + j) --j;
            if (j < 0) break;
            ++idx[j];
            for (unsigned t = j + 1; t < w; ++t) idx[t] = idx[t - 1] + 1;
        }
    }

    // back to natural coordinates, bipolar
    std::vector<int> x_hat(n);
    for (std::size_t c = 0; c < n; ++c)
        x_hat[perm[c]] = best_cw.get(c) ? -1 : 1;
    return x_hat;
}

}  // namespace lcodec

#endif
