#ifndef LCODEC_BP_HPP
#define LCODEC_BP_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lcodec/bitlinalg.hpp"

namespace lcodec {

// Variable/check adjacency of H with per-edge message slots.
struct TannerGraph {
    std::size_t n_var = 0, n_check = 0;
    std::vector<std::vector<std::size_t>> check_edges;  // check -> edge ids
    std::vector<std::vector<std::size_t>> var_edges;    // var -> edge ids
    std::vector<std::size_t> edge_var, edge_check;

    explicit TannerGraph(const BitMatrix& h)
        : n_var(h.cols()), n_check(h.rows()), check_edges(h.rows()),
          var_edges(h.cols()) {
        for (std::size_t r = 0; r < h.rows(); ++r)
            for (std::size_t c = 0; c < h.cols(); ++c)
                if (h.get(r, c)) {
                    const std::size_t e = edge_var.size();
                    edge_var.push_back(c);
                    edge_check.push_back(r);
                    check_edges[r].push_back(e);
                    var_edges[c].push_back(e);
                }
    }
    std::size_t edges() const { return edge_var.size(); }
};

struct BpResult {
    std::vector<double> posterior_llr;
    BitVector hard_bits;
    bool converged = false;
    std::size_t iterations = 0;
};

inline constexpr double kBpClamp = 30.0;

// Flooding sum-product decoder.  Check updates use the tanh-product rule
// with message magnitudes clamped at +-30; with early_stop it returns as
// soon as the hard decisions satisfy every check (posteriors are then the
// ones of the stopping iteration, not necessarily fully mixed).
inline BpResult bp_decode(const BitMatrix& h, const std::vector<double>& llr,
                          std::size_t max_iters, bool early_stop = true) {
    if (llr.size() != h.cols())
        throw std::invalid_argument("bp_decode: llr length mismatch");
    const TannerGraph g(h);

    auto clamp = [](double x) {
        if (x > kBpClamp) return kBpClamp;
        if (x < -kBpClamp) return -kBpClamp;
        return x;
    };

    std::vector<double> v2c(g.edges()), c2v(g.edges(), 0.0);
    for (std::size_t e = 0; e < g.edges(); ++e)
        v2c[e] = clamp(llr[g.edge_var[e]]);

    BpResult res;
    res.posterior_llr.assign(g.n_var, 0.0);
    res.hard_bits = BitVector(g.n_var);

    auto refresh_posterior = [&]() {
        for (std::size_t v = 0; v < g.n_var; ++v) {
            double s = llr[v];
            for (std::size_t e : g.var_edges[v]) s += c2v[e];
            res.posterior_llr[v] = s;
            res.hard_bits.set(v, s < 0.0);
        }
    };
    auto checks_satisfied = [&]() {
        for (std::size_t c = 0; c < g.n_check; ++c) {
            int parity = 0;
            for (std::size_t e : g.check_edges[c])
                parity ^= res.hard_bits.get(g.edge_var[e]) ? 1 : 0;
            if (parity) return false;
        }
        return true;
    };

    for (std::size_t it = 0; it < max_iters; ++it) {
        // check-node update
        for (std::size_t c = 0; c < g.n_check; ++c) {
            const auto& es = g.check_edges[c];
            const std::size_t deg = es.size();
            if (deg == 0) continue;
            // forward/backward partial tanh products for extrinsic messages
            std::vector<double> th(deg);
            for (std::size_t j = 0; j < deg; ++j)
                th[j] = std::tanh(0.5 * v2c[es[j]]);
            std::vector<double> fwd(deg), bwd(deg);
            fwd[0] = th[0];
            for (std::size_t j = 1; j < deg; ++j) fwd[j] = fwd[j - 1] * th[j];
            bwd[deg - 1] = th[deg - 1];
            for (std::size_t j = deg - 1; j-- > 0;) bwd[j] = bwd[j + 1] * th[j];
            for (std::size_t j = 0; j < deg; ++j) {
                double prod = 1.0;
                if (j > 0) prod *= fwd[j - 1];
                if (j + 1 < deg) prod *= bwd[j + 1];
                prod = std::min(std::max(prod, -0.999999999999), 0.999999999999);
                c2v[es[j]] = clamp(2.0 * std::atanh(prod));
            }
        }
        // variable-node update
        for (std::size_t v = 0; v < g.n_var; ++v) {
            double total = llr[v];
            for (std::size_t e : g.var_edges[v]) total += c2v[e];
            for (std::size_t e : g.var_edges[v])
                v2c[e] = clamp(total - c2v[e]);
        }
        res.iterations = it + 1;
        refresh_posterior();
        if (checks_satisfied()) {
            res.converged = true;
            if (early_stop) break;
        }
    }
    if (res.iterations == 0) refresh_posterior();
    return res;
}

}  // namespace lcodec

#endif
