#ifndef LCODEC_ESTIMATOR_HPP
#define LCODEC_ESTIMATOR_HPP

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "lcodec/bitlinalg.hpp"
#include "lcodec/channel.hpp"
#include "lcodec/code.hpp"

namespace lcodec {

// Noise estimator F: (reliabilities |y|, syndrome) -> zhat in [-1,1]^N.
// Implementations must depend on the channel output only through these two
// inputs; never on the signs of y.
class NoiseEstimator {
  public:
    virtual ~NoiseEstimator() = default;
    virtual std::vector<double> estimate(const std::vector<double>& abs_y,
                                         const BitVector& synd) const = 0;
    virtual std::size_t block_length() const = 0;
    virtual std::size_t syndrome_length() const = 0;
};

// F == all-ones: the decoder degenerates to per-bit hard decision.
class IdentityEstimator : public NoiseEstimator {
  public:
    IdentityEstimator(std::size_t n, std::size_t synd_len)
        : n_(n), synd_len_(synd_len) {}
    std::vector<double> estimate(const std::vector<double>& abs_y,
                                 const BitVector& synd) const override {
        if (abs_y.size() != n_ || synd.size() != synd_len_)
            throw std::invalid_argument("IdentityEstimator: dimension mismatch");
        return std::vector<double>(n_, 1.0);
    }
    std::size_t block_length() const override { return n_; }
    std::size_t syndrome_length() const override { return synd_len_; }

  private:
    std::size_t n_, synd_len_;
};

namespace detail {

// Shared coset enumeration for the brute-force oracles.  The syndrome coset
// is D*s XOR {codewords}; each member zb is weighted by
// prod_i Pr[sign_i | |z_i| = a_i] and per-bit sign marginals accumulated.
// Enumeration is in message-index order.
struct SignMarginals {
    std::vector<double> pos;  // unnormalized posterior mass of sign +1
    std::vector<double> neg;
};

inline SignMarginals coset_sign_marginals(const LinearCode& code,
                                          const BisoChannel& ch,
                                          const std::vector<double>& abs_y,
                                          const BitVector& synd) {
    const std::size_t n = code.n;
    if (abs_y.size() != n)
        throw std::invalid_argument("coset oracle: reliability length mismatch");
    const std::size_t synd_rank = code.D.cols();
    // D inverts the full-rank row subset of H; reduce a redundant syndrome
    // to that subset and check consistency
    BitVector s_reduced = synd;
    if (synd.size() != synd_rank) {
        if (synd.size() != code.H.rows())
            throw std::invalid_argument("coset oracle: syndrome length mismatch");
        const std::vector<std::size_t> keep = independent_row_indices(code.H);
        s_reduced = BitVector(synd_rank);
        for (std::size_t i = 0; i < keep.size(); ++i)
            s_reduced.set(i, synd.get(keep[i]));
    }
    const BitVector particular = mat_vec_mod2(code.D, s_reduced);
    if (mat_vec_mod2(code.H, particular) != synd)
        throw std::invalid_argument("coset oracle: inconsistent syndrome");

    const double log_floor = -745.0;  // below exp() underflow
    std::vector<double> log_p_pos(n), log_p_neg(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = ch.prob_sign_positive(abs_y[i]);
        log_p_pos[i] = p > 0.0 ? std::log(p) : log_floor;
        log_p_neg[i] = p < 1.0 ? std::log(1.0 - p) : log_floor;
    }

    SignMarginals mg;
    mg.pos.assign(n, 0.0);
    mg.neg.assign(n, 0.0);

    const std::size_t k = code.k;
    if (k > 24)
        throw std::invalid_argument("coset oracle: 2^K enumeration infeasible");
    // Gray-order free iteration is unnecessary at this scale; plain
    // message-index order keeps the contract deterministic.
    double max_log = -1e300;
    std::vector<double> logw(std::size_t{1} << k);
    std::vector<BitVector> members(std::size_t{1} << k);
    for (std::size_t msg = 0; msg < (std::size_t{1} << k); ++msg) {
        BitVector m(k);
        for (std::size_t j = 0; j < k; ++j) m.set(j, (msg >> j) & 1);
        BitVector zb = particular ^ encode(code, m);
        double lw = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            lw += zb.get(i) ? log_p_neg[i] : log_p_pos[i];
        logw[msg] = lw;
        members[msg] = std::move(zb);
        if (lw > max_log) max_log = lw;
    }
    for (std::size_t msg = 0; msg < logw.size(); ++msg) {
        const double w = std::exp(logw[msg] - max_log);
        const BitVector& zb = members[msg];
        for (std::size_t i = 0; i < n; ++i) {
            if (zb.get(i))
                mg.neg[i] += w;
            else
                mg.pos[i] += w;
        }
    }
    return mg;
}

}  // namespace detail

// Exact bitwise MAP of the noise sign given (|z|, syndrome), by coset
// enumeration.  Ties resolve to +1.
class BruteForceMapEstimator : public NoiseEstimator {
  public:
    BruteForceMapEstimator(LinearCode code, BisoChannel ch)
        : code_(std::move(code)), ch_(ch) {}
    std::vector<double> estimate(const std::vector<double>& abs_y,
                                 const BitVector& synd) const override {
        const auto mg = detail::coset_sign_marginals(code_, ch_, abs_y, synd);
        std::vector<double> z(code_.n);
        for (std::size_t i = 0; i < code_.n; ++i)
            z[i] = mg.neg[i] > mg.pos[i] ? -1.0 : 1.0;
        return z;
    }
    std::size_t block_length() const override { return code_.n; }
    std::size_t syndrome_length() const override { return code_.H.rows(); }

  private:
    LinearCode code_;
    BisoChannel ch_;
};

// Posterior mean E[sign(Z_i) | |Z|, syndrome] in [-1,1]; pairs with soft
// decoding to realize the MMSE estimate.
class BruteForceMmseEstimator : public NoiseEstimator {
  public:
    BruteForceMmseEstimator(LinearCode code, BisoChannel ch)
        : code_(std::move(code)), ch_(ch) {}
    std::vector<double> estimate(const std::vector<double>& abs_y,
                                 const BitVector& synd) const override {
        const auto mg = detail::coset_sign_marginals(code_, ch_, abs_y, synd);
        std::vector<double> z(code_.n);
        for (std::size_t i = 0; i < code_.n; ++i) {
            const double tot = mg.pos[i] + mg.neg[i];
            z[i] = tot > 0.0 ? (mg.pos[i] - mg.neg[i]) / tot : 0.0;
        }
        return z;
    }
    std::size_t block_length() const override { return code_.n; }
    std::size_t syndrome_length() const override { return code_.H.rows(); }

  private:
    LinearCode code_;
    BisoChannel ch_;
};

}  // namespace lcodec

#endif
