#ifndef LCODEC_DECODER_HPP
#define LCODEC_DECODER_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lcodec/automorphism.hpp"
#include "lcodec/channel.hpp"
#include "lcodec/code.hpp"
#include "lcodec/estimator.hpp"

namespace lcodec {

enum class DecodeMode { Hard, Soft };

struct DecodeResult {
    std::vector<double> x_hat_soft;  // y^s * zhat, pre-sign
    std::vector<int> x_hat_hard;     // sign of the above, sign(0)=+1
    BitVector x_hat_bits;
    BitVector m_hat;
    std::optional<BchPermutation> permutation;
};

// The syndrome pipeline: a = |y|, s = H*bin(sign(y)), zhat = F(a, s),
// soft output = sign(y) * zhat, hard output = its sign, message via A.
inline DecodeResult decode(const LinearCode& code, const NoiseEstimator& est,
                           const std::vector<double>& y,
                           DecodeMode mode = DecodeMode::Hard) {
    if (y.size() != code.n)
        throw std::invalid_argument("decode: channel output length mismatch");
    if (est.block_length() != code.n)
        throw std::invalid_argument("decode: estimator/code mismatch");
    const HardDecision hd = hard_decision(y);
    std::vector<double> abs_y(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) abs_y[i] = std::fabs(y[i]);
    BitVector s = syndrome(code, hd.bits);
    if (est.syndrome_length() != s.size()) {
        // estimator trained against a full-rank H while the code carries a
        // redundant one (or vice versa) is a configuration error
        throw std::invalid_argument("decode: estimator syndrome length mismatch");
    }
    const std::vector<double> zhat = est.estimate(abs_y, s);

    DecodeResult res;
    res.x_hat_soft.resize(code.n);
    res.x_hat_hard.resize(code.n);
    res.x_hat_bits = BitVector(code.n);
    for (std::size_t i = 0; i < code.n; ++i) {
        res.x_hat_soft[i] = hd.signs[i] * zhat[i];
        res.x_hat_hard[i] = res.x_hat_soft[i] < 0.0 ? -1 : 1;
        res.x_hat_bits.set(i, res.x_hat_soft[i] < 0.0);
    }
    res.m_hat = recover_message(code, res.x_hat_bits);
    (void)mode;  // soft callers read x_hat_soft; hard callers the rest
    return res;
}

// Permutation-preprocessed pipeline: pick the automorphism concentrating
// adjusted reliability in the first K positions, decode the permuted vector,
// and un-permute the outputs.
inline DecodeResult permuted_decode(const LinearCode& code,
                                    const NoiseEstimator& est,
                                    const BisoChannel& ch,
                                    const std::vector<double>& y,
                                    DecodeMode mode = DecodeMode::Hard) {
    if (!code.is_bch() || !code.parity_layout)
        throw std::invalid_argument(
            "permuted_decode: requires a BCH code with systematic parity layout");
    const std::vector<double> rel = ch.adjusted_reliability(y);
    const BchPermutation p = best_permutation(code, rel);
    const std::vector<double> y_perm = perm_apply(p, y);
    DecodeResult inner = decode(code, est, y_perm, mode);

    const BchPermutation inv = perm_inverse(p);
    DecodeResult res;
    res.x_hat_soft = perm_apply(inv, inner.x_hat_soft);
    res.x_hat_hard = perm_apply(inv, inner.x_hat_hard);
    res.x_hat_bits = perm_apply(inv, inner.x_hat_bits);
    res.m_hat = recover_message(code, res.x_hat_bits);
    res.permutation = p;
    return res;
}

}  // namespace lcodec

#endif
