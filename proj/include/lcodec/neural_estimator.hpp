#ifndef LCODEC_NEURAL_ESTIMATOR_HPP
#define LCODEC_NEURAL_ESTIMATOR_HPP

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "lcodec/automorphism.hpp"
#include "lcodec/channel.hpp"
#include "lcodec/code.hpp"
#include "lcodec/estimator.hpp"
#include "lcodec/nn.hpp"

namespace lcodec {

inline Vec make_net_input(const std::vector<double>& abs_y,
                          const BitVector& synd) {
    Vec in;
    in.reserve(abs_y.size() + synd.size());
    in.insert(in.end(), abs_y.begin(), abs_y.end());
    // syndrome bits enter in bipolar form, 0 -> +1, 1 -> -1
    for (std::size_t i = 0; i < synd.size(); ++i)
        in.push_back(synd.get(i) ? -1.0 : 1.0);
    return in;
}

// Adapts either architecture to the NoiseEstimator contract.  For the GRU
// the final time step is the decode-time estimate.
class NeuralEstimator : public NoiseEstimator {
  public:
    explicit NeuralEstimator(VanillaNet net) : net_(std::move(net)) {}
    explicit NeuralEstimator(StackedGruNet net) : net_(std::move(net)) {}

    std::vector<double> estimate(const std::vector<double>& abs_y,
                                 const BitVector& synd) const override {
        if (abs_y.size() != block_length() ||
            synd.size() != syndrome_length())
            throw std::invalid_argument("NeuralEstimator: dimension mismatch");
        const Vec in = make_net_input(abs_y, synd);
        if (const auto* v = std::get_if<VanillaNet>(&net_))
            return v->forward(in);
        return std::get<StackedGruNet>(net_).forward(in).back();
    }

    std::size_t block_length() const override {
        return std::visit([](const auto& n) { return n.block_length(); }, net_);
    }
    std::size_t syndrome_length() const override {
        return std::visit([](const auto& n) { return n.syndrome_length(); },
                          net_);
    }

    bool is_vanilla() const { return std::holds_alternative<VanillaNet>(net_); }
    const VanillaNet& vanilla() const { return std::get<VanillaNet>(net_); }
    const StackedGruNet& gru() const { return std::get<StackedGruNet>(net_); }

  private:
    std::variant<VanillaNet, StackedGruNet> net_;
};

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct TrainConfig {
    double ebn0_db = 4.0;
    std::size_t batch_size = 128;
    std::size_t batch_count = 20000;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    double gamma = 0.5;
    std::uint64_t seed = 1;
    bool permute = false;  // include the permutation pre-step in training
};

struct TrainResult {
    std::vector<double> loss_trace;  // one mean loss per batch
};

enum class NetArch { Vanilla, StackedGru };

namespace detail {

// One training example: multiplicative noise only, all-ones transmission.
// No codeword sampler exists on this path by construction.
struct TrainSample {
    Vec input;
    std::vector<int> target;  // noise signs
};

inline TrainSample make_train_sample(const LinearCode& code,
                                     const BisoChannel& ch, Rng& rng,
                                     bool permute) {
    NoiseVector z = ch.sample_noise(rng, code.n);
    if (permute) {
        const std::vector<double> rel = ch.adjusted_reliability(z.z);
        const BchPermutation p = best_permutation(code, rel);
        z.z = perm_apply(p, z.z);
    }
    TrainSample s;
    s.target = z.signs();
    s.input = make_net_input(z.abs(), syndrome(code, z.bits()));
    return s;
}

}  // namespace detail

// Trains a noise estimator on freshly sampled multiplicative noise.  The
// channel is parameterized at cfg.ebn0_db for the code's rate.  Deterministic
// given cfg.seed.
template <typename Net>
TrainResult train_net(Net& net, const LinearCode& code, const BisoChannel& ch,
                      const TrainConfig& cfg) {
    if (net.block_length() != code.n ||
        net.syndrome_length() != code.H.rows())
        throw std::invalid_argument("train: net/code dimension mismatch");
    if (cfg.gamma <= 0.0 || cfg.gamma > 1.0)
        throw std::invalid_argument("train: gamma must be in (0,1]");
    if (cfg.batch_size == 0)
        throw std::invalid_argument("train: batch size must be positive");

    AdamState adam;
    adam.reset(net.params().size());
    TrainResult result;
    result.loss_trace.reserve(cfg.batch_count);
    Vec grad(net.params().size());

    for (std::size_t b = 0; b < cfg.batch_count; ++b) {
        Rng rng(cfg.seed, 1, b);
        std::fill(grad.begin(), grad.end(), 0.0);
        double batch_loss = 0.0;
        for (std::size_t e = 0; e < cfg.batch_size; ++e) {
            const auto sample =
                detail::make_train_sample(code, ch, rng, cfg.permute);
            typename Net::Cache cache;
            std::vector<Vec> outputs;
            if constexpr (std::is_same_v<Net, VanillaNet>) {
                outputs.push_back(net.forward(sample.input, &cache));
            } else {
                outputs = net.forward(sample.input, &cache);
            }
            batch_loss +=
                loss_discounted_ce(outputs, sample.target, cfg.gamma);
            auto d_out =
                loss_discounted_ce_grad(outputs, sample.target, cfg.gamma);
            // scale to the batch mean
            for (auto& v : d_out)
                for (auto& g : v) g /= static_cast<double>(cfg.batch_size);
            if constexpr (std::is_same_v<Net, VanillaNet>) {
                net.backward(cache, d_out[0], grad);
            } else {
                net.backward(cache, d_out, grad);
            }
        }
        batch_loss /= static_cast<double>(cfg.batch_size);
        if (!std::isfinite(batch_loss))
            throw std::runtime_error("train: loss diverged at batch " +
                                     std::to_string(b));
        adam_step(net.params(), grad, adam, cfg.learning_rate, cfg.beta1,
                  cfg.beta2, cfg.adam_eps);
        result.loss_trace.push_back(batch_loss);
    }
    return result;
}

// Builds, initializes and trains a network of the requested architecture.
// hidden_mult scales the paper-style width (hidden = mult * N for vanilla,
// 5N fixed-ratio default for the GRU when gru_hidden == 0).
inline std::pair<NeuralEstimator, TrainResult> train_estimator(
    const LinearCode& code, NetArch arch, const TrainConfig& cfg,
    std::size_t vanilla_hidden_mult = 6, std::size_t gru_hidden = 0,
    std::size_t gru_levels = 4, std::size_t gru_steps = 5) {
    const double rate =
        static_cast<double>(code.k) / static_cast<double>(code.n);
    const BisoChannel ch =
        BisoChannel::awgn(ebn0_to_sigma(cfg.ebn0_db, rate));
    Rng init_rng(cfg.seed, 0, 0);
    if (arch == NetArch::Vanilla) {
        VanillaNet net(code.n, code.H.rows(), vanilla_hidden_mult * code.n);
        net.init_random(init_rng);
        TrainResult tr = train_net(net, code, ch, cfg);
        return {NeuralEstimator(std::move(net)), std::move(tr)};
    }
    const std::size_t hidden = gru_hidden ? gru_hidden : 5 * code.n;
    StackedGruNet net(code.n, code.H.rows(), hidden, gru_levels, gru_steps);
    net.init_random(init_rng);
    TrainResult tr = train_net(net, code, ch, cfg);
    return {NeuralEstimator(std::move(net)), std::move(tr)};
}

}  // namespace lcodec

#endif
