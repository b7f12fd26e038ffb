#ifndef LCODEC_NN_HPP
#define LCODEC_NN_HPP

#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcodec/rng.hpp"

namespace lcodec {

using Vec = std::vector<double>;

namespace nn {

// View into a flat parameter vector: a rows x cols row-major matrix or a
// bias (cols == 1).
struct View {
    std::size_t off = 0, rows = 0, cols = 0;
    std::size_t size() const { return rows * cols; }
};

// y += W x
inline void matvec_acc(const Vec& p, const View& w, const Vec& x, Vec& y) {
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double* row = p.data() + w.off + r * w.cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * x[c];
        y[r] += acc;
    }
}

// x_grad += W^T dy
inline void matvec_t_acc(const Vec& p, const View& w, const Vec& dy,
                         Vec& x_grad) {
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double* row = p.data() + w.off + r * w.cols;
        const double d = dy[r];
        if (d == 0.0) continue;
        for (std::size_t c = 0; c < w.cols; ++c) x_grad[c] += row[c] * d;
    }
}

// dW += dy x^T
inline void outer_acc(Vec& grad, const View& w, const Vec& dy, const Vec& x) {
    for (std::size_t r = 0; r < w.rows; ++r) {
        double* row = grad.data() + w.off + r * w.cols;
        const double d = dy[r];
        if (d == 0.0) continue;
        for (std::size_t c = 0; c < w.cols; ++c) row[c] += d * x[c];
    }
}

inline void bias_acc(Vec& grad, const View& b, const Vec& dy) {
    for (std::size_t r = 0; r < b.rows; ++r) grad[b.off + r] += dy[r];
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace nn

// ---------------------------------------------------------------------------
// Discounted cross-entropy loss over per-step outputs
// ---------------------------------------------------------------------------

inline constexpr double kCeClip = 1e-12;

// L = (1/N) sum_t sum_i gamma^(T-t) H_CE(target_i, pred_i(t)) with
// target = (1 - z_sign)/2 and pred = clamp((1 - zhat)/2, clip, 1-clip).
inline double loss_discounted_ce(const std::vector<Vec>& outputs,
                                 const std::vector<int>& z_sign,
                                 double gamma) {
    if (outputs.empty())
        throw std::invalid_argument("loss: no outputs");
    const std::size_t big_t = outputs.size();
    const std::size_t n = z_sign.size();
    double loss = 0.0;
    for (std::size_t t = 0; t < big_t; ++t) {
        if (outputs[t].size() != n)
            throw std::invalid_argument("loss: output length mismatch");
        const double disc = std::pow(gamma, static_cast<double>(big_t - 1 - t));
        for (std::size_t i = 0; i < n; ++i) {
            const double q = (1.0 - z_sign[i]) / 2.0;
            double p = (1.0 - outputs[t][i]) / 2.0;
            p = std::min(std::max(p, kCeClip), 1.0 - kCeClip);
            loss += disc * (-q * std::log(p) - (1.0 - q) * std::log(1.0 - p));
        }
    }
    return loss / static_cast<double>(n);
}

// dL/d zhat_i(t); zero where the clip binds
inline std::vector<Vec> loss_discounted_ce_grad(
    const std::vector<Vec>& outputs, const std::vector<int>& z_sign,
    double gamma) {
    const std::size_t big_t = outputs.size();
    const std::size_t n = z_sign.size();
    std::vector<Vec> grads(big_t, Vec(n, 0.0));
    for (std::size_t t = 0; t < big_t; ++t) {
        const double disc = std::pow(gamma, static_cast<double>(big_t - 1 - t));
        for (std::size_t i = 0; i < n; ++i) {
            const double q = (1.0 - z_sign[i]) / 2.0;
            const double p_raw = (1.0 - outputs[t][i]) / 2.0;
            if (p_raw <= kCeClip || p_raw >= 1.0 - kCeClip) continue;
            // dH/dp = -q/p + (1-q)/(1-p); dp/dzhat = -1/2
            grads[t][i] = disc / n *
                          (q / p_raw - (1.0 - q) / (1.0 - p_raw)) * 0.5;
        }
    }
    return grads;
}

// ---------------------------------------------------------------------------
// Vanilla multi-layer network
// ---------------------------------------------------------------------------

// 11 affine layers; ReLU on the first 10, tanh on the last.  Every layer
// past the first receives the raw network input concatenated to the previous
// layer's output.
class VanillaNet {
  public:
    static constexpr std::size_t kLayers = 11;

    VanillaNet(std::size_t n, std::size_t synd_len, std::size_t hidden_width)
        : n_(n), synd_len_(synd_len), width_(hidden_width),
          in_dim_(n + synd_len) {
        std::size_t off = 0;
        for (std::size_t l = 0; l < kLayers; ++l) {
            const std::size_t in = l == 0 ? in_dim_ : width_ + in_dim_;
            const std::size_t out = l + 1 < kLayers ? width_ : n_;
            w_[l] = {off, out, in};
            off += out * in;
            b_[l] = {off, out, 1};
            off += out;
        }
        params_.assign(off, 0.0);
    }

    void init_random(Rng& rng) {
        for (std::size_t l = 0; l < kLayers; ++l) {
            const double std = std::sqrt(2.0 / static_cast<double>(w_[l].cols));
            for (std::size_t i = 0; i < w_[l].size(); ++i)
                params_[w_[l].off + i] = std * rng.next_normal();
            for (std::size_t i = 0; i < b_[l].size(); ++i)
                params_[b_[l].off + i] = 0.0;
        }
    }

    std::size_t block_length() const { return n_; }
    std::size_t syndrome_length() const { return synd_len_; }
    std::size_t hidden_width() const { return width_; }
    Vec& params() { return params_; }
    const Vec& params() const { return params_; }

    struct Cache {
        Vec input;                 // concat(a, bipolar(s))
        std::vector<Vec> pre;      // pre-activations per layer
        std::vector<Vec> act;      // post-activations per layer
    };

    // Returns the single output zhat in (-1,1)^N.
    Vec forward(const Vec& input, Cache* cache = nullptr) const {
        if (input.size() != in_dim_)
            throw std::invalid_argument("VanillaNet: input dimension mismatch");
        if (cache) {
            cache->input = input;
            cache->pre.assign(kLayers, {});
            cache->act.assign(kLayers, {});
        }
        Vec h;
        for (std::size_t l = 0; l < kLayers; ++l) {
            Vec x;
            if (l == 0) {
                x = input;
            } else {
                x = h;
                x.insert(x.end(), input.begin(), input.end());
            }
            Vec z(w_[l].rows, 0.0);
            nn::matvec_acc(params_, w_[l], x, z);
            for (std::size_t r = 0; r < z.size(); ++r)
                z[r] += params_[b_[l].off + r];
            Vec a(z.size());
            if (l + 1 < kLayers)
                for (std::size_t r = 0; r < z.size(); ++r)
                    a[r] = z[r] > 0.0 ? z[r] : 0.0;
            else
                for (std::size_t r = 0; r < z.size(); ++r)
                    a[r] = std::tanh(z[r]);
            if (cache) {
                cache->pre[l] = z;
                cache->act[l] = a;
            }
            h = std::move(a);
        }
        return h;
    }

    // Accumulates parameter gradients for dL/d output into grad (same layout
    // as params()).
    void backward(const Cache& cache, const Vec& d_output, Vec& grad) const {
        Vec d_act = d_output;
        for (std::size_t l = kLayers; l-- > 0;) {
            // through the activation
            Vec dz(d_act.size());
            if (l + 1 < kLayers) {
                for (std::size_t r = 0; r < dz.size(); ++r)
                    dz[r] = cache.pre[l][r] > 0.0 ? d_act[r] : 0.0;
            } else {
                for (std::size_t r = 0; r < dz.size(); ++r) {
                    const double th = cache.act[l][r];
                    dz[r] = d_act[r] * (1.0 - th * th);
                }
            }
            Vec x;
            if (l == 0) {
                x = cache.input;
            } else {
                x = cache.act[l - 1];
                x.insert(x.end(), cache.input.begin(), cache.input.end());
            }
            nn::outer_acc(grad, w_[l], dz, x);
            nn::bias_acc(grad, b_[l], dz);
            if (l > 0) {
                Vec dx(x.size(), 0.0);
                nn::matvec_t_acc(params_, w_[l], dz, dx);
                d_act.assign(dx.begin(), dx.begin() + width_);
                // gradient into the replicated raw input is dropped: the
                // input is data, not a parameter
            }
        }
    }

    const nn::View& weight_view(std::size_t l) const { return w_[l]; }
    const nn::View& bias_view(std::size_t l) const { return b_[l]; }

  private:
    std::size_t n_, synd_len_, width_, in_dim_;
    nn::View w_[kLayers], b_[kLayers];
    Vec params_;
};

// ---------------------------------------------------------------------------
// Stacked GRU network
// ---------------------------------------------------------------------------

// `levels` stacked GRU cells unrolled for `steps` time steps; the same input
// vector is fed to the bottom level at every step.  A tanh projection from
// the top hidden state emits an estimate at each step.
class StackedGruNet {
  public:
    StackedGruNet(std::size_t n, std::size_t synd_len, std::size_t hidden,
                  std::size_t levels = 4, std::size_t steps = 5)
        : n_(n), synd_len_(synd_len), hidden_(hidden), levels_(levels),
          steps_(steps), in_dim_(n + synd_len) {
        if (levels_ == 0 || steps_ == 0)
            throw std::invalid_argument("StackedGruNet: empty configuration");
        std::size_t off = 0;
        auto add = [&](std::size_t rows, std::size_t cols) {
            nn::View v{off, rows, cols};
            off += rows * cols;
            return v;
        };
        lv_.resize(levels_);
        for (std::size_t j = 0; j < levels_; ++j) {
            const std::size_t in = j == 0 ? in_dim_ : hidden_;
            lv_[j].wr = add(hidden_, in);
            lv_[j].wu = add(hidden_, in);
            lv_[j].wc = add(hidden_, in);
            lv_[j].ur = add(hidden_, hidden_);
            lv_[j].uu = add(hidden_, hidden_);
            lv_[j].uc = add(hidden_, hidden_);
            lv_[j].br = add(hidden_, 1);
            lv_[j].bu = add(hidden_, 1);
            lv_[j].bc = add(hidden_, 1);
        }
        wo_ = add(n_, hidden_);
        bo_ = add(n_, 1);
        params_.assign(off, 0.0);
    }

    void init_random(Rng& rng) {
        auto fill = [&](const nn::View& v, double std) {
            for (std::size_t i = 0; i < v.size(); ++i)
                params_[v.off + i] = std * rng.next_normal();
        };
        for (std::size_t j = 0; j < levels_; ++j) {
            const double sx = std::sqrt(1.0 / static_cast<double>(lv_[j].wr.cols));
            const double sh = std::sqrt(1.0 / static_cast<double>(hidden_));
            fill(lv_[j].wr, sx);
            fill(lv_[j].wu, sx);
            fill(lv_[j].wc, sx);
            fill(lv_[j].ur, sh);
            fill(lv_[j].uu, sh);
            fill(lv_[j].uc, sh);
        }
        fill(wo_, std::sqrt(1.0 / static_cast<double>(hidden_)));
    }

    std::size_t block_length() const { return n_; }
    std::size_t syndrome_length() const { return synd_len_; }
    std::size_t hidden_size() const { return hidden_; }
    std::size_t levels() const { return levels_; }
    std::size_t steps() const { return steps_; }
    Vec& params() { return params_; }
    const Vec& params() const { return params_; }

    struct CellCache {
        Vec x, h_prev, r, u, c, h;
    };
    struct Cache {
        Vec input;
        // [t][level]
        std::vector<std::vector<CellCache>> cells;
        std::vector<Vec> outputs;  // tanh projections per step
    };

    // Returns one output per time step; the final element is the estimate
    // used at decode time.
    std::vector<Vec> forward(const Vec& input, Cache* cache = nullptr) const {
        if (input.size() != in_dim_)
            throw std::invalid_argument("StackedGruNet: input dimension mismatch");
        std::vector<Vec> h(levels_, Vec(hidden_, 0.0));
        std::vector<Vec> outputs;
        if (cache) {
            cache->input = input;
            cache->cells.assign(steps_, std::vector<CellCache>(levels_));
            cache->outputs.clear();
        }
        for (std::size_t t = 0; t < steps_; ++t) {
            for (std::size_t j = 0; j < levels_; ++j) {
                const Vec& x = j == 0 ? input : h[j - 1];
                const Vec& hp = h[j];
                Vec r(hidden_, 0.0), u(hidden_, 0.0), c(hidden_, 0.0);
                nn::matvec_acc(params_, lv_[j].wr, x, r);
                nn::matvec_acc(params_, lv_[j].ur, hp, r);
                nn::matvec_acc(params_, lv_[j].wu, x, u);
                nn::matvec_acc(params_, lv_[j].uu, hp, u);
                for (std::size_t i = 0; i < hidden_; ++i) {
                    r[i] = nn::sigmoid(r[i] + params_[lv_[j].br.off + i]);
                    u[i] = nn::sigmoid(u[i] + params_[lv_[j].bu.off + i]);
                }
                Vec rh(hidden_);
                for (std::size_t i = 0; i < hidden_; ++i) rh[i] = r[i] * hp[i];
                nn::matvec_acc(params_, lv_[j].wc, x, c);
                nn::matvec_acc(params_, lv_[j].uc, rh, c);
                for (std::size_t i = 0; i < hidden_; ++i)
                    c[i] = std::tanh(c[i] + params_[lv_[j].bc.off + i]);
                Vec hn(hidden_);
                for (std::size_t i = 0; i < hidden_; ++i)
                    hn[i] = u[i] * hp[i] + (1.0 - u[i]) * c[i];
                if (cache) {
                    auto& cc = cache->cells[t][j];
                    cc.x = x;
                    cc.h_prev = hp;
                    cc.r = r;
                    cc.u = u;
                    cc.c = c;
                    cc.h = hn;
                }
                h[j] = std::move(hn);
            }
            Vec o(n_, 0.0);
            nn::matvec_acc(params_, wo_, h[levels_ - 1], o);
            for (std::size_t i = 0; i < n_; ++i)
                o[i] = std::tanh(o[i] + params_[bo_.off + i]);
            if (cache) cache->outputs.push_back(o);
            outputs.push_back(std::move(o));
        }
        return outputs;
    }

    // Accumulates gradients for per-step output gradients d_outputs.
    void backward(const Cache& cache, const std::vector<Vec>& d_outputs,
                  Vec& grad) const {
        // dh[j]: gradient flowing into h_j at the current step boundary
        std::vector<Vec> dh(levels_, Vec(hidden_, 0.0));
        for (std::size_t t = steps_; t-- > 0;) {
            // output projection at step t
            {
                Vec dz(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    const double th = cache.outputs[t][i];
                    dz[i] = d_outputs[t][i] * (1.0 - th * th);
                }
                nn::outer_acc(grad, wo_, dz, cache.cells[t][levels_ - 1].h);
                nn::bias_acc(grad, bo_, dz);
                nn::matvec_t_acc(params_, wo_, dz, dh[levels_ - 1]);
            }
            // levels top-down within the step
            for (std::size_t j = levels_; j-- > 0;) {
                const auto& cc = cache.cells[t][j];
                Vec d_hn = dh[j];
                Vec dh_prev(hidden_, 0.0);
                Vec dx(cc.x.size(), 0.0);

                Vec du(hidden_), dc(hidden_);
                for (std::size_t i = 0; i < hidden_; ++i) {
                    du[i] = d_hn[i] * (cc.h_prev[i] - cc.c[i]);
                    dc[i] = d_hn[i] * (1.0 - cc.u[i]);
                    dh_prev[i] += d_hn[i] * cc.u[i];
                }
                // candidate
                Vec dc_pre(hidden_), drh(hidden_, 0.0);
                for (std::size_t i = 0; i < hidden_; ++i)
                    dc_pre[i] = dc[i] * (1.0 - cc.c[i] * cc.c[i]);
                Vec rh(hidden_);
                for (std::size_t i = 0; i < hidden_; ++i)
                    rh[i] = cc.r[i] * cc.h_prev[i];
                nn::outer_acc(grad, lv_[j].wc, dc_pre, cc.x);
                nn::outer_acc(grad, lv_[j].uc, dc_pre, rh);
                nn::bias_acc(grad, lv_[j].bc, dc_pre);
                nn::matvec_t_acc(params_, lv_[j].wc, dc_pre, dx);
                nn::matvec_t_acc(params_, lv_[j].uc, dc_pre, drh);
                Vec dr(hidden_);
                for (std::size_t i = 0; i < hidden_; ++i) {
                    dr[i] = drh[i] * cc.h_prev[i];
                    dh_prev[i] += drh[i] * cc.r[i];
                }
                // gates
                Vec dr_pre(hidden_), du_pre(hidden_);
                for (std::size_t i = 0; i < hidden_; ++i) {
                    dr_pre[i] = dr[i] * cc.r[i] * (1.0 - cc.r[i]);
                    du_pre[i] = du[i] * cc.u[i] * (1.0 - cc.u[i]);
                }
                nn::outer_acc(grad, lv_[j].wr, dr_pre, cc.x);
                nn::outer_acc(grad, lv_[j].ur, dr_pre, cc.h_prev);
                nn::bias_acc(grad, lv_[j].br, dr_pre);
                nn::matvec_t_acc(params_, lv_[j].wr, dr_pre, dx);
                nn::matvec_t_acc(params_, lv_[j].ur, dr_pre, dh_prev);
                nn::outer_acc(grad, lv_[j].wu, du_pre, cc.x);
                nn::outer_acc(grad, lv_[j].uu, du_pre, cc.h_prev);
                nn::bias_acc(grad, lv_[j].bu, du_pre);
                nn::matvec_t_acc(params_, lv_[j].wu, du_pre, dx);
                nn::matvec_t_acc(params_, lv_[j].uu, du_pre, dh_prev);

                dh[j] = std::move(dh_prev);
                if (j > 0)
                    for (std::size_t i = 0; i < hidden_; ++i)
                        dh[j - 1][i] += dx[i];
            }
        }
    }

  private:
    struct LevelViews {
        nn::View wr, wu, wc, ur, uu, uc, br, bu, bc;
    };

    std::size_t n_, synd_len_, hidden_, levels_, steps_, in_dim_;
    std::vector<LevelViews> lv_;
    nn::View wo_, bo_;
    Vec params_;
};

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

struct AdamState {
    Vec m, v;
    std::size_t step = 0;

    void reset(std::size_t size) {
        m.assign(size, 0.0);
        v.assign(size, 0.0);
        step = 0;
    }
};

inline void adam_step(Vec& params, const Vec& grads, AdamState& state,
                      double lr, double beta1 = 0.9, double beta2 = 0.999,
                      double eps = 1e-8) {
    if (params.size() != grads.size())
        throw std::invalid_argument("adam_step: shape mismatch");
    if (state.m.size() != params.size()) state.reset(params.size());
    ++state.step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grads[i];
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grads[i] * grads[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace lcodec

#endif
