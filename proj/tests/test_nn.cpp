#include <doctest.h>

#include <cmath>

#include "lcodec/nn.hpp"
#include "lcodec/rng.hpp"

using namespace lcodec;

namespace {

Vec random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
    Vec v(n);
    for (auto& x : v) x = scale * rng.next_normal();
    return v;
}

// central finite difference of the scalar loss wrt every parameter
template <typename LossFn>
Vec fd_gradient(Vec& params, LossFn loss, double h = 1e-4) {
    Vec g(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double save = params[i];
        params[i] = save + h;
        const double lp = loss();
        params[i] = save - h;
        const double lm = loss();
        params[i] = save;
        g[i] = (lp - lm) / (2.0 * h);
    }
    return g;
}

double max_rel_err(const Vec& a, const Vec& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({std::fabs(a[i]), std::fabs(b[i]), 1e-8});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / denom);
    }
    return worst;
}

}  // namespace

TEST_CASE("discounted cross-entropy loss") {
    SUBCASE("hand-computed two-step example") {
        // N=1, T=2, gamma=0.5, target class 0:
        // step 1 predicts p=0.5, step 2 predicts p=0.1
        const std::vector<Vec> outputs{{0.0}, {0.8}};
        const std::vector<int> z_sign{+1};
        const double loss = loss_discounted_ce(outputs, z_sign, 0.5);
        CHECK(loss == doctest::Approx(0.5 * std::log(2.0) + std::log(1.0 / 0.9))
                          .epsilon(1e-10));
        CHECK(loss == doctest::Approx(0.45193).epsilon(1e-4));
    }
    SUBCASE("T=1 is plain mean cross-entropy, gamma irrelevant") {
        const std::vector<Vec> outputs{{0.2, -0.4}};
        const std::vector<int> z_sign{+1, -1};
        CHECK(loss_discounted_ce(outputs, z_sign, 0.5) ==
              doctest::Approx(loss_discounted_ce(outputs, z_sign, 1.0)));
    }
    SUBCASE("perfect prediction is ~0") {
        const std::vector<Vec> outputs{{1.0, -1.0}};
        const std::vector<int> z_sign{+1, -1};
        CHECK(loss_discounted_ce(outputs, z_sign, 0.5) ==
              doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("gradient matches finite differences away from the clip") {
        Rng rng(1);
        std::vector<Vec> outputs{random_vec(rng, 5, 0.4),
                                 random_vec(rng, 5, 0.4),
                                 random_vec(rng, 5, 0.4)};
        std::vector<int> z_sign;
        for (int i = 0; i < 5; ++i) z_sign.push_back(rng.next_bit() ? -1 : 1);
        const auto grads = loss_discounted_ce_grad(outputs, z_sign, 0.5);
        const double h = 1e-7;
        for (std::size_t t = 0; t < 3; ++t)
            for (std::size_t i = 0; i < 5; ++i) {
                const double save = outputs[t][i];
                outputs[t][i] = save + h;
                const double lp = loss_discounted_ce(outputs, z_sign, 0.5);
                outputs[t][i] = save - h;
                const double lm = loss_discounted_ce(outputs, z_sign, 0.5);
                outputs[t][i] = save;
                CHECK(grads[t][i] ==
                      doctest::Approx((lp - lm) / (2.0 * h)).epsilon(1e-5));
            }
    }
    SUBCASE("empty outputs throw") {
        CHECK_THROWS_AS(loss_discounted_ce({}, {1}, 0.5),
                        std::invalid_argument);
    }
}

TEST_CASE("vanilla net") {
    SUBCASE("all-zero parameters give the zero vector") {
        VanillaNet net(7, 3, 14);
        const Vec out = net.forward(Vec(10, 0.5));
        for (double v : out) CHECK(v == 0.0);
    }
    SUBCASE("deterministic forward") {
        VanillaNet net(7, 3, 14);
        Rng rng(5);
        net.init_random(rng);
        Rng in_rng(6);
        const Vec in = random_vec(in_rng, 10);
        CHECK(net.forward(in) == net.forward(in));
    }
    SUBCASE("output range is (-1,1)") {
        VanillaNet net(7, 3, 14);
        Rng rng(5);
        net.init_random(rng);
        Rng in_rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            for (double v : net.forward(random_vec(in_rng, 10, 3.0))) {
                CHECK(v > -1.0);
                CHECK(v < 1.0);
            }
        }
    }
    SUBCASE("input dimension mismatch throws") {
        VanillaNet net(7, 3, 14);
        CHECK_THROWS_AS(net.forward(Vec(9)), std::invalid_argument);
    }
    SUBCASE("backward matches finite differences") {
        VanillaNet net(7, 3, 8);
        Rng rng(11);
        net.init_random(rng);
        // nonzero biases so ReLU kinks sit away from the sample point
        Rng in_rng(12);
        const Vec in = random_vec(in_rng, 10);
        std::vector<int> z_sign;
        for (int i = 0; i < 7; ++i) z_sign.push_back(in_rng.next_bit() ? -1 : 1);

        auto loss = [&] {
            return loss_discounted_ce({net.forward(in)}, z_sign, 0.5);
        };
        VanillaNet::Cache cache;
        const Vec out = net.forward(in, &cache);
        const auto d_out = loss_discounted_ce_grad({out}, z_sign, 0.5);
        Vec grad(net.params().size(), 0.0);
        net.backward(cache, d_out[0], grad);

        const Vec fd = fd_gradient(net.params(), loss);
        CHECK(max_rel_err(grad, fd) < 1e-4);
    }
}

TEST_CASE("stacked gru net") {
    SUBCASE("all-zero parameters stay at zero through every step") {
        StackedGruNet net(7, 3, 10);
        const auto outs = net.forward(Vec(10, 1.0));
        CHECK(outs.size() == 5);
        for (const auto& o : outs)
            for (double v : o) CHECK(v == 0.0);
    }
    SUBCASE("zero recurrent state halves under a forced update gate") {
        // single level, single step view: with all weights zero the update
        // gate is sigmoid(0)=0.5 and the candidate tanh(0)=0, so
        // h' = 0.5*h; starting from h=0 the state stays 0
        StackedGruNet net(2, 1, 4, 1, 3);
        const auto outs = net.forward(Vec(3, 0.9));
        for (const auto& o : outs)
            for (double v : o) CHECK(v == 0.0);
    }
    SUBCASE("outputs vary across steps for a random net") {
        StackedGruNet net(7, 3, 10);
        Rng rng(13);
        net.init_random(rng);
        Rng in_rng(14);
        const auto outs = net.forward(random_vec(in_rng, 10));
        CHECK(outs.size() == 5);
        bool any_diff = false;
        for (std::size_t i = 0; i < 7; ++i)
            if (outs[0][i] != outs[4][i]) any_diff = true;
        CHECK(any_diff);
    }
    SUBCASE("configuration errors") {
        CHECK_THROWS_AS(StackedGruNet(7, 3, 10, 0, 5), std::invalid_argument);
        CHECK_THROWS_AS(StackedGruNet(7, 3, 10, 4, 0), std::invalid_argument);
        StackedGruNet net(7, 3, 10);
        CHECK_THROWS_AS(net.forward(Vec(9)), std::invalid_argument);
    }
    SUBCASE("bptt matches finite differences") {
        StackedGruNet net(5, 2, 6, 2, 3);
        Rng rng(15);
        net.init_random(rng);
        Rng in_rng(16);
        const Vec in = random_vec(in_rng, 7);
        std::vector<int> z_sign;
        for (int i = 0; i < 5; ++i) z_sign.push_back(in_rng.next_bit() ? -1 : 1);

        auto loss = [&] {
            return loss_discounted_ce(net.forward(in), z_sign, 0.5);
        };
        StackedGruNet::Cache cache;
        const auto outs = net.forward(in, &cache);
        const auto d_out = loss_discounted_ce_grad(outs, z_sign, 0.5);
        Vec grad(net.params().size(), 0.0);
        net.backward(cache, d_out, grad);

        const Vec fd = fd_gradient(net.params(), loss);
        CHECK(max_rel_err(grad, fd) < 1e-4);
    }
}

TEST_CASE("adam") {
    SUBCASE("first step moves by ~lr against the gradient sign") {
        Vec params{0.0, 0.0};
        Vec grads{1.0, -2.0};
        AdamState st;
        adam_step(params, grads, st, 0.1);
        CHECK(params[0] == doctest::Approx(-0.1).epsilon(1e-6));
        CHECK(params[1] == doctest::Approx(0.1).epsilon(1e-6));
    }
    SUBCASE("minimizes a quadratic") {
        Vec params{5.0};
        AdamState st;
        for (int i = 0; i < 2000; ++i) {
            Vec g{2.0 * params[0]};
            adam_step(params, g, st, 0.05);
        }
        CHECK(std::fabs(params[0]) < 1e-3);
    }
    SUBCASE("shape mismatch throws") {
        Vec params{1.0};
        Vec grads{1.0, 2.0};
        AdamState st;
        CHECK_THROWS_AS(adam_step(params, grads, st, 0.1),
                        std::invalid_argument);
    }
}
