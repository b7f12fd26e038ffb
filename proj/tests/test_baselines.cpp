#include <doctest.h>

#include <cmath>

#include "lcodec/bp.hpp"
#include "lcodec/osd.hpp"
#include "lcodec/rng.hpp"

using namespace lcodec;

namespace {

// Exact per-bit posterior LLRs by codeword enumeration.  Codeword weight
// proportional to exp(0.5 * sum_i llr_i * x_i).
std::vector<double> exact_posterior_llr(const LinearCode& code,
                                        const std::vector<double>& llr) {
    const std::size_t n = code.n, k = code.k;
    std::vector<double> log_pos(n, -1e300), log_neg(n, -1e300);
    auto log_add = [](double a, double b) {
        if (a < b) std::swap(a, b);
        return a + std::log1p(std::exp(b - a));
    };
    for (std::size_t msg = 0; msg < (std::size_t{1} << k); ++msg) {
        BitVector m(k);
        for (std::size_t j = 0; j < k; ++j) m.set(j, (msg >> j) & 1);
        const BitVector cw = encode(code, m);
        double lw = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            lw += 0.5 * llr[i] * (cw.get(i) ? -1.0 : 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (cw.get(i))
                log_neg[i] = log_add(log_neg[i], lw);
            else
                log_pos[i] = log_add(log_pos[i], lw);
        }
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = log_pos[i] - log_neg[i];
    return out;
}

// Exhaustive maximum-likelihood codeword by correlation.
std::vector<int> ml_oracle(const LinearCode& code,
                           const std::vector<double>& llr) {
    double best = -1e300;
    BitVector best_cw(code.n);
    for (std::size_t msg = 0; msg < (std::size_t{1} << code.k); ++msg) {
        BitVector m(code.k);
        for (std::size_t j = 0; j < code.k; ++j) m.set(j, (msg >> j) & 1);
        const BitVector cw = encode(code, m);
        double s = 0.0;
        for (std::size_t i = 0; i < code.n; ++i)
            s += llr[i] * (cw.get(i) ? -1.0 : 1.0);
        if (s > best) {
            best = s;
            best_cw = cw;
        }
    }
    std::vector<int> x(code.n);
    for (std::size_t i = 0; i < code.n; ++i) x[i] = best_cw.get(i) ? -1 : 1;
    return x;
}

LinearCode single_parity_check_3() {
    // K=2, one check row
    BitMatrix p(1, 2);
    p.set(0, 0, true);
    p.set(0, 1, true);
    return systematic_code(p, "spc-3");
}

LinearCode repetition_3() {
    BitMatrix p(2, 1);
    p.set(0, 0, true);
    p.set(1, 0, true);
    return systematic_code(p, "rep-3");
}

}  // namespace

TEST_CASE("bp on cycle-free graphs is exact") {
    Rng rng(61);
    SUBCASE("(3,2) single parity check, one iteration") {
        const LinearCode code = single_parity_check_3();
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<double> llr(3);
            for (auto& v : llr) v = 3.0 * rng.next_normal();
            const BpResult r = bp_decode(code.H, llr, 1, /*early_stop=*/false);
            const auto exact = exact_posterior_llr(code, llr);
            for (std::size_t i = 0; i < 3; ++i)
                CHECK(r.posterior_llr[i] ==
                      doctest::Approx(exact[i]).epsilon(1e-8));
        }
    }
    SUBCASE("(3,1) repetition, two iterations") {
        // the Tanner graph is a path of diameter 4: evidence from the far
        // variable needs two hops, so exactness holds from iteration 2
        const LinearCode code = repetition_3();
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<double> llr(3);
            for (auto& v : llr) v = 3.0 * rng.next_normal();
            const BpResult r = bp_decode(code.H, llr, 2, /*early_stop=*/false);
            const auto exact = exact_posterior_llr(code, llr);
            for (std::size_t i = 0; i < 3; ++i)
                CHECK(r.posterior_llr[i] ==
                      doctest::Approx(exact[i]).epsilon(1e-8));
        }
    }
}

TEST_CASE("bp basics") {
    const LinearCode code = hamming_7_4();
    SUBCASE("zero iterations return the channel llrs") {
        const std::vector<double> llr{1.0, -2.0, 0.5, 3.0, -0.1, 0.2, 1.5};
        const BpResult r = bp_decode(code.H, llr, 0);
        CHECK(r.posterior_llr == llr);
        CHECK(r.iterations == 0);
        CHECK_FALSE(r.converged);
    }
    SUBCASE("clean codeword converges immediately") {
        const BitVector cw = encode(code, BitVector::from_bits({1, 0, 1, 1}));
        std::vector<double> llr(code.n);
        for (std::size_t i = 0; i < code.n; ++i)
            llr[i] = cw.get(i) ? -4.0 : 4.0;
        const BpResult r = bp_decode(code.H, llr, 20);
        CHECK(r.converged);
        CHECK(r.iterations == 1);
        CHECK(r.hard_bits == cw);
    }
    SUBCASE("single weak erasure is repaired") {
        const BitVector cw = encode(code, BitVector::from_bits({0, 1, 1, 0}));
        std::vector<double> llr(code.n);
        for (std::size_t i = 0; i < code.n; ++i)
            llr[i] = cw.get(i) ? -4.0 : 4.0;
        llr[2] = cw.get(2) ? 0.2 : -0.2;  // flipped, low confidence
        const BpResult r = bp_decode(code.H, llr, 20);
        CHECK(r.converged);
        CHECK(r.hard_bits == cw);
    }
    SUBCASE("huge llrs stay finite under the clamp") {
        const std::vector<double> llr(code.n, 1e6);
        const BpResult r = bp_decode(code.H, llr, 10);
        for (double v : r.posterior_llr) CHECK(std::isfinite(v));
    }
    SUBCASE("length mismatch throws") {
        CHECK_THROWS_AS(bp_decode(code.H, std::vector<double>(6, 1.0), 5),
                        std::invalid_argument);
    }
}

TEST_CASE("osd") {
    const LinearCode code = hamming_7_4();
    const BisoChannel ch = BisoChannel::awgn(0.8);
    Rng rng(62);

    auto random_y = [&](BitVector* cw_out = nullptr) {
        BitVector m(code.k);
        for (std::size_t j = 0; j < code.k; ++j) m.set(j, rng.next_bit());
        const BitVector cw = encode(code, m);
        if (cw_out) *cw_out = cw;
        return transmit(bipolar(cw), ch.sample_noise(rng, code.n));
    };

    SUBCASE("outputs are always codewords") {
        for (int trial = 0; trial < 100; ++trial) {
            const auto x = osd_decode(code, random_y(), ch, 1);
            BitVector bits(code.n);
            for (std::size_t i = 0; i < code.n; ++i) bits.set(i, x[i] < 0);
            CHECK(syndrome(code, bits).is_zero());
        }
    }
    SUBCASE("order K is exhaustive, equals ML") {
        for (int trial = 0; trial < 300; ++trial) {
            const auto y = random_y();
            std::vector<double> llr(code.n);
            for (std::size_t i = 0; i < code.n; ++i) llr[i] = ch.llr(y[i]);
            CHECK(osd_decode(code, y, ch, static_cast<unsigned>(code.k)) ==
                  ml_oracle(code, llr));
        }
    }
    SUBCASE("correlation is monotone in the order") {
        for (int trial = 0; trial < 100; ++trial) {
            const auto y = random_y();
            std::vector<double> llr(code.n);
            for (std::size_t i = 0; i < code.n; ++i) llr[i] = ch.llr(y[i]);
            double prev = -1e300;
            for (unsigned order = 0; order <= 4; ++order) {
                const auto x = osd_decode(code, y, ch, order);
                double corr = 0.0;
                for (std::size_t i = 0; i < code.n; ++i) corr += llr[i] * x[i];
                CHECK(corr >= prev - 1e-9);
                prev = corr;
            }
        }
    }
    SUBCASE("order zero on a clean word returns it") {
        BitVector cw;
        BitVector m(code.k);
        for (std::size_t j = 0; j < code.k; ++j) m.set(j, rng.next_bit());
        cw = encode(code, m);
        std::vector<double> y(code.n);
        for (std::size_t i = 0; i < code.n; ++i)
            y[i] = cw.get(i) ? -1.0 : 1.0;
        const auto x = osd_decode(code, y, ch, 0);
        for (std::size_t i = 0; i < code.n; ++i)
            CHECK(x[i] == (cw.get(i) ? -1 : 1));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(osd_decode(code, std::vector<double>(6, 1.0), ch, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(osd_decode(code, std::vector<double>(7, 1.0), ch, 5),
                        std::invalid_argument);
    }
}
