#ifndef LCODEC_CHANNEL_HPP
#define LCODEC_CHANNEL_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lcodec/bitlinalg.hpp"
#include "lcodec/rng.hpp"

namespace lcodec {

// binary {0,1} <-> bipolar {+1,-1}: 0 -> +1, 1 -> -1
inline int bipolar(int bit) { return bit ? -1 : 1; }
inline int to_bit(int sign) { return sign < 0 ? 1 : 0; }

inline std::vector<int> bipolar(const BitVector& b) {
    std::vector<int> s(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) s[i] = bipolar(b.get(i) ? 1 : 0);
    return s;
}

inline BitVector to_bits(const std::vector<int>& signs) {
    BitVector b(signs.size());
    for (std::size_t i = 0; i < signs.size(); ++i) b.set(i, signs[i] < 0);
    return b;
}

inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// sigma for unit-energy BPSK at a given Eb/N0 and code rate
inline double ebn0_to_sigma(double ebn0_db, double rate) {
    if (rate <= 0.0 || rate > 1.0)
        throw std::invalid_argument("ebn0_to_sigma: rate must be in (0,1]");
    return std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0)));
}

// Multiplicative noise realization: y = x * z componentwise, with z
// distributed as Pr[Y | X=+1] and independent of x.
struct NoiseVector {
    std::vector<double> z;

    std::size_t size() const { return z.size(); }
    std::vector<double> abs() const {
        std::vector<double> a(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) a[i] = std::fabs(z[i]);
        return a;
    }
    // sign(0) = +1 everywhere in this codebase
    std::vector<int> signs() const {
        std::vector<int> s(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) s[i] = z[i] < 0.0 ? -1 : 1;
        return s;
    }
    BitVector bits() const { return to_bits(signs()); }
};

// Binary-input symmetric-output channel: AWGN with BPSK or BSC.
class BisoChannel {
  public:
    enum class Kind { AwgnBpsk, Bsc };

    static BisoChannel awgn(double sigma) {
        if (sigma <= 0.0)
            throw std::invalid_argument("awgn: sigma must be positive");
        return BisoChannel(Kind::AwgnBpsk, sigma);
    }
    static BisoChannel bsc(double p) {
        if (p <= 0.0 || p >= 0.5)
            throw std::invalid_argument("bsc: p must be in (0, 1/2)");
        return BisoChannel(Kind::Bsc, p);
    }

    Kind kind() const { return kind_; }
    double sigma() const { return param_; }
    double crossover() const { return param_; }

    // density/mass of Y given X=+1
    double transition(double y) const {
        if (kind_ == Kind::AwgnBpsk) {
            const double d = (y - 1.0) / param_;
            return std::exp(-0.5 * d * d) /
                   (param_ * 2.5066282746310005024);
        }
        if (y == 1.0) return 1.0 - param_;
        if (y == -1.0) return param_;
        return 0.0;
    }

    NoiseVector sample_noise(Rng& rng, std::size_t n) const {
        NoiseVector nv;
        nv.z.resize(n);
        if (kind_ == Kind::AwgnBpsk) {
            for (std::size_t i = 0; i < n; ++i)
                nv.z[i] = 1.0 + param_ * rng.next_normal();
        } else {
            for (std::size_t i = 0; i < n; ++i)
                nv.z[i] = rng.next_double() < param_ ? -1.0 : 1.0;
        }
        return nv;
    }

    double llr(double y) const {
        if (kind_ == Kind::AwgnBpsk) return 2.0 * y / (param_ * param_);
        if (y == 0.0) return 0.0;
        const double mag = std::log((1.0 - param_) / param_);
        return y > 0.0 ? mag : -mag;
    }

    // Pr[Z > 0 | |Z| = a], the per-bit posterior the coset oracles weight by
    double prob_sign_positive(double a) const {
        if (kind_ == Kind::AwgnBpsk) {
            // density(a|X=1) / (density(a|X=1)+density(-a|X=1))
            return 1.0 / (1.0 + std::exp(-2.0 * a / (param_ * param_)));
        }
        return 1.0 - param_;
    }

    // Adjusted reliability R(y) = I(X;Y | |Y|=|y|) in bits, in [0,1].
    double adjusted_reliability(double y) const {
        if (kind_ == Kind::AwgnBpsk) {
            const double q = 1.0 / (1.0 + std::exp(2.0 * std::fabs(y) /
                                                   (param_ * param_)));
            return 1.0 - binary_entropy(q);
        }
        return 1.0 - binary_entropy(param_);
    }

    std::vector<double> adjusted_reliability(const std::vector<double>& y) const {
        std::vector<double> r(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            r[i] = adjusted_reliability(y[i]);
        return r;
    }

  private:
    BisoChannel(Kind kind, double param) : kind_(kind), param_(param) {}
    Kind kind_;
    double param_;
};

inline std::vector<double> transmit(const std::vector<int>& x,
                                    const NoiseVector& noise) {
    if (x.size() != noise.size())
        throw std::invalid_argument("transmit: length mismatch");
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * noise.z[i];
    return y;
}

struct HardDecision {
    std::vector<int> signs;
    BitVector bits;
};

inline HardDecision hard_decision(const std::vector<double>& y) {
    HardDecision h;
    h.signs.resize(y.size());
    h.bits = BitVector(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        h.signs[i] = y[i] < 0.0 ? -1 : 1;
        h.bits.set(i, y[i] < 0.0);
    }
    return h;
}

}  // namespace lcodec

#endif
