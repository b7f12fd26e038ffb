#ifndef LCODEC_SIM_HPP
#define LCODEC_SIM_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <locale>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lcodec/bp.hpp"
#include "lcodec/channel.hpp"
#include "lcodec/code.hpp"
#include "lcodec/decoder.hpp"
#include "lcodec/estimator.hpp"
#include "lcodec/model_io.hpp"
#include "lcodec/neural_estimator.hpp"
#include "lcodec/osd.hpp"

namespace lcodec {

// ---------------------------------------------------------------------------
// Decoder specs
// ---------------------------------------------------------------------------

// Accepted forms: identity | map-oracle | mmse-oracle | bp | bp:<iters> |
// osd-<order> | neural:<model path>; an optional "+perm" suffix routes the
// decode through the automorphism permutation pipeline.
struct DecoderSpec {
    enum class Kind { Identity, MapOracle, MmseOracle, Bp, Osd, Neural };
    Kind kind = Kind::Identity;
    bool permute = false;
    unsigned osd_order = 2;
    std::size_t bp_iters = 5;
    std::string model_path;
    std::string label;
};

inline DecoderSpec parse_decoder_spec(std::string text) {
    DecoderSpec spec;
    spec.label = text;
    const std::string perm_suffix = "+perm";
    if (text.size() > perm_suffix.size() &&
        text.compare(text.size() - perm_suffix.size(), perm_suffix.size(),
                     perm_suffix) == 0) {
        spec.permute = true;
        text = text.substr(0, text.size() - perm_suffix.size());
    }
    if (text == "identity") {
        spec.kind = DecoderSpec::Kind::Identity;
    } else if (text == "map-oracle") {
        spec.kind = DecoderSpec::Kind::MapOracle;
    } else if (text == "mmse-oracle") {
        spec.kind = DecoderSpec::Kind::MmseOracle;
    } else if (text == "bp" || text.rfind("bp:", 0) == 0) {
        spec.kind = DecoderSpec::Kind::Bp;
        if (text.size() > 3) spec.bp_iters = std::stoul(text.substr(3));
    } else if (text.rfind("osd-", 0) == 0) {
        spec.kind = DecoderSpec::Kind::Osd;
        spec.osd_order = static_cast<unsigned>(std::stoul(text.substr(4)));
    } else if (text.rfind("neural:", 0) == 0) {
        spec.kind = DecoderSpec::Kind::Neural;
        spec.model_path = text.substr(7);
    } else {
        throw std::invalid_argument("unknown decoder spec: " + text);
    }
    return spec;
}

struct DecodedWord {
    std::vector<int> hard;     // bipolar
    std::vector<double> soft;  // pre-sign values
};

using DecodeFn = std::function<DecodedWord(const std::vector<double>&)>;

// Instantiates a decoder for one (code, channel) operating point.
inline DecodeFn make_decoder(const DecoderSpec& spec, const LinearCode& code,
                             const BisoChannel& ch) {
    auto run_pipeline = [&code, &ch, permute = spec.permute](
                            const NoiseEstimator& est,
                            const std::vector<double>& y) {
        const DecodeResult r = permute
                                   ? permuted_decode(code, est, ch, y)
                                   : decode(code, est, y);
        return DecodedWord{r.x_hat_hard, r.x_hat_soft};
    };
    switch (spec.kind) {
        case DecoderSpec::Kind::Identity: {
            auto est = std::make_shared<IdentityEstimator>(code.n, code.H.rows());
            return [=](const std::vector<double>& y) {
                return run_pipeline(*est, y);
            };
        }
        case DecoderSpec::Kind::MapOracle: {
            auto est = std::make_shared<BruteForceMapEstimator>(code, ch);
            return [=](const std::vector<double>& y) {
                return run_pipeline(*est, y);
            };
        }
        case DecoderSpec::Kind::MmseOracle: {
            auto est = std::make_shared<BruteForceMmseEstimator>(code, ch);
            return [=](const std::vector<double>& y) {
                return run_pipeline(*est, y);
            };
        }
        case DecoderSpec::Kind::Neural: {
            std::ifstream in(spec.model_path);
            if (!in)
                throw std::runtime_error("cannot open model file: " +
                                         spec.model_path);
            auto est = std::make_shared<NeuralEstimator>(load_model(in));
            check_model_code(*est, code);
            return [=](const std::vector<double>& y) {
                return run_pipeline(*est, y);
            };
        }
        case DecoderSpec::Kind::Bp: {
            const BitMatrix h = code.H;
            const std::size_t iters = spec.bp_iters;
            return [&ch, h, iters](const std::vector<double>& y) {
                std::vector<double> llr(y.size());
                for (std::size_t i = 0; i < y.size(); ++i) llr[i] = ch.llr(y[i]);
                const BpResult r = bp_decode(h, llr, iters);
                DecodedWord w;
                w.hard.resize(y.size());
                w.soft.resize(y.size());
                for (std::size_t i = 0; i < y.size(); ++i) {
                    w.hard[i] = r.hard_bits.get(i) ? -1 : 1;
                    w.soft[i] = std::tanh(0.5 * r.posterior_llr[i]);
                }
                return w;
            };
        }
        case DecoderSpec::Kind::Osd: {
            const unsigned order = spec.osd_order;
            return [&code, &ch, order](const std::vector<double>& y) {
                DecodedWord w;
                w.hard = osd_decode(code, y, ch, order);
                w.soft.assign(w.hard.begin(), w.hard.end());
                return w;
            };
        }
    }
    throw std::logic_error("unreachable decoder kind");
}

// ---------------------------------------------------------------------------
// Sweep configuration and report
// ---------------------------------------------------------------------------

struct SweepConfig {
    std::string code_name = "hamming-7-4";
    std::string alist_path;        // overrides code_name when set
    std::string channel = "awgn";  // awgn | bsc
    double ebn0_start = 1.0, ebn0_stop = 6.0, ebn0_step = 0.5;
    std::vector<std::string> decoders{"map-oracle"};
    std::uint64_t min_codewords = 1000;
    std::uint64_t min_bit_errors = 0;
    std::uint64_t max_codewords = 0;  // 0: equal to min_codewords
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    bool paired = true;  // same noise realization across decoders
    std::string output_path;
};

struct SimReportRow {
    double ebn0_db = 0.0;
    std::string decoder;
    std::uint64_t codewords = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t word_errors = 0;
    double ber = 0.0;
    double wer = 0.0;
    double mse = 0.0;
    std::uint64_t seed = 0;
    double elapsed_s = 0.0;
};

struct SimReport {
    std::vector<SimReportRow> rows;
};

namespace detail {

struct BatchTally {
    std::uint64_t codewords = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t word_errors = 0;
    double mse_sum = 0.0;  // summed over codewords, already divided by N
    bool done = false;
};

inline constexpr std::size_t kSimBatchSize = 100;

}  // namespace detail

// Monte Carlo sweep.  Trials are organized in fixed-size batches, each with
// its own RNG stream keyed by (seed, point, batch); workers consume batches
// from a shared counter and tallies are merged in batch-index order, so the
// report is identical for any worker count.
inline SimReport run_sweep(const SweepConfig& cfg) {
    if (cfg.ebn0_step <= 0.0)
        throw std::invalid_argument("run_sweep: step must be positive");
    if (cfg.min_codewords < 1)
        throw std::invalid_argument("run_sweep: min codewords must be >= 1");
    const LinearCode code = [&] {
        if (cfg.alist_path.empty()) return builtin_code(cfg.code_name);
        std::ifstream in(cfg.alist_path);
        if (!in)
            throw std::runtime_error("cannot open alist file: " +
                                     cfg.alist_path);
        return code_from_alist(in, cfg.alist_path);
    }();
    const double rate = static_cast<double>(code.k) / code.n;
    const std::uint64_t cap =
        cfg.max_codewords ? cfg.max_codewords : cfg.min_codewords;
    const std::size_t workers = cfg.workers ? cfg.workers : 1;

    std::vector<DecoderSpec> specs;
    for (const auto& d : cfg.decoders) specs.push_back(parse_decoder_spec(d));
    if (specs.empty()) throw std::invalid_argument("run_sweep: no decoders");

    SimReport report;
    std::size_t point_idx = 0;
    for (double ebn0 = cfg.ebn0_start; ebn0 <= cfg.ebn0_stop + 1e-9;
         ebn0 += cfg.ebn0_step, ++point_idx) {
        BisoChannel ch = [&] {
            const double sigma = ebn0_to_sigma(ebn0, rate);
            if (cfg.channel == "awgn") return BisoChannel::awgn(sigma);
            if (cfg.channel == "bsc") {
                // hard-decision equivalent crossover for the same Eb/N0
                const double p = 0.5 * std::erfc(1.0 / (sigma * std::sqrt(2.0)));
                return BisoChannel::bsc(std::max(p, 1e-12));
            }
            throw std::invalid_argument("unknown channel: " + cfg.channel);
        }();

        std::vector<DecodeFn> decoders;
        for (const auto& s : specs) decoders.push_back(make_decoder(s, code, ch));

        const std::uint64_t total_batches =
            (cap + detail::kSimBatchSize - 1) / detail::kSimBatchSize;
        // [batch][decoder]
        std::vector<std::vector<detail::BatchTally>> tallies(
            total_batches, std::vector<detail::BatchTally>(specs.size()));

        const auto t0 = std::chrono::steady_clock::now();

        auto run_batch = [&](std::uint64_t batch) {
            Rng rng(cfg.seed, 1000 + point_idx, batch);
            const std::uint64_t first = batch * detail::kSimBatchSize;
            const std::uint64_t count =
                std::min<std::uint64_t>(detail::kSimBatchSize, cap - first);
            auto& out = tallies[batch];
            for (std::uint64_t trial = 0; trial < count; ++trial) {
                BitVector msg(code.k);
                for (std::size_t j = 0; j < code.k; ++j)
                    msg.set(j, rng.next_bit());
                const BitVector xb = encode(code, msg);
                const std::vector<int> x = bipolar(xb);
                const NoiseVector noise = ch.sample_noise(rng, code.n);
                const std::vector<double> y = transmit(x, noise);
                for (std::size_t d = 0; d < decoders.size(); ++d) {
                    std::vector<double> yd = y;
                    if (!cfg.paired && d > 0) {
                        // unpaired mode: fresh noise per decoder
                        const NoiseVector extra = ch.sample_noise(rng, code.n);
                        yd = transmit(x, extra);
                    }
                    const DecodedWord w = decoders[d](yd);
                    std::uint64_t errs = 0;
                    double se = 0.0;
                    for (std::size_t i = 0; i < code.n; ++i) {
                        if (w.hard[i] != x[i]) ++errs;
                        const double diff = w.soft[i] - x[i];
                        se += diff * diff;
                    }
                    out[d].codewords += 1;
                    out[d].bit_errors += errs;
                    out[d].word_errors += errs ? 1 : 0;
                    out[d].mse_sum += se / static_cast<double>(code.n);
                }
            }
            for (auto& t : out) t.done = true;
        };

        // waves of batches; the stopping rule is evaluated on batch-order
        // cumulative tallies only, never on completion order
        std::uint64_t next_batch = 0;
        std::uint64_t stop_after = total_batches;
        while (next_batch < stop_after) {
            const std::uint64_t wave_end = std::min<std::uint64_t>(
                stop_after, next_batch + workers * 4);
            std::atomic<std::uint64_t> counter{next_batch};
            auto worker_fn = [&] {
                for (;;) {
                    const std::uint64_t b = counter.fetch_add(1);
                    if (b >= wave_end) break;
                    run_batch(b);
                }
            };
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w + 1 < workers; ++w)
                pool.emplace_back(worker_fn);
            worker_fn();
            for (auto& th : pool) th.join();
            next_batch = wave_end;

            // check the stopping rule on the deterministic prefix: stop at
            // the first batch boundary where every decoder has met both
            // minimums (or the cap)
            std::vector<std::uint64_t> cw(specs.size(), 0), be(specs.size(), 0);
            for (std::uint64_t b = 0; b < next_batch; ++b) {
                for (std::size_t d = 0; d < specs.size(); ++d) {
                    cw[d] += tallies[b][d].codewords;
                    be[d] += tallies[b][d].bit_errors;
                }
                bool all_met = true;
                for (std::size_t d = 0; d < specs.size(); ++d)
                    if (cw[d] < cfg.min_codewords || be[d] < cfg.min_bit_errors)
                        all_met = false;
                if (all_met) {
                    stop_after = std::min<std::uint64_t>(stop_after, b + 1);
                    break;
                }
            }
        }

        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();

        for (std::size_t d = 0; d < specs.size(); ++d) {
            SimReportRow row;
            row.ebn0_db = ebn0;
            row.decoder = specs[d].label;
            for (std::uint64_t b = 0; b < stop_after; ++b) {
                row.codewords += tallies[b][d].codewords;
                row.bit_errors += tallies[b][d].bit_errors;
                row.word_errors += tallies[b][d].word_errors;
                row.mse += tallies[b][d].mse_sum;
            }
            row.ber = static_cast<double>(row.bit_errors) /
                      (static_cast<double>(row.codewords) * code.n);
            row.wer = static_cast<double>(row.word_errors) /
                      static_cast<double>(row.codewords);
            row.mse /= static_cast<double>(row.codewords);
            row.seed = cfg.seed;
            row.elapsed_s = elapsed;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// CSV and terminal output
// ---------------------------------------------------------------------------

// The elapsed_s column is written as 0 so that identical (config, seed)
// runs emit byte-identical files; measured wall time lives in the in-memory
// report and the terminal summary.
inline void write_csv(const SimReport& report, std::ostream& out) {
    out << "ebn0_db,decoder,codewords,bit_errors,word_errors,ber,wer,mse,"
           "seed,elapsed_s\n";
    for (const auto& r : report.rows) {
        std::ostringstream line;
        line.imbue(std::locale::classic());
        line << std::setprecision(17) << r.ebn0_db << "," << r.decoder << ","
             << r.codewords << "," << r.bit_errors << "," << r.word_errors
             << "," << r.ber << "," << r.wer << "," << r.mse << "," << r.seed
             << "," << 0 << "\n";
        out << line.str();
    }
}

inline void write_csv(const SimReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_csv(report, out);
    if (!out) throw std::runtime_error("write failure: " + path);
}

// 95% Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::uint64_t successes,
                                                 std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace lcodec

#endif
