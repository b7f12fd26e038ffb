// lcodec command-line tool: train noise estimators, run BER sweeps, verify
// the exact-oracle properties, and inspect code constructions.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcodec/decoder.hpp"
#include "lcodec/model_io.hpp"
#include "lcodec/neural_estimator.hpp"
#include "lcodec/sim.hpp"

using namespace lcodec;

namespace {

// Routes flat "key = value" config entries to whichever subcommand was named
// on the command line.  (The stock reader only applies sectioned keys, and
// only from the top-level app.)
class FlatConfig : public CLI::ConfigBase {
  public:
    explicit FlatConfig(const CLI::App* app) : app_(app) {}

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        auto items = CLI::ConfigBase::from_config(in);
        std::vector<std::string> parents;
        for (const CLI::App* sub : app_->get_subcommands())
            parents.push_back(sub->get_name());
        for (auto& item : items)
            if (item.parents.empty()) item.parents = parents;
        return items;
    }

  private:
    const CLI::App* app_;
};

const std::map<std::string, BchParams> kBchParams = {
    {"bch-15-11", {4, 1, 0}},  {"bch-15-7", {4, 2, 0}},
    {"bch-31-21", {5, 2, 0}},  {"bch-63-45", {6, 3, 0}},
    {"bch-63-36", {6, 5, 0}},  {"bch-127-64", {7, 10, 0}},
};

LinearCode resolve_code(const std::string& name, const std::string& alist) {
    if (!alist.empty()) {
        std::ifstream in(alist);
        if (!in) throw std::runtime_error("cannot open alist file: " + alist);
        return code_from_alist(in, alist);
    }
    return builtin_code(name);
}

// --------------------------------------------------------------------------
// info
// --------------------------------------------------------------------------

int cmd_info(const std::string& code_name, const std::string& alist) {
    const LinearCode code = resolve_code(code_name, alist);
    std::cout << "code: " << code.name << "\n";
    std::cout << "N=" << code.n << " K=" << code.k << " rate="
              << static_cast<double>(code.k) / code.n << "\n";
    if (code.is_bch()) {
        std::cout << "bch: m=" << code.bch_m << ", automorphism family size "
                  << code.bch_m * code.n << "\n";
        const auto it = kBchParams.find(code.name);
        if (it != kBchParams.end()) {
            const auto g = bch_generator_poly(it->second);
            std::cout << "g(x) coefficients (low to high):";
            for (int c : g) std::cout << " " << c;
            std::cout << "\n";
        }
    }
    std::cout << "parity layout: " << (code.parity_layout ? "systematic [P|I]"
                                                          : "general") << "\n";
    std::cout << "rank(G)=" << rank_mod2(code.G) << " (expect " << code.k
              << ")\n";
    std::cout << "rank(H)=" << rank_mod2(code.H) << " (expect "
              << code.n - code.k << ")\n";
    const std::size_t rank_b = rank_mod2(BitMatrix::stack(code.H, code.A));
    std::cout << "rank(B)=rank(stack(H,A))=" << rank_b << " (expect " << code.n
              << ")\n";
    if (rank_b != code.n || rank_mod2(code.G) != code.k) {
        std::cerr << "error: rank checks failed\n";
        return 1;
    }
    return 0;
}

// --------------------------------------------------------------------------
// oracle-check
// --------------------------------------------------------------------------

std::vector<int> codeword_map_oracle(const LinearCode& code,
                                     const BisoChannel& ch,
                                     const std::vector<double>& y) {
    const std::size_t n = code.n, k = code.k;
    std::vector<double> pos(n, 0.0), neg(n, 0.0);
    std::vector<double> logw;
    std::vector<BitVector> cws;
    double max_log = -1e300;
    for (std::size_t msg = 0; msg < (std::size_t{1} << k); ++msg) {
        BitVector m(k);
        for (std::size_t j = 0; j < k; ++j) m.set(j, (msg >> j) & 1);
        const BitVector cw = encode(code, m);
        double lw = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = ch.transition((cw.get(i) ? -1.0 : 1.0) * y[i]);
            lw += t > 0.0 ? std::log(t) : -745.0;
        }
        max_log = std::max(max_log, lw);
        logw.push_back(lw);
        cws.push_back(cw);
    }
    for (std::size_t c = 0; c < cws.size(); ++c) {
        const double w = std::exp(logw[c] - max_log);
        for (std::size_t i = 0; i < n; ++i)
            (cws[c].get(i) ? neg[i] : pos[i]) += w;
    }
    std::vector<int> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = neg[i] > pos[i] ? -1 : 1;
    return x;
}

int cmd_oracle_check(const std::string& code_name, std::uint64_t trials,
                     double ebn0_db, std::uint64_t seed) {
    const LinearCode code = builtin_code(code_name);
    if (code.k > 16) {
        std::cerr << "error: oracle-check requires K <= 16 (2^K enumeration); "
                  << code.name << " has K=" << code.k << "\n";
        return 1;
    }
    const double sigma =
        ebn0_to_sigma(ebn0_db, static_cast<double>(code.k) / code.n);
    const BisoChannel ch = BisoChannel::awgn(sigma);
    bool all_pass = true;
    auto report = [&](const std::string& name, bool pass) {
        std::cout << name << ": " << (pass ? "PASS" : "FAIL") << "\n";
        if (!pass) all_pass = false;
    };

    // Lemma 1 identities
    {
        const bool pass =
            code.A.multiply(code.G) == BitMatrix::identity(code.k) &&
            rank_mod2(BitMatrix::stack(code.H, code.A)) == code.n &&
            remove_redundant_rows(code.H).multiply(code.D) ==
                BitMatrix::identity(code.n - code.k);
        report("Lemma 1 (rank/inverse identities)", pass);
    }

    // Theorem 1 part 1: pipeline MAP == codeword-domain MAP
    {
        const BruteForceMapEstimator est(code, ch);
        Rng rng(seed, 10, 0);
        std::uint64_t mismatches = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            BitVector m(code.k);
            for (std::size_t j = 0; j < code.k; ++j) m.set(j, rng.next_bit());
            const std::vector<int> x = bipolar(encode(code, m));
            const std::vector<double> y =
                transmit(x, ch.sample_noise(rng, code.n));
            if (decode(code, est, y).x_hat_hard !=
                codeword_map_oracle(code, ch, y))
                ++mismatches;
        }
        report("MAP equivalence", mismatches == 0);
        if (mismatches)
            std::cerr << "  " << mismatches << "/" << trials
                      << " trials disagreed\n";
    }

    // Theorem 1 part 2: error pattern independent of the codeword
    {
        const BruteForceMapEstimator est(code, ch);
        Rng rng(seed, 11, 0);
        const std::uint64_t inv_trials = std::min<std::uint64_t>(trials, 1000);
        bool pass = true;
        for (std::uint64_t t = 0; t < inv_trials && pass; ++t) {
            const NoiseVector z = ch.sample_noise(rng, code.n);
            BitVector ref_err;
            for (int w = 0; w < 10; ++w) {
                BitVector m(code.k);
                for (std::size_t j = 0; j < code.k; ++j)
                    m.set(j, rng.next_bit());
                const BitVector cw = encode(code, m);
                const BitVector err =
                    decode(code, est, transmit(bipolar(cw), z)).x_hat_bits ^ cw;
                if (w == 0)
                    ref_err = err;
                else if (err != ref_err)
                    pass = false;
            }
        }
        report("Codeword invariance", pass);
    }

    if (code.is_bch() && code.parity_layout) {
        // automorphism family and inverse formula
        {
            bool pass = true;
            for (unsigned k = 0; k < code.bch_m && pass; ++k)
                for (std::size_t l = 0; l < code.n && pass; ++l) {
                    const BchPermutation p{static_cast<unsigned>(code.bch_m), k,
                                           l};
                    if (!is_automorphism(code, p)) pass = false;
                    const BchPermutation q = perm_inverse(p);
                    for (std::size_t i = 0; i < code.n; ++i)
                        if (q.map(p.map(i)) != i) pass = false;
                }
            report("Automorphism algebra", pass);
        }
        // permutation search vs brute force
        {
            Rng rng(seed, 12, 0);
            bool pass = true;
            for (int t = 0; t < 1000 && pass; ++t) {
                std::vector<double> rel(code.n);
                for (auto& r : rel) r = rng.next_double();
                const BchPermutation got = best_permutation(code, rel);
                BchPermutation want{static_cast<unsigned>(code.bch_m), 0, 0};
                double best = -1e300;
                for (unsigned k = 0; k < code.bch_m; ++k)
                    for (std::size_t l = 0; l < code.n; ++l) {
                        const BchPermutation p{
                            static_cast<unsigned>(code.bch_m), k, l};
                        double s = 0.0;
                        for (std::size_t i = 0; i < code.k; ++i)
                            s += rel[p.map(i)];
                        if (s > best) {
                            best = s;
                            want = p;
                        }
                    }
                if (!(got == want)) pass = false;
            }
            report("Permutation search", pass);
        }
    }

    return all_pass ? 0 : 1;
}

// --------------------------------------------------------------------------
// train
// --------------------------------------------------------------------------

int cmd_train(const std::string& code_name, const std::string& arch_name,
              const TrainConfig& cfg, std::size_t hidden_mult,
              std::size_t gru_hidden, std::size_t gru_levels,
              std::size_t gru_steps, const std::string& out_path) {
    const LinearCode code = builtin_code(code_name);
    NetArch arch;
    if (arch_name == "vanilla")
        arch = NetArch::Vanilla;
    else if (arch_name == "gru" || arch_name == "stacked-gru")
        arch = NetArch::StackedGru;
    else
        throw std::runtime_error("unknown architecture: " + arch_name +
                                 " (expected vanilla | gru)");

    std::cout << "training " << arch_name << " on " << code.name << " at "
              << cfg.ebn0_db << " dB, " << cfg.batch_count << " batches of "
              << cfg.batch_size << ", seed " << cfg.seed
              << (cfg.permute ? ", permutation pre-step" : "") << "\n";
    auto [est, result] = train_estimator(code, arch, cfg, hidden_mult,
                                         gru_hidden, gru_levels, gru_steps);
    const auto& trace = result.loss_trace;
    if (!trace.empty()) {
        double head = 0.0, tail = 0.0;
        const std::size_t window = std::min<std::size_t>(trace.size(), 100);
        for (std::size_t i = 0; i < window; ++i) {
            head += trace[i];
            tail += trace[trace.size() - 1 - i];
        }
        std::cout << "loss: first " << window << " batches mean "
                  << head / window << ", last " << window << " batches mean "
                  << tail / window << "\n";
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    save_model(est, out);
    if (!out) throw std::runtime_error("write failure: " + out_path);
    std::cout << "model written to " << out_path << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// simulate
// --------------------------------------------------------------------------

int cmd_simulate(const SweepConfig& cfg) {
    const LinearCode code = resolve_code(cfg.code_name, cfg.alist_path);
    const SimReport report = run_sweep(cfg);
    if (!cfg.output_path.empty()) {
        write_csv(report, cfg.output_path);
        std::cout << "csv written to " << cfg.output_path << "\n";
    }
    std::cout << std::left << std::setw(8) << "ebn0" << std::setw(24)
              << "decoder" << std::setw(10) << "words" << std::setw(12)
              << "ber" << std::setw(26) << "ber 95% wilson" << std::setw(12)
              << "wer" << std::setw(12) << "mse" << "elapsed_s\n";
    for (const auto& r : report.rows) {
        const auto [lo, hi] =
            wilson_interval(r.bit_errors, r.codewords * code.n);
        std::ostringstream ci;
        ci << "[" << std::setprecision(4) << lo << ", " << hi << "]";
        std::cout << std::left << std::setw(8) << r.ebn0_db << std::setw(24)
                  << r.decoder << std::setw(10) << r.codewords << std::setw(12)
                  << std::setprecision(5) << r.ber << std::setw(26) << ci.str()
                  << std::setw(12) << r.wer << std::setw(12) << r.mse
                  << std::setprecision(3) << r.elapsed_s << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear-code noise-estimation workbench"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<FlatConfig>(&app));
    app.set_config("--config", "",
                   "configuration file with key = value lines; command-line "
                   "flags take precedence");

    // ---- train ----
    auto* train = app.add_subcommand("train", "train a neural noise estimator");
    std::string tr_code = "bch-15-7", tr_arch = "vanilla", tr_out = "model.json";
    TrainConfig tcfg;
    std::size_t hidden_mult = 6, gru_hidden = 0, gru_levels = 4, gru_steps = 5;
    train->fallthrough();
    train->add_option("--code", tr_code, "built-in code name");
    train->add_option("--arch", tr_arch, "vanilla | gru");
    train->add_option("--ebn0", tcfg.ebn0_db, "training Eb/N0 in dB");
    train->add_option("--batch-size", tcfg.batch_size, "examples per batch");
    train->add_option("--batches", tcfg.batch_count, "number of batches");
    train->add_option("--lr", tcfg.learning_rate, "Adam learning rate");
    train->add_option("--gamma", tcfg.gamma, "loss discount factor");
    train->add_option("--seed", tcfg.seed, "training seed")
        ->envname("LCODEC_SEED");
    train->add_flag("--permute", tcfg.permute,
                    "apply the reliability permutation during training");
    train->add_option("--hidden-mult", hidden_mult,
                      "vanilla hidden width multiplier (width = mult*N)");
    train->add_option("--gru-hidden", gru_hidden,
                      "GRU hidden size (default 5N)");
    train->add_option("--gru-levels", gru_levels, "stacked GRU levels");
    train->add_option("--gru-steps", gru_steps, "GRU time steps");
    train->add_option("--out", tr_out, "model output path");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Monte Carlo BER/MSE sweep");
    SweepConfig scfg;
    sim->fallthrough();
    sim->add_option("--code", scfg.code_name, "built-in code name");
    sim->add_option("--alist", scfg.alist_path,
                    "parity-check matrix in alist format (overrides --code)");
    sim->add_option("--channel", scfg.channel, "awgn | bsc");
    sim->add_option("--ebn0-start", scfg.ebn0_start, "grid start, dB");
    sim->add_option("--ebn0-stop", scfg.ebn0_stop, "grid stop, dB");
    sim->add_option("--ebn0-step", scfg.ebn0_step, "grid step, dB");
    sim->add_option("--decoder", scfg.decoders,
                    "decoder spec (repeatable): identity | map-oracle | "
                    "mmse-oracle | bp[:iters] | osd-<order> | neural:<model>; "
                    "append +perm for the permutation pipeline");
    sim->add_option("--min-codewords", scfg.min_codewords,
                    "minimum codewords per point");
    sim->add_option("--min-bit-errors", scfg.min_bit_errors,
                    "minimum bit errors per point");
    sim->add_option("--max-codewords", scfg.max_codewords,
                    "hard cap per point (0 = min-codewords)");
    sim->add_option("--seed", scfg.seed, "simulation seed")
        ->envname("LCODEC_SEED");
    sim->add_option("--workers", scfg.workers, "worker thread count");
    bool unpaired = false;
    sim->add_flag("--unpaired", unpaired,
                  "fresh noise per decoder instead of paired noise");
    sim->add_option("--csv", scfg.output_path, "CSV output path");

    // ---- oracle-check ----
    auto* oracle = app.add_subcommand(
        "oracle-check", "verify the exact decoding and permutation properties");
    std::string oc_code = "hamming-7-4";
    std::uint64_t oc_trials = 100000, oc_seed = 1;
    double oc_ebn0 = 4.0;
    oracle->fallthrough();
    oracle->add_option("--code", oc_code, "built-in code name (K <= 16)");
    oracle->add_option("--trials", oc_trials, "MAP-equivalence trial count");
    oracle->add_option("--ebn0", oc_ebn0, "channel Eb/N0 in dB");
    oracle->add_option("--seed", oc_seed, "seed")->envname("LCODEC_SEED");

    // ---- info ----
    auto* info = app.add_subcommand("info", "print code parameters and checks");
    info->fallthrough();
    std::string info_code = "hamming-7-4", info_alist;
    info->add_option("--code", info_code, "built-in code name");
    info->add_option("--alist", info_alist, "alist path (overrides --code)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    }

    try {
        if (*train)
            return cmd_train(tr_code, tr_arch, tcfg, hidden_mult, gru_hidden,
                             gru_levels, gru_steps, tr_out);
        if (*sim) {
            scfg.paired = !unpaired;
            return cmd_simulate(scfg);
        }
        if (*oracle) return cmd_oracle_check(oc_code, oc_trials, oc_ebn0,
                                             oc_seed);
        if (*info) return cmd_info(info_code, info_alist);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
