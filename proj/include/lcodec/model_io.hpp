#ifndef LCODEC_MODEL_IO_HPP
#define LCODEC_MODEL_IO_HPP

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lcodec/neural_estimator.hpp"

namespace lcodec {

inline constexpr int kModelFormatVersion = 1;

inline void save_model(const NeuralEstimator& est, std::ostream& out) {
    nlohmann::json doc;
    doc["format_version"] = kModelFormatVersion;
    doc["n"] = est.block_length();
    doc["syndrome_len"] = est.syndrome_length();
    if (est.is_vanilla()) {
        const VanillaNet& net = est.vanilla();
        doc["arch"] = "vanilla";
        doc["hidden_width"] = net.hidden_width();
        doc["params"] = net.params();
    } else {
        const StackedGruNet& net = est.gru();
        doc["arch"] = "stacked_gru";
        doc["hidden_size"] = net.hidden_size();
        doc["levels"] = net.levels();
        doc["steps"] = net.steps();
        doc["params"] = net.params();
    }
    out << doc.dump(1) << "\n";
}

inline NeuralEstimator load_model(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("model: parse error: ") + e.what());
    }
    if (!doc.contains("format_version") ||
        doc["format_version"].get<int>() != kModelFormatVersion)
        throw std::runtime_error("model: unsupported format version");
    const std::string arch = doc.at("arch").get<std::string>();
    const std::size_t n = doc.at("n").get<std::size_t>();
    const std::size_t synd = doc.at("syndrome_len").get<std::size_t>();
    const auto params = doc.at("params").get<std::vector<double>>();
    if (arch == "vanilla") {
        VanillaNet net(n, synd, doc.at("hidden_width").get<std::size_t>());
        if (params.size() != net.params().size())
            throw std::runtime_error("model: parameter count mismatch");
        net.params() = params;
        return NeuralEstimator(std::move(net));
    }
    if (arch == "stacked_gru") {
        StackedGruNet net(n, synd, doc.at("hidden_size").get<std::size_t>(),
                          doc.at("levels").get<std::size_t>(),
                          doc.at("steps").get<std::size_t>());
        if (params.size() != net.params().size())
            throw std::runtime_error("model: parameter count mismatch");
        net.params() = params;
        return NeuralEstimator(std::move(net));
    }
    throw std::runtime_error("model: unknown architecture \"" + arch + "\"");
}

// Dimension guard for using a stored model with a particular code.
inline void check_model_code(const NeuralEstimator& est,
                             const LinearCode& code) {
    if (est.block_length() != code.n ||
        est.syndrome_length() != code.H.rows())
        throw std::runtime_error(
            "model: dimensions do not match the requested code (model " +
            std::to_string(est.block_length()) + "/" +
            std::to_string(est.syndrome_length()) + ", code " +
            std::to_string(code.n) + "/" + std::to_string(code.H.rows()) + ")");
}

}  // namespace lcodec

#endif
