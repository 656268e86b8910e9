#pragma once

// Experiment configuration: a flat key = value text file with '#' comments.
// Parsing is strict (unknown keys are errors, with line numbers) and
// serialization round-trips losslessly.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"

namespace jonesmc {

enum class ExperimentKind { simulate, compare_h, p2, haar, independence };

inline std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::simulate: return "simulate";
        case ExperimentKind::compare_h: return "compare-h";
        case ExperimentKind::p2: return "p2";
        case ExperimentKind::haar: return "haar";
        case ExperimentKind::independence: return "independence";
    }
    return "?";
}

inline ExperimentKind experiment_from_string(const std::string& s) {
    if (s == "simulate") return ExperimentKind::simulate;
    if (s == "compare-h") return ExperimentKind::compare_h;
    if (s == "p2") return ExperimentKind::p2;
    if (s == "haar") return ExperimentKind::haar;
    if (s == "independence") return ExperimentKind::independence;
    throw std::runtime_error("unknown experiment kind '" + s + "'");
}

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::simulate;
    uint64_t seed = 1;
    size_t samples = 10000;
    unsigned threads = 0; // 0 = hardware concurrency

    TwistDistribution twist = TwistDistribution::two_point(0.1);
    LengthDistribution length = LengthDistribution::exponential(1.0);

    double beta = 1.0;
    double beta2 = 2.0;                  // independence partner frequency
    std::vector<double> beta_list;       // compare-h sweep (defaults to {beta})
    std::vector<size_t> n_list;          // simulate / p2 checkpoints
    double z = 10000.0;                  // compare-h MC integration length
    std::string spectrum_path;           // p2 spectrum CSV; empty = built-in flat
    std::string out = "out.csv";

    FiberModel model() const { return {twist, length, seed}; }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& v, const std::string& key, size_t line) {
    std::istringstream is(v);
    T out;
    if (!(is >> out) || !(is >> std::ws).eof())
        throw std::runtime_error("line " + std::to_string(line) + ": bad value '" + v +
                                 "' for key '" + key + "'");
    return out;
}

template <class T>
std::vector<T> parse_list(const std::string& v, const std::string& key, size_t line) {
    std::vector<T> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_number<T>(item, key, line));
    }
    if (out.empty())
        throw std::runtime_error("line " + std::to_string(line) + ": empty list for '" + key + "'");
    return out;
}

} // namespace detail

/// Parse a config from text.  Every physical quantity is in the units noted
/// by serialize_config (rad/length for twist rates and beta, length units
/// for section lengths and z).
inline ExperimentConfig parse_config(std::istream& in) {
    std::map<std::string, std::pair<std::string, size_t>> kv;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (kv.count(key))
            throw std::runtime_error("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = {val, lineno};
    }

    ExperimentConfig cfg;
    auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, size_t>> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        auto v = it->second;
        kv.erase(it);
        return v;
    };
    auto need = [&](const std::string& key) {
        auto v = take(key);
        if (!v) throw std::runtime_error("missing required key '" + key + "'");
        return *v;
    };

    {
        auto [v, ln] = need("experiment");
        (void)ln;
        cfg.experiment = experiment_from_string(v);
    }
    if (auto v = take("seed")) cfg.seed = detail::parse_number<uint64_t>(v->first, "seed", v->second);
    if (auto v = take("samples"))
        cfg.samples = detail::parse_number<size_t>(v->first, "samples", v->second);

    {
        auto [kindv, kl] = need("twist.kind");
        if (kindv == "two_point") {
            auto [t0, l0] = need("twist.theta0");
            double mean = 0.0;
            if (auto m = take("twist.mean"))
                mean = detail::parse_number<double>(m->first, "twist.mean", m->second);
            cfg.twist = TwistDistribution::two_point(
                detail::parse_number<double>(t0, "twist.theta0", l0), mean);
        } else if (kindv == "uniform") {
            auto [lo, l1] = need("twist.min");
            auto [hi, l2] = need("twist.max");
            cfg.twist = TwistDistribution::uniform(detail::parse_number<double>(lo, "twist.min", l1),
                                                   detail::parse_number<double>(hi, "twist.max", l2));
        } else if (kindv == "gaussian") {
            auto [mean, l1] = need("twist.mean");
            auto [sig, l2] = need("twist.sigma");
            cfg.twist =
                TwistDistribution::gaussian(detail::parse_number<double>(mean, "twist.mean", l1),
                                            detail::parse_number<double>(sig, "twist.sigma", l2));
        } else {
            throw std::runtime_error("line " + std::to_string(kl) + ": unknown twist.kind '" +
                                     kindv + "'");
        }
    }
    {
        auto [kindv, kl] = need("length.kind");
        if (kindv == "exponential") {
            auto [m, l1] = need("length.mean");
            cfg.length =
                LengthDistribution::exponential(detail::parse_number<double>(m, "length.mean", l1));
        } else if (kindv == "fixed") {
            auto [m, l1] = need("length.value");
            cfg.length = LengthDistribution::fixed(detail::parse_number<double>(m, "length.value", l1));
        } else if (kindv == "uniform") {
            auto [lo, l1] = need("length.min");
            auto [hi, l2] = need("length.max");
            cfg.length =
                LengthDistribution::uniform(detail::parse_number<double>(lo, "length.min", l1),
                                            detail::parse_number<double>(hi, "length.max", l2));
        } else {
            throw std::runtime_error("line " + std::to_string(kl) + ": unknown length.kind '" +
                                     kindv + "'");
        }
    }

    if (auto v = take("beta")) cfg.beta = detail::parse_number<double>(v->first, "beta", v->second);
    if (auto v = take("beta2")) cfg.beta2 = detail::parse_number<double>(v->first, "beta2", v->second);
    if (auto v = take("beta_list"))
        cfg.beta_list = detail::parse_list<double>(v->first, "beta_list", v->second);
    if (auto v = take("n_list"))
        cfg.n_list = detail::parse_list<size_t>(v->first, "n_list", v->second);
    if (auto v = take("z")) cfg.z = detail::parse_number<double>(v->first, "z", v->second);
    if (auto v = take("spectrum")) cfg.spectrum_path = v->first;
    if (auto v = take("out")) cfg.out = v->first;

    if (!kv.empty()) {
        const auto& [key, v] = *kv.begin();
        throw std::runtime_error("line " + std::to_string(v.second) + ": unknown key '" + key + "'");
    }
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    return parse_config(in);
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "experiment = " << to_string(cfg.experiment) << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "samples = " << cfg.samples << "\n";
    os << "twist.kind = " << cfg.twist.name() << "\n";
    switch (cfg.twist.kind) {
        case TwistDistribution::Kind::two_point:
            os << "twist.theta0 = " << cfg.twist.theta0 << "   # rad/length\n";
            if (cfg.twist.mean != 0.0) os << "twist.mean = " << cfg.twist.mean << "   # rad/length\n";
            break;
        case TwistDistribution::Kind::uniform:
            os << "twist.min = " << cfg.twist.lo << "   # rad/length\n";
            os << "twist.max = " << cfg.twist.hi << "   # rad/length\n";
            break;
        case TwistDistribution::Kind::gaussian:
            os << "twist.mean = " << cfg.twist.mean << "   # rad/length\n";
            os << "twist.sigma = " << cfg.twist.sigma << "   # rad/length\n";
            break;
    }
    os << "length.kind = " << cfg.length.name() << "\n";
    switch (cfg.length.kind) {
        case LengthDistribution::Kind::exponential:
            os << "length.mean = " << cfg.length.mean << "   # length units\n";
            break;
        case LengthDistribution::Kind::fixed:
            os << "length.value = " << cfg.length.value << "   # length units\n";
            break;
        case LengthDistribution::Kind::uniform:
            os << "length.min = " << cfg.length.lo << "   # length units\n";
            os << "length.max = " << cfg.length.hi << "   # length units\n";
            break;
    }
    os << "beta = " << cfg.beta << "   # rad/length\n";
    os << "beta2 = " << cfg.beta2 << "   # rad/length\n";
    if (!cfg.beta_list.empty()) {
        os << "beta_list = ";
        for (size_t i = 0; i < cfg.beta_list.size(); ++i)
            os << (i ? "," : "") << cfg.beta_list[i];
        os << "   # rad/length\n";
    }
    if (!cfg.n_list.empty()) {
        os << "n_list = ";
        for (size_t i = 0; i < cfg.n_list.size(); ++i) os << (i ? "," : "") << cfg.n_list[i];
        os << "\n";
    }
    os << "z = " << cfg.z << "   # length units\n";
    if (!cfg.spectrum_path.empty()) os << "spectrum = " << cfg.spectrum_path << "\n";
    os << "out = " << cfg.out << "\n";
    return os.str();
}

/// FNV-1a over the canonical serialization; stamped into CSV metadata.
inline uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string s = serialize_config(cfg);
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace jonesmc
