#include "qtrack/config.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qtrack/csv.hpp"
#include "qtrack/errors.hpp"

namespace qtrack {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) {
    throw ConfigError("config schema: " + what);
}

double require_number(const json& j, const char* key) {
    if (!j.contains(key)) schema_error(std::string("missing '") + key + "'");
    if (!j[key].is_number())
        schema_error(std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

ParamVec parse_pair(const json& j, const char* key) {
    const json& v = j[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number())
        schema_error(std::string("'") + key +
                     "' must be an array of two numbers");
    return ParamVec{v[0].get<double>(), v[1].get<double>()};
}

std::vector<double> parse_number_list(const json& v, const char* what) {
    if (!v.is_array()) schema_error(std::string(what) + " must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number())
            schema_error(std::string(what) + " must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

QuantizerSpec parse_quantizer(const json& j) {
    if (!j.is_object()) schema_error("'quantizer' must be an object");
    if (!j.contains("thresholds") || !j.contains("weights"))
        schema_error("'quantizer' needs 'thresholds' and 'weights'");
    QuantizerSpec spec;
    spec.thresholds = parse_number_list(j["thresholds"], "thresholds");
    spec.weights = parse_number_list(j["weights"], "weights");
    return spec;
}

NoiseModel parse_noise(const json& j) {
    if (!j.is_object()) schema_error("'noise' must be an object");
    std::string kind = j.value("kind", std::string("gaussian"));
    if (kind == "zero") return NoiseModel::zero();
    double scale = j.contains("scale") ? require_number(j, "scale") : 1.0;
    if (kind == "gaussian") return NoiseModel::gaussian(scale);
    if (kind == "logistic") return NoiseModel::logistic(scale);
    if (kind == "uniform") return NoiseModel::uniform(scale);
    schema_error("unknown noise kind '" + kind + "'");
}

OmegaSet parse_omega(const json& j) {
    if (!j.is_object()) schema_error("'omega' must be an object");
    std::string kind = j.value("kind", std::string("box"));
    if (kind == "box") {
        // "first"/"second" are the per-coordinate [lo, hi] intervals
        ParamVec iv1 = parse_pair(j, "first");
        ParamVec iv2 = parse_pair(j, "second");
        return OmegaSet::box(iv1.c1, iv1.c2, iv2.c1, iv2.c2);
    }
    if (kind == "signed_box") {
        int sign = 1;
        if (j.contains("sign")) {
            if (!j["sign"].is_number_integer())
                schema_error("'sign' must be an integer");
            sign = j["sign"].get<int>();
        }
        return OmegaSet::signed_box(sign, require_number(j, "theta_lower"),
                                    require_number(j, "m_bar"),
                                    require_number(j, "theta_bar"));
    }
    schema_error("unknown omega kind '" + kind + "'");
}

ReferenceSpec parse_reference(const json& j) {
    if (!j.is_object()) schema_error("'reference' must be an object");
    std::string kind = j.value("kind", std::string("alternating"));
    if (kind == "alternating") {
        if (j.contains("epsilon"))
            return ReferenceSpec::alternating_with_eps(
                parse_number_list(j["epsilon"], "epsilon"));
        return ReferenceSpec::alternating();
    }
    if (kind == "table") {
        if (!j.contains("values")) schema_error("'table' needs 'values'");
        return ReferenceSpec::table(
            parse_number_list(j["values"], "values"));
    }
    schema_error("unknown reference kind '" + kind + "'");
}

} // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    if (!j.is_object()) schema_error("top level must be an object");

    for (const char* key : {"theta", "quantizer", "reference"})
        if (!j.contains(key))
            schema_error(std::string("missing required '") + key + "'");

    ExperimentConfig cfg;
    cfg.theta = parse_pair(j, "theta");
    cfg.quantizer = parse_quantizer(j["quantizer"]);
    cfg.reference = parse_reference(j["reference"]);
    if (j.contains("noise")) cfg.noise = parse_noise(j["noise"]);
    if (j.contains("omega")) cfg.omega = parse_omega(j["omega"]);
    if (j.contains("theta_hat0")) cfg.theta_hat0 = parse_pair(j, "theta_hat0");
    if (j.contains("epsilon_guard"))
        cfg.epsilon_guard = require_number(j, "epsilon_guard");
    if (j.contains("horizon"))
        cfg.horizon = static_cast<std::int64_t>(require_number(j, "horizon"));
    if (j.contains("trials"))
        cfg.trials = static_cast<std::int64_t>(require_number(j, "trials"));
    if (j.contains("master_seed")) {
        if (!j["master_seed"].is_number_integer() &&
            !j["master_seed"].is_number_unsigned())
            schema_error("'master_seed' must be an integer");
        cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    }
    if (j.contains("checkpoints")) {
        for (double v : parse_number_list(j["checkpoints"], "checkpoints"))
            cfg.checkpoints.push_back(static_cast<std::int64_t>(v));
    }
    if (j.contains("h")) cfg.h = static_cast<int>(require_number(j, "h"));
    if (j.contains("mu")) cfg.mu = require_number(j, "mu");
    return cfg;
}

LoadedConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    LoadedConfig lc;
    lc.config = parse_config_json(text);
    char hex[32];
    std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(text)));
    lc.checksum = hex;
    return lc;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void write_run_manifest(const std::filesystem::path& out_dir,
                        const std::string& config_checksum,
                        std::uint64_t master_seed,
                        const std::vector<std::string>& outputs) {
    json j;
    j["tool_version"] = kToolVersion;
    j["config_checksum"] = config_checksum;
    j["master_seed"] = master_seed;
    j["outputs"] = outputs;

    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    j["created_utc"] = stamp;

    write_text_atomic(out_dir / "run_manifest.json", j.dump(2) + "\n");
}

} // namespace qtrack
