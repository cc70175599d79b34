#include "graphonlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphonlab {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const char* where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) {
            throw std::invalid_argument(std::string("config: unknown field '") + key + "' in " +
                                        where);
        }
    }
}

AffineInU parse_affine(const json& j, const char* where) {
    if (!j.is_object()) throw std::invalid_argument(std::string("config: ") + where + " must be an object");
    reject_unknown(j, {"intercept", "slope"}, where);
    AffineInU a;
    a.intercept = j.value("intercept", 0.0);
    a.slope = j.value("slope", 0.0);
    return a;
}

json affine_to_json(const AffineInU& a) {
    return json{{"intercept", a.intercept}, {"slope", a.slope}};
}

Graphon graphon_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw std::invalid_argument("config: graphon spec needs a 'kind'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    auto matrix_values = [&](int& n_out) {
        const auto& rows = j.at("values");
        if (!rows.is_array() || rows.empty()) {
            throw std::invalid_argument("config: graphon 'values' must be a matrix");
        }
        n_out = static_cast<int>(rows.size());
        std::vector<double> flat;
        flat.reserve(rows.size() * rows.size());
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() != rows.size()) {
                throw std::invalid_argument("config: graphon 'values' must be square");
            }
            for (const auto& x : row) flat.push_back(x.get<double>());
        }
        return flat;
    };
    if (kind == "constant") {
        reject_unknown(j, {"kind", "c"}, "graphon");
        return Graphon::constant(j.at("c").get<double>());
    }
    if (kind == "product") {
        reject_unknown(j, {"kind"}, "graphon");
        return Graphon::product();
    }
    if (kind == "min") {
        reject_unknown(j, {"kind"}, "graphon");
        return Graphon::min_uv();
    }
    if (kind == "exp") {
        reject_unknown(j, {"kind", "alpha"}, "graphon");
        return Graphon::exp_kernel(j.at("alpha").get<double>());
    }
    if (kind == "step") {
        reject_unknown(j, {"kind", "boundaries", "values"}, "graphon");
        int n = 0;
        auto flat = matrix_values(n);
        return Graphon::step(j.at("boundaries").get<std::vector<double>>(), std::move(flat));
    }
    if (kind == "sampled") {
        reject_unknown(j, {"kind", "values"}, "graphon");
        int n = 0;
        auto flat = matrix_values(n);
        return Graphon::sampled(n, std::move(flat));
    }
    throw std::invalid_argument("config: unknown graphon kind '" + kind + "'");
}

json graphon_to_json(const Graphon& g) {
    json j;
    switch (g.kind()) {
        case Graphon::Kind::constant:
            j = {{"kind", "constant"}, {"c", g.param()}};
            break;
        case Graphon::Kind::product:
            j = {{"kind", "product"}};
            break;
        case Graphon::Kind::min_uv:
            j = {{"kind", "min"}};
            break;
        case Graphon::Kind::exp_kernel:
            j = {{"kind", "exp"}, {"alpha", g.param()}};
            break;
        case Graphon::Kind::step:
        case Graphon::Kind::sampled: {
            const auto& vals = g.values();
            const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(vals.size()))));
            json rows = json::array();
            for (int i = 0; i < n; ++i) {
                json row = json::array();
                for (int jj = 0; jj < n; ++jj) row.push_back(vals[static_cast<std::size_t>(i) * n + jj]);
                rows.push_back(row);
            }
            if (g.kind() == Graphon::Kind::step) {
                j = {{"kind", "step"}, {"boundaries", g.boundaries()}, {"values", rows}};
            } else {
                j = {{"kind", "sampled"}, {"values", rows}};
            }
            break;
        }
    }
    return j;
}

}  // namespace

int SystemConfig::steps() const {
    const double ratio = horizon / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 || rounded < 1.0) {
        throw std::invalid_argument("config: horizon must be an integer multiple of dt");
    }
    return static_cast<int>(rounded);
}

std::vector<double> SystemConfig::time_grid() const {
    const int k = steps();
    std::vector<double> grid(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) grid[static_cast<std::size_t>(i)] = dt * i;
    return grid;
}

void SystemConfig::check() const {
    if (schema_version != 1) throw std::invalid_argument("config: unsupported schema_version");
    if (d < 1 || m < 1 || m_tilde < 1) throw std::invalid_argument("config: dimensions must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("config: horizon must be positive");
    if (n < 1) throw std::invalid_argument("config: particle count must be >= 1");
    if (!(moment_eps > 0.0)) throw std::invalid_argument("config: eps must be positive");
    if (!(lipschitz_L > 0.0)) throw std::invalid_argument("config: L must be positive");
    if (!(moment_K > 0.0)) throw std::invalid_argument("config: K must be positive");
    if (coefficients.family != "zero" && coefficients.family != "linear_tanh" &&
        coefficients.family != "mean_revert_tanh") {
        throw std::invalid_argument("config: unknown coefficient family '" + coefficients.family +
                                    "'");
    }
    if (!(initial_law.stddev.intercept >= 0.0)) {
        throw std::invalid_argument("config: initial stddev must be nonnegative");
    }
    (void)steps();
}

SystemConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    reject_unknown(j,
                   {"schema_version", "d", "m", "m_tilde", "horizon", "dt", "n", "coefficients",
                    "initial_law", "constants", "graphon"},
                   "config");
    if (!j.contains("schema_version")) throw std::invalid_argument("config: schema_version required");

    SystemConfig cfg;
    cfg.schema_version = j.at("schema_version").get<int>();
    cfg.d = j.value("d", 1);
    cfg.m = j.value("m", 1);
    cfg.m_tilde = j.value("m_tilde", 1);
    cfg.horizon = j.value("horizon", 1.0);
    cfg.dt = j.value("dt", 0.1);
    cfg.n = j.value("n", 1);

    if (j.contains("coefficients")) {
        const auto& c = j.at("coefficients");
        reject_unknown(c, {"family", "drift_scale", "idio_scale", "common_scale", "revert_rate"},
                       "coefficients");
        cfg.coefficients.family = c.value("family", std::string("zero"));
        cfg.coefficients.drift_scale = c.value("drift_scale", 0.0);
        cfg.coefficients.idio_scale = c.value("idio_scale", 0.0);
        cfg.coefficients.common_scale = c.value("common_scale", 0.0);
        cfg.coefficients.revert_rate = c.value("revert_rate", 0.0);
    } else {
        cfg.coefficients.family = "zero";
    }

    if (j.contains("initial_law")) {
        const auto& init = j.at("initial_law");
        reject_unknown(init, {"type", "mean", "std"}, "initial_law");
        const std::string type = init.value("type", std::string("gaussian"));
        if (type != "gaussian") {
            throw std::invalid_argument("config: unsupported initial law type '" + type + "'");
        }
        if (init.contains("mean")) cfg.initial_law.mean = parse_affine(init.at("mean"), "initial_law.mean");
        if (init.contains("std")) cfg.initial_law.stddev = parse_affine(init.at("std"), "initial_law.std");
    }

    if (j.contains("constants")) {
        const auto& k = j.at("constants");
        reject_unknown(k, {"L", "K", "eps"}, "constants");
        cfg.lipschitz_L = k.value("L", 1.0);
        cfg.moment_K = k.value("K", 1.0);
        cfg.moment_eps = k.value("eps", 1.0);
    }

    if (j.contains("graphon")) cfg.graphon = graphon_from_json(j.at("graphon"));
    cfg.check();
    return cfg;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const SystemConfig& cfg) {
    json j{{"schema_version", cfg.schema_version},
           {"d", cfg.d},
           {"m", cfg.m},
           {"m_tilde", cfg.m_tilde},
           {"horizon", cfg.horizon},
           {"dt", cfg.dt},
           {"n", cfg.n},
           {"coefficients",
            {{"family", cfg.coefficients.family},
             {"drift_scale", cfg.coefficients.drift_scale},
             {"idio_scale", cfg.coefficients.idio_scale},
             {"common_scale", cfg.coefficients.common_scale},
             {"revert_rate", cfg.coefficients.revert_rate}}},
           {"initial_law",
            {{"type", "gaussian"},
             {"mean", affine_to_json(cfg.initial_law.mean)},
             {"std", affine_to_json(cfg.initial_law.stddev)}}},
           {"constants", {{"L", cfg.lipschitz_L}, {"K", cfg.moment_K}, {"eps", cfg.moment_eps}}},
           {"graphon", graphon_to_json(cfg.graphon)}};
    return j.dump();
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string config_hash(const SystemConfig& cfg) {
    // nlohmann objects serialize with sorted keys, so the dump is canonical
    const std::uint64_t h = fnv1a64(config_to_json(cfg));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

Graphon parse_graphon_spec(const std::string& json_text) {
    return graphon_from_json(json::parse(json_text));
}

}  // namespace graphonlab
