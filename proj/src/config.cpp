#include "wstring/config.hpp"

#include "wstring/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wstring {
namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError(where + " is missing \"" + key + "\"");
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& where, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
    return v.get<int>();
}

std::vector<std::complex<double>> parse_strings(const json& root) {
    std::vector<std::complex<double>> out;
    if (!root.contains("strings")) return out;
    const json& arr = root.at("strings");
    if (!arr.is_array()) throw ConfigError("\"strings\" must be an array of [x, y] pairs");
    for (size_t k = 0; k < arr.size(); ++k) {
        const json& e = arr[k];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            std::ostringstream msg;
            msg << "strings[" << k << "] must be a [x, y] pair of numbers";
            throw ConfigError(msg.str());
        }
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

} // namespace

Params RunConfig::params_at(double eps) const {
    return Params::make(params.lambda1, params.lambda2, params.lambda3, params.lambda4,
                        params.c0, params.strings, eps, params.a1, params.a2);
}

RunConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    require_keys(root, "config",
                 {"params", "strings", "epsilon", "epsilon_sweep", "a", "grid", "newton", "out"});

    if (!root.contains("params")) throw ConfigError("config is missing \"params\"");
    const json& pb = root.at("params");
    if (!pb.is_object()) throw ConfigError("\"params\" must be an object");

    const bool has_explicit = pb.contains("lambda1") || pb.contains("lambda2") ||
                              pb.contains("lambda3") || pb.contains("lambda4");
    const bool has_physical = pb.contains("m_w") || pb.contains("e_charge") || pb.contains("G");
    if (has_explicit && has_physical)
        throw ConfigError("params mixes explicit lambdas with the physical preset");
    if (!has_explicit && !has_physical)
        throw ConfigError("params needs either lambda1..lambda4 or m_w/e_charge/G");

    RunConfig cfg;

    if (root.contains("epsilon") && root.contains("epsilon_sweep"))
        throw ConfigError("give either \"epsilon\" or \"epsilon_sweep\", not both");
    if (root.contains("epsilon")) {
        if (!root.at("epsilon").is_number()) throw ConfigError("\"epsilon\" must be a number");
        cfg.epsilons.push_back(root.at("epsilon").get<double>());
    } else if (root.contains("epsilon_sweep")) {
        const json& sw = root.at("epsilon_sweep");
        if (!sw.is_array() || sw.empty())
            throw ConfigError("\"epsilon_sweep\" must be a non-empty array");
        for (const auto& e : sw) {
            if (!e.is_number()) throw ConfigError("\"epsilon_sweep\" entries must be numbers");
            cfg.epsilons.push_back(e.get<double>());
        }
        cfg.is_sweep = true;
    } else {
        throw ConfigError("config is missing \"epsilon\" (or \"epsilon_sweep\")");
    }

    double a1 = 0.0, a2 = 0.0;
    if (root.contains("a")) {
        const json& a = root.at("a");
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
            throw ConfigError("\"a\" must be a [a1, a2] pair of numbers");
        a1 = a[0].get<double>();
        a2 = a[1].get<double>();
    }

    auto strings = parse_strings(root);

    if (has_physical) {
        require_keys(pb, "params", {"m_w", "e_charge", "G", "c0"});
        PhysicalPreset preset;
        preset.m_w = get_number(pb, "params", "m_w");
        preset.e_charge = get_number(pb, "params", "e_charge");
        preset.G = get_number(pb, "params", "G");
        const double c0 = pb.contains("c0") ? get_number(pb, "params", "c0") : 1.0;
        if (c0 <= 0.0) throw ConfigError("params.c0 must be positive");
        cfg.params = preset.to_params(c0, strings, cfg.epsilons.front(), a1, a2);
    } else {
        require_keys(pb, "params", {"lambda1", "lambda2", "lambda3", "lambda4", "c0"});
        const double c0 = pb.contains("c0") ? get_number(pb, "params", "c0") : 1.0;
        cfg.params = Params::make(get_number(pb, "params", "lambda1"),
                                  get_number(pb, "params", "lambda2"),
                                  get_number(pb, "params", "lambda3"),
                                  get_number(pb, "params", "lambda4"), c0, strings,
                                  cfg.epsilons.front(), a1, a2);
    }
    for (double e : cfg.epsilons)
        if (!(e > 0.0) || !(e <= 1.0))
            throw AdmissibilityError("epsilon values must lie in (0, 1]");

    if (root.contains("grid")) {
        const json& gb = root.at("grid");
        if (!gb.is_object()) throw ConfigError("\"grid\" must be an object");
        require_keys(gb, "grid", {"R", "n"});
        if (gb.contains("R")) cfg.grid.R = get_number(gb, "grid", "R");
        cfg.grid.n = get_int(gb, "grid", "n", cfg.grid.n);
        if (!(cfg.grid.R > 0.0)) throw ConfigError("grid.R must be positive");
        if (cfg.grid.n < 65 || cfg.grid.n % 2 == 0)
            throw ConfigError("grid.n must be odd and at least 65");
    }

    if (root.contains("newton")) {
        const json& nb = root.at("newton");
        if (!nb.is_object()) throw ConfigError("\"newton\" must be an object");
        require_keys(nb, "newton", {"tol", "max_iter"});
        if (nb.contains("tol")) cfg.newton.tol = get_number(nb, "newton", "tol");
        cfg.newton.max_iter = get_int(nb, "newton", "max_iter", cfg.newton.max_iter);
        if (!(cfg.newton.tol > 0.0)) throw ConfigError("newton.tol must be positive");
        if (cfg.newton.max_iter < 1) throw ConfigError("newton.max_iter must be at least 1");
    }

    if (root.contains("out")) {
        if (!root.at("out").is_string()) throw ConfigError("\"out\" must be a string");
        cfg.out_dir = root.at("out").get<std::string>();
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace wstring
