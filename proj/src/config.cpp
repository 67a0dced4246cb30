#include "wchaos/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wchaos/expr.hpp"

namespace wchaos {

namespace {

using nlohmann::json;

Coefficient coefficient_from(const std::string& text, const std::string& key) {
    try {
        Expr e = parse_expr(text);
        return Coefficient([fn = e.fn](double t, double x) { return fn(t, x); }, !e.uses_x,
                           !e.uses_t);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError("config key '" + key + "': " + ex.what());
    }
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const auto& a : allowed) ok = ok || a == key;
        if (!ok) throw ConfigError("unknown config key '" + where + key + "'");
    }
}

double require_number(const json& obj, const std::string& key, double lo, double hi,
                      double fallback, bool has_fallback) {
    if (!obj.contains(key)) {
        if (has_fallback) return fallback;
        throw ConfigError("missing config key '" + key + "'");
    }
    if (!obj[key].is_number()) throw ConfigError("config key '" + key + "' must be a number");
    const double v = obj[key].get<double>();
    if (!(v >= lo && v <= hi))
        throw ConfigError("config key '" + key + "' out of range [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    return v;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ull;
    return h;
}

void apply_equation_preset(RunConfig& cfg, const std::string& name) {
    if (name == "paper-example") {
        cfg.prop.coeffs = CoefficientSet::heat_example();
        cfg.prop.data.v = [](double x) { return std::exp(-0.5 * x * x); };
        cfg.prop.grid = {20.0, 1024, GridMode::PeriodicSpectral};
        cfg.prop.interval = {1.0, 1000};
        cfg.prop.N = 6;
        cfg.prop.K = 16;
    } else if (name == "full2nd-varcoeff") {
        CoefficientSet cs;
        cs.a = Coefficient([](double, double x) { return 1.0 + 0.2 * std::sin(x); }, false, true);
        cs.rho = Coefficient(0.5);
        cs.b = Coefficient(0.1);
        cs.sigma = Coefficient(0.1);
        cs.bound_C0 = 1.2;
        cs.ellipticity = 0.8;
        cfg.prop.coeffs = cs;
        cfg.prop.data.v = [](double x) { return std::exp(-0.5 * x * x); };
        cfg.prop.grid = {20.0, 255, GridMode::BoundedFiniteDifference};
        cfg.prop.interval = {1.0, 500};
        cfg.prop.N = 8;
        cfg.prop.K = 6;
    } else {
        throw ConfigError("unknown equation preset '" + name + "'");
    }
    cfg.preset = name;
}

}  // namespace

RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    apply_equation_preset(cfg, name);
    cfg.config_hash = "preset:" + name;
    return cfg;
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    check_keys(j, {"equation", "grid", "time", "truncation", "weights", "output", "mc"}, "");

    RunConfig cfg;

    if (!j.contains("equation")) throw ConfigError("missing config key 'equation'");
    const json& eq = j["equation"];
    check_keys(eq,
               {"preset", "a", "b", "c", "rho", "sigma", "nu", "v", "f", "g", "ellipticity",
                "bound"},
               "equation.");
    if (eq.contains("preset")) {
        apply_equation_preset(cfg, eq["preset"].get<std::string>());
    } else {
        auto coeff = [&](const char* key, double fallback) {
            if (!eq.contains(key)) return Coefficient(fallback);
            return coefficient_from(eq[key].get<std::string>(), std::string("equation.") + key);
        };
        cfg.prop.coeffs.a = coeff("a", 1.0);
        cfg.prop.coeffs.b = coeff("b", 0.0);
        cfg.prop.coeffs.c = coeff("c", 0.0);
        cfg.prop.coeffs.rho = coeff("rho", 0.0);
        cfg.prop.coeffs.sigma = coeff("sigma", 0.0);
        cfg.prop.coeffs.nu = coeff("nu", 0.0);
        if (eq.contains("v")) {
            Expr e = parse_expr(eq["v"].get<std::string>());
            if (e.uses_t) throw ConfigError("config key 'equation.v' must not depend on t");
            cfg.prop.data.v = [fn = e.fn](double x) { return fn(0.0, x); };
        }
        if (eq.contains("f")) {
            Expr e = parse_expr(eq["f"].get<std::string>());
            cfg.prop.data.f = e.fn;
        }
        if (eq.contains("g")) {
            Expr e = parse_expr(eq["g"].get<std::string>());
            cfg.prop.data.g = e.fn;
        }
        cfg.prop.coeffs.ellipticity = require_number(eq, "ellipticity", 1e-12, 1e12, 1.0, true);
        cfg.prop.coeffs.bound_C0 = require_number(eq, "bound", 1e-12, 1e12, 1.0, true);
    }

    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, {"L", "n_x", "mode"}, "grid.");
        cfg.prop.grid.L = require_number(g, "L", 1e-6, 1e9, cfg.prop.grid.L, true);
        cfg.prop.grid.n_x = static_cast<int>(
            require_number(g, "n_x", 16, 1 << 20, cfg.prop.grid.n_x, true));
        if (g.contains("mode")) {
            const std::string m = g["mode"].get<std::string>();
            if (m == "periodic")
                cfg.prop.grid.mode = GridMode::PeriodicSpectral;
            else if (m == "bounded")
                cfg.prop.grid.mode = GridMode::BoundedFiniteDifference;
            else
                throw ConfigError("config key 'grid.mode' must be 'periodic' or 'bounded'");
        }
    }

    if (j.contains("time")) {
        const json& t = j["time"];
        check_keys(t, {"T", "dt"}, "time.");
        const double T = require_number(t, "T", 1e-9, 1e9, cfg.prop.interval.T, true);
        const double dt =
            require_number(t, "dt", 1e-12, 1e9, T / cfg.prop.interval.n_t, true);
        cfg.prop.interval.T = T;
        cfg.prop.interval.n_t = std::max(2, static_cast<int>(std::lround(T / dt)));
    }

    if (j.contains("truncation")) {
        const json& tr = j["truncation"];
        check_keys(tr, {"N", "K"}, "truncation.");
        cfg.prop.N = static_cast<int>(require_number(tr, "N", 0, 64, cfg.prop.N, true));
        cfg.prop.K = static_cast<int>(require_number(tr, "K", 1, 4096, cfg.prop.K, true));
    }

    if (j.contains("weights")) {
        const json& w = j["weights"];
        if (!w.is_array()) throw ConfigError("config key 'weights' must be an array of [p, q]");
        cfg.weights.clear();
        for (const auto& pair : w) {
            if (!pair.is_array() || pair.size() != 2)
                throw ConfigError("config key 'weights' entries must be [p, q] pairs");
            cfg.weights.push_back({pair[0].get<double>(), pair[1].get<double>()});
        }
        if (cfg.weights.empty()) cfg.weights.push_back({0.0, 0.0});
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, {"dir", "format"}, "output.");
        if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
        if (o.contains("format")) {
            cfg.format = o["format"].get<std::string>();
            if (cfg.format != "csv" && cfg.format != "json")
                throw ConfigError("config key 'output.format' must be 'csv' or 'json'");
        }
    }

    if (j.contains("mc")) {
        const json& m = j["mc"];
        check_keys(m, {"paths", "steps", "seed"}, "mc.");
        cfg.mc.paths = static_cast<std::uint64_t>(
            require_number(m, "paths", 1, 1e12, static_cast<double>(cfg.mc.paths), true));
        cfg.mc.steps =
            static_cast<int>(require_number(m, "steps", 2, 1e9, cfg.mc.steps, true));
        if (m.contains("seed")) cfg.mc.seed = m["seed"].get<std::uint64_t>();
    }

    std::ostringstream hash_src;
    hash_src << j.dump();
    std::ostringstream hs;
    hs << std::hex << fnv1a(hash_src.str());
    cfg.config_hash = hs.str();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string output_header(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# config_hash=" << cfg.config_hash << " N=" << cfg.prop.N << " K=" << cfg.prop.K
       << " L=" << cfg.prop.grid.L << " n_x=" << cfg.prop.grid.n_x << " mode="
       << (cfg.prop.grid.mode == GridMode::PeriodicSpectral ? "periodic" : "bounded")
       << " T=" << cfg.prop.interval.T << " dt=" << cfg.prop.interval.dt();
    return os.str();
}

}  // namespace wchaos
