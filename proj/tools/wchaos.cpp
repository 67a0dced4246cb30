// Batch front end: config in, solver runs, CSV/JSON tables out, plus the
// verification suites.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wchaos/config.hpp"
#include "wchaos/oracles.hpp"
#include "wchaos/propagator.hpp"
#include "wchaos/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wchaos;

namespace {

constexpr int kExitVerifyFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string num(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

RunConfig resolve_config(const std::string& config_path, const std::string& preset) {
    if (!config_path.empty()) return load_config(config_path);
    if (!preset.empty()) return preset_config(preset);
    throw ConfigError("either --config or --preset is required");
}

struct SolveTables {
    RunConfig cfg;
    PropagatorResult result;
    // Per-coefficient final-time squared norms, in series iteration order.
    std::vector<std::pair<const MultiIndex*, double>> coeff_norms;
};

SolveTables run_solve_tables(RunConfig cfg) {
    SolveOptions opts;
    opts.store_times = {cfg.prop.interval.T};
    opts.norm_times = {cfg.prop.interval.T};
    SolveTables out;
    out.cfg = std::move(cfg);
    out.result = solve_system(out.cfg.prop, opts);
    for (const auto& [alpha, traj] : out.result.series.coefficients())
        out.coeff_norms.emplace_back(
            &alpha, field_norm_sq(traj.final(), out.cfg.prop.grid, SpatialNormKind::L2));
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

void write_solve_outputs(const SolveTables& t, const fs::path& dir) {
    const auto& cfg = t.cfg;
    const double T = cfg.prop.interval.T;
    const std::string header = output_header(cfg);

    {
        std::ostringstream os;
        os << header << "\nalpha,order";
        for (const auto& w : cfg.weights) os << ",weight_log_p" << w.p << "_q" << w.q;
        os << ",norm_sq\n";
        for (const auto& [alpha, nm] : t.coeff_norms) {
            os << '"' << alpha->to_string() << '"' << ',' << alpha->order();
            for (const auto& w : cfg.weights) os << ',' << num(weight_log(*alpha, w.p, w.q));
            os << ',' << num(nm) << '\n';
        }
        write_file(dir / "coefficients.csv", os.str());
    }

    const bool example = cfg.preset == "paper-example";
    {
        std::ostringstream os;
        os << header << "\nn,t,S_n,oracle_value,relative_error\n";
        const auto& sn = t.result.norms.level_norm_sq.at(0);
        for (int n = 0; n <= cfg.prop.N; ++n) {
            const double s = sn[static_cast<std::size_t>(n)];
            os << n << ',' << num(T) << ',' << num(s);
            if (example && n <= 12) {
                const double o = growth_oracle(n, T).value;
                os << ',' << num(o) << ',' << num(std::abs(s - o) / o);
            } else {
                os << ",,";
            }
            os << '\n';
        }
        write_file(dir / "levels.csv", os.str());
    }

    {
        std::ostringstream os;
        os << header << "\np,q,weighted_norm_sq\n";
        for (const auto& w : cfg.weights) {
            double acc = 0.0;
            for (const auto& [alpha, nm] : t.coeff_norms)
                acc += std::exp(weight_log(*alpha, w.p, w.q)) * nm;
            os << num(w.p) << ',' << num(w.q) << ',' << num(acc) << '\n';
        }
        write_file(dir / "weighted.csv", os.str());
    }

    if (cfg.format == "json") {
        json j;
        j["header"] = header;
        for (const auto& [alpha, nm] : t.coeff_norms)
            j["coefficients"].push_back(
                {{"alpha", alpha->to_string()}, {"order", alpha->order()}, {"norm_sq", nm}});
        const auto& sn = t.result.norms.level_norm_sq.at(0);
        for (int n = 0; n <= cfg.prop.N; ++n)
            j["levels"].push_back({{"n", n}, {"t", T}, {"S_n", sn[static_cast<std::size_t>(n)]}});
        for (const auto& w : cfg.weights) {
            double acc = 0.0;
            for (const auto& [alpha, nm] : t.coeff_norms)
                acc += std::exp(weight_log(*alpha, w.p, w.q)) * nm;
            j["weighted"].push_back({{"p", w.p}, {"q", w.q}, {"weighted_norm_sq", acc}});
        }
        write_file(dir / "solve.json", j.dump(2) + "\n");
    }
}

int cmd_solve(const std::string& config_path, const std::string& preset,
              const std::string& out_dir, const std::string& format) {
    RunConfig cfg = resolve_config(config_path, preset);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!format.empty()) cfg.format = format;
    SolveTables tables = run_solve_tables(std::move(cfg));
    fs::create_directories(tables.cfg.out_dir);
    write_solve_outputs(tables, tables.cfg.out_dir);
    std::cout << "wrote coefficients.csv, levels.csv, weighted.csv to " << tables.cfg.out_dir
              << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
    const auto suites = verify_suites(suite, seed);
    std::cout << format_report(suites);
    for (const auto& s : suites)
        if (!s.passed()) return kExitVerifyFail;
    return 0;
}

int cmd_stransform(const std::string& config_path, const std::string& preset,
                   const std::vector<double>& h_coeffs, const std::string& out_dir) {
    RunConfig cfg = resolve_config(config_path, preset);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    const double T = cfg.prop.interval.T;
    HFunction h{h_coeffs};

    SolveOptions opts;
    opts.store_times = {T};
    const auto res = solve_system(cfg.prop, opts);
    ChaosSeries<SpatialField> finals(cfg.prop.N, cfg.prop.K);
    for (const auto& [alpha, traj] : res.series.coefficients())
        finals.set(alpha, traj.at_time(T));
    const SpatialField chaos_side = s_evaluate(finals, h);

    Trajectory direct;
    try {
        direct = solve_h(sample_field(cfg.prop.data.v, cfg.prop.grid), cfg.prop.data.f,
                         cfg.prop.data.g, h, cfg.prop.coeffs, cfg.prop.interval, cfg.prop.grid);
    } catch (const RegimeError& e) {
        std::cerr << "numerical failure: " << e.what()
                  << " (admissible regime: a + h*rho >= " << cfg.prop.coeffs.ellipticity / 2
                  << " on the whole interval)\n";
        return kExitNumerical;
    }
    const SpatialField& pde_side = direct.final();

    SpatialField diff(pde_side.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = chaos_side[i] - pde_side[i];
    const double dn = field_norm(diff, cfg.prop.grid, SpatialNormKind::L2);
    const double rel = dn / field_norm(pde_side, cfg.prop.grid, SpatialNormKind::L2);

    fs::create_directories(cfg.out_dir);
    std::ostringstream os;
    os << output_header(cfg) << "\nx,series_evaluation,direct_solve\n";
    for (std::size_t i = 0; i < pde_side.size(); ++i)
        os << num(cfg.prop.grid.x(static_cast<int>(i))) << ',' << num(chaos_side[i]) << ','
           << num(pde_side[i]) << '\n';
    write_file(fs::path(cfg.out_dir) / "stransform.csv", os.str());
    std::cout << "L2 difference " << num(dn) << " (relative " << num(rel) << "), table in "
              << cfg.out_dir << "/stransform.csv\n";
    return 0;
}

int cmd_growth(int n_max, double t, const std::string& out_path) {
    std::ostringstream os;
    os << "n,t,value,normalized_ratio\n";
    for (int n = 0; n <= n_max; ++n) {
        const auto g = growth_oracle(n, t);
        os << n << ',' << num(t) << ',' << num(g.value) << ',' << num(g.stirling_ratio) << '\n';
    }
    if (out_path.empty())
        std::cout << os.str();
    else
        write_file(out_path, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wiener-chaos propagator solver for stochastic parabolic equations"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // frees -h / --h for the test direction

    std::string config_path, preset, out_dir, format, suite = "all", growth_out;
    std::uint64_t seed = kVerifySeed;
    std::vector<double> h_coeffs;
    int growth_n = 8;
    double growth_t = 1.0;

    auto* solve = app.add_subcommand("solve", "run the propagator and write norm tables");
    solve->add_option("--config", config_path, "JSON config file");
    solve->add_option("--preset", preset, "named preset (paper-example | full2nd-varcoeff)");
    solve->add_option("--out", out_dir, "output directory");
    solve->add_option("--format", format, "csv | json")
        ->check(CLI::IsMember({"csv", "json", ""}));

    auto* verify = app.add_subcommand("verify", "run the oracle verification suites");
    verify->add_option("--suite", suite,
                       "growth | parseval | stransform | orthonormality | shift | estimate | all");
    verify->add_option("--seed", seed, "Monte Carlo seed");

    auto* str = app.add_subcommand("stransform",
                                   "compare series evaluation against the direct solve");
    str->add_option("--config", config_path, "JSON config file");
    str->add_option("--preset", preset, "named preset");
    str->add_option("--h", h_coeffs, "test-direction coefficients h_1,h_2,...")
        ->expected(-1)
        ->delimiter(',');
    str->add_option("--out", out_dir, "output directory");

    auto* growth = app.add_subcommand("growth", "print the level-norm growth table");
    growth->add_option("--n", growth_n, "largest level")->check(CLI::Range(0, 12));
    growth->add_option("--t", growth_t, "evaluation time");
    growth->add_option("--out", growth_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (solve->parsed()) return cmd_solve(config_path, preset, out_dir, format);
        if (verify->parsed()) return cmd_verify(suite, seed);
        if (str->parsed()) return cmd_stransform(config_path, preset, h_coeffs, out_dir);
        if (growth->parsed()) return cmd_growth(growth_n, growth_t, growth_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const RegimeError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
