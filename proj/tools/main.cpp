// epsweep command line: reproduce the figure presets, sweep custom models,
// locate exceptional points. All output is deterministic; there is no RNG
// anywhere in the pipeline.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "epsweep/config.hpp"
#include "epsweep/eplocate.hpp"
#include "epsweep/model.hpp"
#include "epsweep/sweep.hpp"

namespace fs = std::filesystem;
using namespace epsweep;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;    // unknown preset / malformed config / bad grid
constexpr int kExitUnwritable = 3;

struct GridOverrides {
    int points{0};
    double min{0.0}, max{0.0};
    bool has_min{false}, has_max{false};
    bool refine{true};

    void apply(SweepConfig& config) const {
        if (points > 0) config.axis.points = points;
        if (has_min) config.axis.min = min;
        if (has_max) config.axis.max = max;
        config.refine.enable = refine;
    }
};

void add_grid_options(CLI::App* cmd, GridOverrides& g) {
    cmd->add_option("--points", g.points, "grid points (default from model/preset)");
    cmd->add_option("--min", g.min, "sweep range lower end")->each([&g](const std::string&) {
        g.has_min = true;
    });
    cmd->add_option("--max", g.max, "sweep range upper end")->each([&g](const std::string&) {
        g.has_max = true;
    });
    cmd->add_flag("--refine,!--no-refine", g.refine, "adaptive refinement near gap minima");
}

int resolve_model(const std::string& preset_id, const std::string& config_path,
                  ModelConfig& out, std::string& name) {
    try {
        if (!preset_id.empty()) {
            const Preset& p = preset(preset_id);
            out.spec = p.spec;
            out.axis = p.axis;
            name = p.id;
            return kExitOk;
        }
        out = load_model_file(config_path);
        name = fs::path(config_path).stem().string();
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "epsweep: config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "epsweep: " << e.what() << "\n";
        return kExitUsage;
    }
}

void write_plot_script(std::ostream& os, const std::string& csv_name,
                       const std::string& stem, int n, const std::string& axis) {
    os << "# gnuplot script: energies E_i, half-widths Gamma_i/2, phase rigidity r_i, 1-r_i\n"
       << "# run with: gnuplot " << stem << ".plot\n"
       << "set datafile separator ','\n"
       << "set terminal pngcairo size 900,1200\n"
       << "set output '" << stem << ".png'\n"
       << "set multiplot layout 4,1 title '" << stem << "'\n"
       << "set xlabel '" << axis << "'\n";
    auto series = [&](const char* label, int base, double ymin, double ymax, bool fix_range) {
        os << "set ylabel '" << label << "'\n";
        if (fix_range)
            os << "set yrange [" << ymin << ":" << ymax << "]\n";
        else
            os << "set yrange [*:*]\n";
        os << "plot ";
        for (int k = 1; k <= n; ++k) {
            if (k > 1) os << ", ";
            os << "'" << csv_name << "' using 1:" << base + k << " with lines title columnheader("
               << base + k << ")";
        }
        os << "\n";
    };
    series("E_i", 1, 0, 0, false);
    series("Gamma_i/2", 1 + n, 0, 0, false);
    series("r_i", 1 + 2 * n, -0.05, 1.05, true);
    // switch this panel to 'set logscale y' to zoom the near-rigid tail
    series("1-r_i", 1 + 3 * n, -0.05, 1.05, true);
    os << "unset multiplot\n";
}

int write_artifacts(const SweepResult& result, const std::string& name, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    const fs::path csv_path = out_dir / (name + ".csv");
    const fs::path ep_path = out_dir / (name + ".ep.txt");
    const fs::path plot_path = out_dir / (name + ".plot");
    const fs::path manifest_path = out_dir / (name + ".manifest.txt");

    {
        std::ofstream f(csv_path);
        if (!f) {
            std::cerr << "epsweep: cannot write " << csv_path.string() << "\n";
            return kExitUnwritable;
        }
        write_csv(f, result);
    }
    {
        std::ofstream f(ep_path);
        if (!f) return kExitUnwritable;
        write_ep_report_doc(f, result.ep_report, result.config.axis.name, name);
    }
    {
        std::ofstream f(plot_path);
        if (!f) return kExitUnwritable;
        write_plot_script(f, csv_path.filename().string(), name, result.config.spec.n,
                          result.config.axis.name);
    }
    {
        std::ofstream f(manifest_path);
        if (!f) return kExitUnwritable;
        write_manifest(f, result, name);
    }

    std::cout << name << ": " << result.rows.size() << " rows ("
              << result.refined_inserted << " refined), "
              << result.ep_report.locations.size() << " EP location(s)";
    if (result.max_bifurcation_at)
        std::cout << ", max bifurcation at " << format_double(*result.max_bifurcation_at);
    std::cout << "\n  -> " << csv_path.string() << "\n";
    return kExitOk;
}

int run_and_write(const ModelConfig& mc, const std::string& name, const fs::path& out_dir,
                  const GridOverrides& grid) {
    SweepConfig config;
    config.spec = mc.spec;
    config.axis = mc.axis;
    grid.apply(config);
    try {
        const SweepResult result = run_sweep(config);
        return write_artifacts(result, name, out_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "epsweep: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SolverError& e) {
        std::cerr << "epsweep: " << e.what() << "\n";
        return kExitRuntime;
    }
}

void print_ep_report(const EpReport& report, const std::string& axis) {
    if (report.degenerate_line)
        std::cout << "degenerate family: the levels coincide for every " << axis << "\n";
    if (report.locations.empty()) {
        std::cout << "none found in range\n";
    } else {
        std::cout << "  " << axis << "_star               kind               degeneracy   pair   "
                  << "min_gap       r_at\n";
        for (const auto& loc : report.locations) {
            std::printf("  %-20.12g %-18s %-12s (%d,%d)  %-13.3e %.3e\n", loc.a_star,
                        to_string(loc.kind).c_str(), to_string(loc.degeneracy).c_str(),
                        loc.pair.first + 1, loc.pair.second + 1, loc.min_gap, loc.r_at);
            if (loc.kind == EpKind::NearMissMinimum && loc.imag_distance > 0.0)
                std::printf("    (complex root, |Im| = %.3e)\n", loc.imag_distance);
            if (loc.non_unimodal) std::printf("    (warning: bracket held several minima)\n");
        }
    }
    for (const auto& w : report.real_spectrum_windows)
        std::cout << "real-spectrum window: (" << format_double(w.lo) << ", "
                  << format_double(w.hi) << ")\n";
    for (double a : report.diabolic_crossings)
        std::cout << "diabolic crossing (not an EP) at " << format_double(a) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectra, exceptional points and biorthogonality observables of small "
                 "non-Hermitian Hamiltonians"};
    app.require_subcommand(1);
    bool seedless = false;
    app.add_flag("--seedless", seedless, "confirm deterministic mode (always on; no RNG is used)");

    std::string preset_id, config_path, out_dir = ".", name_override;

    auto* cmd_reproduce = app.add_subcommand("reproduce", "run a figure preset and write its artifacts");
    cmd_reproduce->add_option("figure-id", preset_id, "preset id (see `epsweep presets`)")->required();
    cmd_reproduce->add_option("--out", out_dir, "output directory");
    GridOverrides grid_reproduce;
    add_grid_options(cmd_reproduce, grid_reproduce);

    auto* cmd_sweep = app.add_subcommand("sweep", "run a sweep for a custom model config");
    cmd_sweep->add_option("--config", config_path, "model config file")->required();
    cmd_sweep->add_option("--out", out_dir, "output directory");
    cmd_sweep->add_option("--name", name_override, "artifact base name (default: config stem)");
    GridOverrides grid_sweep;
    add_grid_options(cmd_sweep, grid_sweep);

    auto* cmd_locate = app.add_subcommand("locate-ep", "locate exceptional points of a model");
    auto* opt_lp = cmd_locate->add_option("--preset", preset_id, "preset id");
    cmd_locate->add_option("--config", config_path, "model config file")->excludes(opt_lp);
    cmd_locate->add_option("--out", out_dir, "directory for the machine-readable sidecar");
    GridOverrides grid_locate;
    add_grid_options(cmd_locate, grid_locate);

    auto* cmd_presets = app.add_subcommand("presets", "list the built-in figure presets");

    auto* cmd_info = app.add_subcommand("info", "show a model's parameters and analytic EP summary");
    auto* opt_ip = cmd_info->add_option("--preset", preset_id, "preset id");
    cmd_info->add_option("--config", config_path, "model config file")->excludes(opt_ip);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    if (cmd_presets->parsed()) {
        std::printf("%-18s %2s  %-5s %-22s %s\n", "id", "n", "axis", "default range", "omega");
        for (const auto& p : preset_catalog())
            std::printf("%-18s %2d  %-5s [%g, %g] x %-6d (%g%+gi)\n", p.id.c_str(), p.spec.n,
                        p.axis.name.c_str(), p.axis.min, p.axis.max, p.axis.points,
                        p.spec.omega.real(), p.spec.omega.imag());
        return kExitOk;
    }

    if (cmd_info->parsed()) {
        if (preset_id.empty() && config_path.empty()) {
            std::cerr << "epsweep: info needs --preset or --config\n";
            return kExitUsage;
        }
        ModelConfig mc;
        std::string name;
        if (int rc = resolve_model(preset_id, config_path, mc, name); rc != kExitOk) return rc;
        std::cout << "model " << name << ":\n";
        model_to_config(mc.spec, mc.axis).serialize(std::cout);
        if (mc.spec.n == 2) {
            std::cout << "analytic EP conditions:\n";
            print_ep_report(analytic_ep_two_level(mc.spec), mc.axis.name);
        } else {
            std::cout << "n > 2: use `epsweep locate-ep` for the numerical scan\n";
        }
        return kExitOk;
    }

    if (cmd_reproduce->parsed()) {
        ModelConfig mc;
        std::string name;
        if (int rc = resolve_model(preset_id, "", mc, name); rc != kExitOk) {
            if (rc == kExitUsage) {
                std::cerr << "valid ids:";
                for (const auto& id : preset_ids()) std::cerr << " " << id;
                std::cerr << "\n";
            }
            return rc;
        }
        return run_and_write(mc, name, out_dir, grid_reproduce);
    }

    if (cmd_sweep->parsed()) {
        ModelConfig mc;
        std::string name;
        if (int rc = resolve_model("", config_path, mc, name); rc != kExitOk) return rc;
        if (!name_override.empty()) name = name_override;
        return run_and_write(mc, name, out_dir, grid_sweep);
    }

    if (cmd_locate->parsed()) {
        if (preset_id.empty() && config_path.empty()) {
            std::cerr << "epsweep: locate-ep needs --preset or --config\n";
            return kExitUsage;
        }
        ModelConfig mc;
        std::string name;
        if (int rc = resolve_model(preset_id, config_path, mc, name); rc != kExitOk) return rc;

        SweepConfig config;
        config.spec = mc.spec;
        config.axis = mc.axis;
        grid_locate.apply(config);
        try {
            const EpReport report = locate_eps(config.spec, config.axis);
            std::cout << "EP locations for " << name << " (axis " << config.axis.name << "):\n";
            print_ep_report(report, config.axis.name);

            std::error_code ec;
            fs::create_directories(out_dir, ec);
            const fs::path sidecar = fs::path(out_dir) / (name + ".ep.txt");
            std::ofstream f(sidecar);
            if (!f) {
                std::cerr << "epsweep: cannot write " << sidecar.string() << "\n";
                return kExitUnwritable;
            }
            write_ep_report_doc(f, report, config.axis.name, name);
            return kExitOk;
        } catch (const SolverError& e) {
            std::cerr << "epsweep: " << e.what() << "\n";
            return kExitRuntime;
        } catch (const std::invalid_argument& e) {
            std::cerr << "epsweep: " << e.what() << "\n";
            return kExitUsage;
        }
    }

    return kExitOk;
}
