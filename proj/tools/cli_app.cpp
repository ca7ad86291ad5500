#include "cli_app.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "optomw/config.hpp"
#include "optomw/errors.hpp"
#include "optomw/gaussian.hpp"
#include "optomw/report.hpp"
#include "optomw/sweep.hpp"
#include "optomw/teleport.hpp"

namespace optomw::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

struct GlobalOptions {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  double tol = 0.0;
  int jobs = 1;
};

RunConfig resolve_config(const GlobalOptions& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) {
    cfg = load_config(g.config_path);
  } else if (!g.preset.empty()) {
    cfg = preset_config(g.preset);
  }
  if (g.tol > 0.0) cfg.rel_tol = g.tol;
  return cfg;
}

std::optional<std::ofstream> open_in(const std::string& dir, const std::string& file, std::filesystem::path& path) {
  std::filesystem::create_directories(dir);
  path = std::filesystem::path(dir) / file;
  std::ofstream s(path);
  if (!s) throw Error("cannot write '" + path.string() + "'");
  return s;
}

void print_entanglement(std::ostream& out, const RunConfig& cfg, const OutputCM& cm) {
  const auto pair = reduce_to_pair(cm, ModeOrder::microwave_first);
  const auto ent = log_negativity(pair);
  const auto phys = physicality_check(pair);
  out << "[entanglement]\n"
      << "epsilon = " << format_number(cfg.window.epsilon) << '\n'
      << "omega_center_c_rel = " << format_number(cfg.window.center_c_rel) << '\n'
      << "omega_center_w_rel = " << format_number(cfg.window.center_w_rel) << '\n'
      << "E_N = " << format_number(ent.log_neg) << '\n'
      << "eta = " << format_number(ent.eta) << '\n'
      << "sigma = " << format_number(ent.sigma) << '\n'
      << "F_opt = " << format_number(ent.fopt) << '\n'
      << "min_symplectic = " << format_number(phys.symplectic_eigenvalues.front()) << '\n'
      << "physical = " << (phys.physical() ? "true" : "false") << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Opto-electro-mechanical interface: entanglement and teleportation fidelity", "optomw"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  GlobalOptions g;
  app.add_option("--config", g.config_path, "flat key = value configuration file");
  app.add_option("--preset", g.preset, "named parameter preset (fig2-caption)");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--tol", g.tol, "relative tolerance of the frequency quadrature")->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "worker threads for sweeps (0 = all cores)")->check(CLI::NonNegativeNumber);

  auto* validate = app.add_subcommand("validate", "check the device parameters");
  auto* derive = app.add_subcommand("derive", "single-photon couplings, drives, occupations");
  auto* steady = app.add_subcommand("steady", "fixed point, drift and diffusion matrices");
  auto* entangle = app.add_subcommand("entangle", "output covariance matrix and log-negativity");
  auto* teleport = app.add_subcommand("teleport", "teleportation fidelity for cat and coherent inputs");
  auto* sweep = app.add_subcommand("sweep", "one-dimensional parameter sweep to CSV");
  auto* figure = app.add_subcommand("figure", "regenerate figure data (fig2|fig3|fig4|sm1)");
  std::string figure_name;
  figure->add_option("name", figure_name, "figure name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const RunConfig cfg = resolve_config(g);

    if (validate->parsed()) {
      const auto report = validate_params(cfg.params);
      write_validation_report(out, report);
      return report.ok() ? kOk : kUsage;
    }

    const auto dq = derive_quantities(cfg.params);
    if (derive->parsed()) {
      write_derived_report(out, dq);
      return kOk;
    }

    const auto ss = solve_fixed_point(cfg.params, dq, cfg.mode);
    const auto model = build_state_space(cfg.params, dq, ss);
    if (steady->parsed()) {
      write_state_report(out, ss, model);
      const auto v = check_stability(model);
      out << "spectral_abscissa = " << format_number(v.spectral_abscissa) << '\n'
          << "stability_margin = " << format_number(v.margin) << '\n';
      return kOk;
    }

    if (entangle->parsed() || teleport->parsed()) {
      const auto cm = output_covariance(model, cfg.window.resolve(cfg.params.omega_m), cfg.spectral());
      if (entangle->parsed()) {
        print_entanglement(out, cfg, cm);
        if (!g.out_dir.empty()) {
          std::filesystem::path path;
          auto file = open_in(g.out_dir, "output_cm.csv", path);
          write_output_cm_csv(*file, cm);
          out << "output_cm = " << path.string() << '\n';
        } else {
          write_output_cm_csv(out, cm);
        }
        return kOk;
      }
      const auto pair = teleportation_pair(cm, cfg.direction);
      const auto cat = fidelity_cat(pair, CatState(cfg.cat_alpha));
      const auto coh = fidelity_coherent(pair);
      out << "[teleportation]\n"
          << "direction = " << to_string(cfg.direction) << '\n'
          << "cat_alpha = " << format_number(cfg.cat_alpha) << '\n'
          << "F_cat = " << format_number(cat.fidelity) << '\n'
          << "F_coherent = " << format_number(coh.fidelity) << '\n'
          << "F_opt = " << format_number(cat.fopt) << '\n'
          << "E_N = " << format_number(cat.log_neg) << '\n'
          << "det_gamma = " << format_number(cat.gamma_det) << '\n'
          << "above_no_cloning = " << (cat.above_no_cloning ? "true" : "false") << '\n';
      return kOk;
    }

    if (sweep->parsed()) {
      const auto spec = sweep_from_config(cfg);
      const auto rows = run_sweep(spec, g.jobs);
      if (!g.out_dir.empty()) {
        std::filesystem::path path;
        auto file = open_in(g.out_dir, "sweep.csv", path);
        write_sweep_csv(*file, spec, cfg, rows);
        out << path.string() << '\n';
      } else {
        write_sweep_csv(out, spec, cfg, rows);
      }
      const bool any_ok = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.ok(); });
      if (!any_ok) {
        err << "error: no stable point in the sweep\n";
        return kNumerical;
      }
      return kOk;
    }

    if (figure->parsed()) {
      if (!figure_preset(figure_name)) {
        err << "error: unknown figure '" << figure_name << "' (expected fig2, fig3, fig4 or sm1)\n";
        return kUsage;
      }
      const auto path = emit_figure(figure_name, cfg, g.out_dir.empty() ? "." : g.out_dir, g.jobs);
      out << path.string() << '\n';
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    err << "invalid parameter " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace optomw::cli
