#include "optomw/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include "optomw/constants.hpp"
#include "optomw/errors.hpp"
#include "optomw/report.hpp"

namespace optomw {

double PointResult::value(Observable obs) const {
  switch (obs) {
    case Observable::log_neg: return log_neg;
    case Observable::f_cat: return f_cat;
    case Observable::f_coherent: return f_coherent;
    case Observable::f_opt: return f_opt;
    case Observable::stability_margin: return stability_margin;
  }
  return 0.0;
}

PointResult evaluate_point(const PointInput& input) {
  PointResult r;
  r.epsilon = input.window.epsilon;
  try {
    const auto model = build_model(input.params, input.mode);
    const auto verdict = check_stability(model);
    r.stable = verdict.stable;
    r.stability_margin = verdict.margin / model.omega_m;
    if (!r.stable) return r;

    const auto cm = output_covariance(model, input.window.resolve(model.omega_m), input.spectral);
    const auto pair = teleportation_pair(cm, input.direction);
    const auto phys = physicality_check(pair);
    r.physical = phys.physical();
    r.min_symplectic = phys.symplectic_eigenvalues.front();

    const auto ent = log_negativity(pair);
    r.log_neg = ent.log_neg;
    r.f_opt = ent.fopt;
    r.f_coherent = fidelity_coherent(pair).fidelity;
    r.f_cat = fidelity_cat(pair, CatState(input.cat_alpha)).fidelity;
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<double> SweepSpec::axis_values() const {
  std::vector<double> xs(range.points);
  const double step = (range.stop - range.start) / (range.points - 1);
  for (int i = 0; i < range.points; ++i) xs[i] = (i + 1 == range.points) ? range.stop : range.start + i * step;
  return xs;
}

PointInput SweepSpec::at(double x) const {
  PointInput p = fixed;
  switch (range.axis) {
    case SweepAxis::omega_w_center: p.window.center_w_rel = x; break;
    case SweepAxis::omega_c_center: p.window.center_c_rel = x; break;
    case SweepAxis::epsilon: p.window.epsilon = x; break;
    case SweepAxis::cat_alpha: p.cat_alpha = x; break;
    case SweepAxis::temperature: p.params.temperature = x; break;
  }
  return p;
}

SweepSpec sweep_from_config(const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep needs 'axis', 'start', 'stop' and 'points'", 0);
  SweepSpec spec;
  spec.range = *cfg.sweep;
  if (!std::isfinite(spec.range.start) || !std::isfinite(spec.range.stop) || spec.range.points < 2)
    throw ConfigError("sweep range must be finite with points >= 2", 0);
  spec.fixed = {cfg.params, cfg.window, cfg.direction, cfg.cat_alpha, cfg.mode, cfg.spectral()};
  spec.outputs = cfg.outputs;
  return spec;
}

std::vector<PointResult> run_sweep(const SweepSpec& spec, int jobs) {
  const auto xs = spec.axis_values();
  std::vector<PointResult> rows(xs.size());
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(xs.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < xs.size(); i = next++) {
      rows[i] = evaluate_point(spec.at(xs[i]));
      rows[i].x = xs[i];
    }
  };
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
  }
  return rows;
}

namespace {

void write_provenance(std::ostream& out, const RunConfig& cfg, const DeviceParams& params) {
  out << "# tool=optomw " << kVersion << '\n'
      << "# preset=" << cfg.preset << '\n'
      << "# params_hash=" << params_fingerprint(params) << '\n'
      << "# constants=" << constants::table_version << '\n'
      << "# detuning_mode=" << to_string(cfg.mode) << '\n'
      << "# quad_rel_tol=" << format_number(cfg.rel_tol) << '\n'
      << "# drive_w_formula=" << kDriveWFormula << '\n';
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const RunConfig& cfg,
                     const std::vector<PointResult>& rows) {
  write_provenance(out, cfg, spec.fixed.params);
  out << "# axis=" << to_string(spec.range.axis) << '\n'
      << "# direction=" << to_string(spec.fixed.direction) << '\n'
      << "# cat_alpha=" << format_number(spec.fixed.cat_alpha) << '\n'
      << "# omega_center_c_rel=" << format_number(spec.fixed.window.center_c_rel) << '\n'
      << "# omega_center_w_rel=" << format_number(spec.fixed.window.center_w_rel) << '\n';
  out << "index,x_value,epsilon,stable,physical";
  for (auto o : spec.outputs) out << ',' << to_string(o);
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << i << ',' << format_number(r.x) << ',' << format_number(r.epsilon) << ',' << (r.stable ? 1 : 0)
        << ',' << (r.physical ? 1 : 0);
    for (auto o : spec.outputs) {
      out << ',';
      if (r.ok() || o == Observable::stability_margin) out << format_number(r.value(o));
      else out << "nan";
    }
    out << '\n';
  }
}

std::optional<FigureSpec> figure_preset(std::string_view name) {
  FigureSpec f;
  f.name = std::string(name);
  if (name == "fig2") {
    f.range = {SweepAxis::omega_w_center, 0.8, 1.2, 81};
    f.observable = Observable::log_neg;
  } else if (name == "fig3") {
    f.range = {SweepAxis::omega_w_center, 0.8, 1.2, 81};
    f.observable = Observable::f_cat;
  } else if (name == "fig4") {
    f.range = {SweepAxis::cat_alpha, 0.0, 2.0, 81};
    f.observable = Observable::f_cat;
  } else if (name == "sm1") {
    f.range = {SweepAxis::omega_c_center, -1.2, -0.8, 81};
    f.observable = Observable::f_cat;
    f.direction = Direction::reversed;
  } else {
    return std::nullopt;
  }
  return f;
}

FigureData compute_figure(const FigureSpec& spec, const RunConfig& cfg, int jobs) {
  FigureData data;
  data.spec = spec;
  data.epsilons = cfg.epsilons;
  for (double eps : cfg.epsilons) {
    SweepSpec s;
    s.range = spec.range;
    s.fixed = {cfg.params, WindowSpec{eps, spec.center_c_rel, spec.center_w_rel}, spec.direction,
               spec.cat_alpha, cfg.mode, cfg.spectral()};
    s.outputs = {spec.observable};
    data.curves.push_back(run_sweep(s, jobs));
  }
  return data;
}

void write_figure_csv(std::ostream& out, const FigureData& data, const RunConfig& cfg) {
  write_provenance(out, cfg, cfg.params);
  out << "# figure=" << data.spec.name << '\n'
      << "# axis=" << to_string(data.spec.range.axis) << '\n'
      << "# direction=" << to_string(data.spec.direction) << '\n'
      << "# cat_alpha=" << format_number(data.spec.cat_alpha) << '\n'
      << "# omega_center_c_rel=" << format_number(data.spec.center_c_rel) << '\n'
      << "# omega_center_w_rel=" << format_number(data.spec.center_w_rel) << '\n'
      << "x_value,observable,epsilon,value,f_opt\n";
  const bool with_fopt = data.spec.observable != Observable::log_neg;
  for (std::size_t c = 0; c < data.curves.size(); ++c) {
    for (const auto& r : data.curves[c]) {
      out << format_number(r.x) << ',' << to_string(data.spec.observable) << ','
          << format_number(data.epsilons[c]) << ',';
      if (r.ok()) {
        out << format_number(r.value(data.spec.observable)) << ',';
        if (with_fopt) out << format_number(r.f_opt);
      } else {
        out << "nan,";
      }
      out << '\n';
    }
  }
}

std::filesystem::path emit_figure(std::string_view name, const RunConfig& cfg,
                                  const std::filesystem::path& out_dir, int jobs) {
  const auto spec = figure_preset(name);
  if (!spec) throw ValidationError("figure", "unknown figure '" + std::string(name) + "' (fig2|fig3|fig4|sm1)");
  const auto data = compute_figure(*spec, cfg, jobs);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto path = out_dir / (std::string(name) + ".csv");
  std::ofstream file(path);
  if (!file) throw Error("cannot write '" + path.string() + "'");
  write_figure_csv(file, data, cfg);
  if (!file) throw Error("I/O error writing '" + path.string() + "'");
  return path;
}

}  // namespace optomw
