#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fracelast/compare.hpp"
#include "fracelast/dispersion.hpp"
#include "fracelast/errors.hpp"
#include "fracelast/green.hpp"
#include "fracelast/io.hpp"
#include "fracelast/lattice.hpp"
#include "fracelast/version.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Context {
  fs::path out_dir = ".";
  int threads = 0;           // 0 = auto
  double tol = -1.0;         // < 0: command defaults
  std::string config_hash;
  ordered_json config;
  std::string command;
};

ordered_json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fracelast::validation_error("cannot open config file: " + path);
  try {
    return ordered_json::parse(in);
  } catch (const json::exception& e) {
    throw fracelast::validation_error(std::string("config parse error: ") + e.what());
  }
}

template <typename T>
T require(const ordered_json& cfg, const std::string& key) {
  if (!cfg.contains(key))
    throw fracelast::validation_error("config missing required key: " + key);
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw fracelast::validation_error("config key '" + key + "': " + e.what());
  }
}

template <typename T>
T value_or(const ordered_json& cfg, const std::string& key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw fracelast::validation_error("config key '" + key + "': " + e.what());
  }
}

fracelast::DispersionLaw parse_law(const ordered_json& cfg) {
  if (!cfg.contains("law"))
    throw fracelast::validation_error("config missing required key: law");
  return fracelast::law_from_json(cfg.at("law").dump());
}

std::ofstream open_output(const Context& ctx, const std::string& name, bool binary,
                          std::vector<fs::path>* written) {
  fs::create_directories(ctx.out_dir);
  const fs::path path = ctx.out_dir / name;
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw fracelast::validation_error("cannot open output file: " + path.string());
  if (!binary)
    out << "# fracelast " << fracelast::version_string << " config=" << ctx.config_hash
        << "\n";
  if (written) written->push_back(path);
  return out;
}

ordered_json generator_block(const Context& ctx) {
  ordered_json g;
  g["tool"] = "fracelast";
  g["version"] = fracelast::version_string;
  g["command"] = ctx.command;
  g["config_hash"] = ctx.config_hash;
  return g;
}

void write_sidecar(const Context& ctx, const std::string& name, ordered_json body) {
  fs::create_directories(ctx.out_dir);
  ordered_json doc;
  doc["generator"] = generator_block(ctx);
  doc["config"] = ctx.config;
  for (auto& [k, v] : body.items()) doc[k] = v;
  std::ofstream out(ctx.out_dir / name);
  if (!out)
    throw fracelast::validation_error("cannot open output file: " +
                                      (ctx.out_dir / name).string());
  out << doc.dump(2) << "\n";
}

void parallel_for(int threads, std::size_t count,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---- kernel / spec parsing shared by simulate and static ----

struct ParsedLattice {
  fracelast::LatticeSpec spec;
  std::optional<fracelast::DispersionLaw> law;
  std::optional<fracelast::SynthesisResult> synthesis;
};

ParsedLattice parse_lattice(const ordered_json& cfg) {
  ParsedLattice out;
  out.spec.mass = value_or(cfg, "mass", 1.0);
  out.spec.coupling = value_or(cfg, "coupling", 1.0);
  out.spec.particle_count = require<int>(cfg, "particle_count");
  const double spacing = value_or(cfg, "spacing", 1.0);

  if (!cfg.contains("kernel"))
    throw fracelast::validation_error("config missing required key: kernel");
  const ordered_json& k = cfg.at("kernel");
  if (k.contains("coefficients")) {
    out.spec.kernel.coefficients = k.at("coefficients").get<std::vector<double>>();
    out.spec.kernel.spacing = spacing;
  } else if (k.contains("law")) {
    fracelast::DispersionLaw law = fracelast::law_from_json(k.at("law").dump());
    fracelast::SynthesisOptions options;
    options.flatten = value_or(k, "flatten", true);
    out.synthesis = fracelast::synthesize_kernel(law, spacing,
                                                 require<int>(k, "n_max"), options);
    out.spec.kernel = out.synthesis->kernel;
    out.law = std::move(law);
  } else {
    throw fracelast::validation_error("kernel needs either 'coefficients' or 'law'");
  }
  out.spec.validate();
  return out;
}

fracelast::BoundaryMode parse_boundary(const ordered_json& cfg) {
  const std::string b = value_or<std::string>(cfg, "boundary", "periodic");
  if (b == "periodic") return fracelast::BoundaryMode::periodic;
  if (b == "fixed") return fracelast::BoundaryMode::fixed;
  throw fracelast::validation_error("boundary must be 'periodic' or 'fixed'");
}

fracelast::QuadratureConfig parse_quadrature(const Context& ctx, const ordered_json& cfg) {
  fracelast::QuadratureConfig q;
  if (cfg.contains("quadrature")) {
    const ordered_json& j = cfg.at("quadrature");
    q.rel_tol = value_or(j, "rel_tol", q.rel_tol);
    q.max_half_periods = value_or(j, "max_half_periods", q.max_half_periods);
    q.small_lambda_panels = value_or(j, "small_lambda_panels", q.small_lambda_panels);
    const std::string acc = value_or<std::string>(j, "acceleration", "alternating");
    if (acc == "alternating")
      q.acceleration = fracelast::OscAcceleration::alternating;
    else if (acc == "none")
      q.acceleration = fracelast::OscAcceleration::none;
    else
      throw fracelast::validation_error("acceleration must be 'alternating' or 'none'");
  }
  if (ctx.tol > 0.0) q.rel_tol = ctx.tol;
  q.validate();
  return q;
}

fracelast::ContinuumParams parse_continuum(const ordered_json& cfg) {
  fracelast::ContinuumParams p;
  p.density = value_or(cfg, "density", 1.0);
  p.force_magnitude = value_or(cfg, "force_magnitude", 1.0);
  p.dimension = value_or(cfg, "dimension", 3);
  if (!cfg.contains("terms"))
    throw fracelast::validation_error("config missing required key: terms");
  for (const auto& t : cfg.at("terms"))
    p.terms.push_back({require<double>(t, "alpha"), require<double>(t, "c")});
  p.validate();
  return p;
}

std::vector<double> make_r_grid(const ordered_json& cfg) {
  const double r_min = require<double>(cfg, "r_min");
  const double r_max = require<double>(cfg, "r_max");
  const int count = value_or(cfg, "r_count", 50);
  if (!(r_min > 0.0) || !(r_max > r_min) || count < 1)
    throw fracelast::validation_error("need 0 < r_min < r_max and r_count >= 1");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0
                                : static_cast<double>(i) / static_cast<double>(count - 1);
    grid.push_back(r_min * std::pow(r_max / r_min, f));
  }
  return grid;
}

// ---- commands ----

int cmd_dispersion(const Context& ctx) {
  const ordered_json& cfg = ctx.config;
  const fracelast::DispersionLaw law = parse_law(cfg);
  const double spacing = value_or(cfg, "spacing", 1.0);
  const int n_max = require<int>(cfg, "n_max");
  fracelast::SynthesisOptions options;
  options.flatten = value_or(cfg, "flatten", true);
  if (ctx.tol > 0.0) options.abs_tol = ctx.tol;
  const fracelast::SynthesisResult synth =
      fracelast::synthesize_kernel(law, spacing, n_max, options);

  const double k_lo = value_or(cfg, "k_min", 0.01 / spacing);
  const double k_hi = value_or(cfg, "k_max", 0.5 / spacing);
  const int k_count = value_or(cfg, "k_count", 100);
  if (!(k_lo > 0.0) || !(k_hi > k_lo) || k_count < 2)
    throw fracelast::validation_error("need 0 < k_min < k_max and k_count >= 2");

  std::vector<fs::path> written;
  {
    auto out = open_output(ctx, "dispersion.csv", false, &written);
    out << "k,target,lattice,rel_err\n";
    for (int i = 0; i < k_count; ++i) {
      const double k = k_lo + (k_hi - k_lo) * static_cast<double>(i) /
                                  static_cast<double>(k_count - 1);
      const double target = -fracelast::eval_target_dispersion(law, k * spacing);
      const double lattice = fracelast::eval_lattice_dispersion(synth.kernel, k);
      const double rel = target != 0.0 ? std::abs(lattice - target) / std::abs(target)
                                       : std::abs(lattice);
      out << fracelast::format_double(k) << "," << fracelast::format_double(target)
          << "," << fracelast::format_double(lattice) << ","
          << fracelast::format_double(rel) << "\n";
    }
  }
  {
    auto out = open_output(ctx, "kernel.csv", false, &written);
    fracelast::write_kernel_csv(out, synth.kernel);
  }
  ordered_json body;
  body["law"] = json::parse(fracelast::law_to_json(law));
  body["k_hat_zero_synthesized"] = fracelast::khat_zero(synth.kernel);
  body["roundtrip_max_rel_error"] = synth.roundtrip_max_rel_error;
  body["quadrature_error"] = synth.quadrature_error;
  write_sidecar(ctx, "dispersion.json", std::move(body));
  return 0;
}

int cmd_simulate(const Context& ctx) {
  const ordered_json& cfg = ctx.config;
  ParsedLattice lat = parse_lattice(cfg);
  const fracelast::BoundaryMode boundary = parse_boundary(cfg);
  const double dt = require<double>(cfg, "dt");
  const int steps = require<int>(cfg, "steps");
  const int output_every = value_or(cfg, "output_every", 1);
  if (steps < 1 || output_every < 1)
    throw fracelast::validation_error("steps and output_every must be >= 1");
  const std::string format = value_or<std::string>(cfg, "trajectory_format", "csv");
  if (format != "csv" && format != "binary")
    throw fracelast::validation_error("trajectory_format must be 'csv' or 'binary'");

  const std::size_t n = static_cast<std::size_t>(lat.spec.particle_count);
  fracelast::LatticeState state;
  state.displacements.assign(n, 0.0);
  state.velocities.assign(n, 0.0);
  if (cfg.contains("initial")) {
    const ordered_json& init = cfg.at("initial");
    if (init.contains("mode")) {
      const int mode = init.at("mode").get<int>();
      const double amp = value_or(init, "amplitude", 1.0);
      for (std::size_t i = 0; i < n; ++i)
        state.displacements[i] =
            amp * std::cos(2.0 * M_PI * static_cast<double>(mode) *
                           static_cast<double>(i) / static_cast<double>(n));
    } else {
      if (init.contains("displacements"))
        state.displacements = init.at("displacements").get<std::vector<double>>();
      if (init.contains("velocities"))
        state.velocities = init.at("velocities").get<std::vector<double>>();
    }
  }
  state.validate(lat.spec);

  fracelast::ExternalForce force;
  if (cfg.contains("force")) force.values = cfg.at("force").get<std::vector<double>>();

  const double omega_max = fracelast::max_frequency(lat.spec);
  std::vector<fs::path> written;
  std::vector<std::vector<double>> frames;
  std::ostringstream energy;
  std::ostringstream traj;

  const auto record = [&](const fracelast::LatticeState& s) {
    energy << fracelast::format_double(s.time) << ","
           << fracelast::format_double(fracelast::total_energy(lat.spec, s, boundary))
           << "\n";
    if (format == "csv") {
      for (std::size_t i = 0; i < n; ++i)
        traj << fracelast::format_double(s.time) << "," << i << ","
             << fracelast::format_double(s.displacements[i]) << ","
             << fracelast::format_double(s.velocities[i]) << "\n";
    } else {
      frames.push_back(s.displacements);
    }
  };

  record(state);
  for (int step = 1; step <= steps; ++step) {
    state = fracelast::step_dynamics(lat.spec, state, force, dt, boundary, omega_max);
    if (step % output_every == 0 || step == steps) record(state);
  }

  {
    auto out = open_output(ctx, "energy.csv", false, &written);
    out << "t,E\n" << energy.str();
  }
  if (format == "csv") {
    auto out = open_output(ctx, "trajectory.csv", false, &written);
    out << "t,n,u,v\n" << traj.str();
  } else {
    auto out = open_output(ctx, "trajectory.bin", true, &written);
    fracelast::write_trajectory_binary(out, frames);
  }
  ordered_json body;
  body["omega_max"] = omega_max;
  body["dt_omega_max"] = dt * omega_max;
  if (lat.synthesis) {
    body["roundtrip_max_rel_error"] = lat.synthesis->roundtrip_max_rel_error;
  }
  write_sidecar(ctx, "simulate.json", std::move(body));
  return 0;
}

int cmd_static(const Context& ctx) {
  const ordered_json& cfg = ctx.config;
  ParsedLattice lat = parse_lattice(cfg);
  fracelast::StaticOptions options;
  options.boundary = parse_boundary(cfg);
  options.pinned_site = value_or(cfg, "pinned_site", 0);
  if (ctx.tol > 0.0) options.rel_residual = ctx.tol;

  fracelast::ExternalForce force;
  if (!cfg.contains("force"))
    throw fracelast::validation_error("config missing required key: force");
  force.values = cfg.at("force").get<std::vector<double>>();

  const std::vector<double> u = fracelast::solve_static(lat.spec, force, options);

  std::vector<fs::path> written;
  {
    auto out = open_output(ctx, "static.csv", false, &written);
    out << "n,x,u\n";
    for (std::size_t i = 0; i < u.size(); ++i)
      out << i << ","
          << fracelast::format_double(static_cast<double>(i) * lat.spec.kernel.spacing)
          << "," << fracelast::format_double(u[i]) << "\n";
  }
  ordered_json body;
  if (lat.synthesis)
    body["roundtrip_max_rel_error"] = lat.synthesis->roundtrip_max_rel_error;
  write_sidecar(ctx, "static.json", std::move(body));
  return 0;
}

int cmd_green(const Context& ctx) {
  const ordered_json& cfg = ctx.config;
  const fracelast::ContinuumParams params = parse_continuum(cfg);
  const fracelast::QuadratureConfig quad = parse_quadrature(ctx, cfg);
  const std::vector<double> grid = make_r_grid(cfg);

  std::vector<fracelast::GreenValue> values(grid.size());
  std::vector<std::string> failures(grid.size());
  parallel_for(ctx.threads, grid.size(), [&](std::size_t i) {
    try {
      values[i] = fracelast::displacement_point_force(params, grid[i], quad);
    } catch (const fracelast::numerical_error& e) {
      failures[i] = e.what();
    }
  });
  std::string failed_rs;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!failures[i].empty())
      failed_rs += (failed_rs.empty() ? "" : ", ") + fracelast::format_double(grid[i]);
  if (!failed_rs.empty())
    throw fracelast::numerical_error("green quadrature failed at r = {" + failed_rs + "}");

  std::vector<fs::path> written;
  {
    auto out = open_output(ctx, "green.csv", false, &written);
    out << "r,u,remainder_estimate\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      out << fracelast::format_double(grid[i]) << ","
          << fracelast::format_double(values[i].value) << ","
          << fracelast::format_double(values[i].remainder) << "\n";
  }
  double worst = 0.0;
  for (const auto& v : values) worst = std::max(worst, v.remainder);
  ordered_json body;
  body["max_remainder_estimate"] = worst;
  body["rel_tol"] = quad.rel_tol;
  write_sidecar(ctx, "green.json", std::move(body));
  return 0;
}

int cmd_asymptote(const Context& ctx) {
  const ordered_json& cfg = ctx.config;
  const fracelast::ContinuumParams params = parse_continuum(cfg);
  const fracelast::QuadratureConfig quad = parse_quadrature(ctx, cfg);
  const std::string branch = require<std::string>(cfg, "branch");
  if (branch != "far" && branch != "near")
    throw fracelast::validation_error("branch must be 'far' or 'near'");
  const std::vector<double> grid = make_r_grid(cfg);
  const int k_max = value_or(cfg, "k_max", 4);

  std::vector<double> u_quad(grid.size());
  std::vector<double> u_asym(grid.size());
  parallel_for(ctx.threads, grid.size(), [&](std::size_t i) {
    u_quad[i] = fracelast::displacement_point_force(params, grid[i], quad).value;
    u_asym[i] = branch == "far"
                    ? fracelast::farfield_series(params, grid[i], k_max).value
                    : fracelast::nearfield_gradient(params, grid[i]);
  });

  std::vector<fs::path> written;
  {
    auto out = open_output(ctx, "asymptote.csv", false, &written);
    out << "r,u_quad,u_asym,rel_dev\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double rel = u_asym[i] != 0.0
                             ? std::abs(u_quad[i] - u_asym[i]) / std::abs(u_asym[i])
                             : std::abs(u_quad[i]);
      out << fracelast::format_double(grid[i]) << ","
          << fracelast::format_double(u_quad[i]) << ","
          << fracelast::format_double(u_asym[i]) << ","
          << fracelast::format_double(rel) << "\n";
    }
  }
  const fracelast::PowerLawFit fit = fracelast::fit_power_law(
      grid, [&] {
        std::vector<double> mags;
        mags.reserve(u_quad.size());
        for (double v : u_quad) mags.push_back(std::abs(v));
        return mags;
      }());
  ordered_json body;
  body["branch"] = branch;
  body["fitted_exponent"] = fit.exponent;
  body["fitted_prefactor"] = fit.prefactor;
  body["r_squared"] = fit.r_squared;
  write_sidecar(ctx, "asymptote.json", std::move(body));
  return 0;
}

int cmd_compare(const Context& ctx) {
  const ordered_json& cfg = ctx.config;
  fracelast::StudyConfig study;
  study.law = parse_law(cfg);
  study.coupling = value_or(cfg, "coupling", -1.0);
  study.mass = value_or(cfg, "mass", 1.0);
  study.domain_length = value_or(cfg, "domain_length", 64.0);
  study.particle_counts = require<std::vector<int>>(cfg, "particle_counts");
  study.nmax_fraction = value_or(cfg, "nmax_fraction", 0.45);
  study.force_amplitude = value_or(cfg, "force_amplitude", 1.0);
  study.window_margin = value_or(cfg, "window_margin", 10);
  study.oversample = value_or(cfg, "oversample", 8);
  study.refinement_n_max =
      value_or<std::vector<int>>(cfg, "refinement_n_max", {});
  study.refinement_particle_count = value_or(cfg, "refinement_particle_count", 0);

  const fracelast::ConvergenceReport report = fracelast::static_convergence_study(study);

  std::vector<fs::path> written;
  {
    auto out = open_output(ctx, "convergence.csv", false, &written);
    out << "dx,N,err_max,err_l2,order\n";
    for (const auto& row : report.rows)
      out << fracelast::format_double(row.dx) << "," << row.particle_count << ","
          << fracelast::format_double(row.err_max) << ","
          << fracelast::format_double(row.err_l2) << ","
          << (std::isnan(row.order) ? std::string("nan")
                                    : fracelast::format_double(row.order))
          << "\n";
  }
  ordered_json body;
  body["monotone"] = report.monotone;
  body["truncation_refinement"] = ordered_json::array();
  for (const auto& row : report.truncation_rows)
    body["truncation_refinement"].push_back(
        {{"n_max", row.n_max}, {"err_max", row.err_max}, {"err_l2", row.err_l2}});
  write_sidecar(ctx, "convergence.json", std::move(body));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracelast: lattice models with power-law dispersion and their "
               "fractional-elasticity continuum limit"};
  app.set_version_flag("--version", std::string("fracelast ") + fracelast::version_string);
  app.require_subcommand(1);

  std::string config_path;
  Context ctx;
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", ctx.out_dir, "output directory");
  app.add_option("--threads", ctx.threads, "worker threads (0 = auto)");
  app.add_option("--tol", ctx.tol, "tolerance override");

  for (const char* name : {"dispersion", "simulate", "static", "green", "asymptote",
                           "compare"})
    app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
    json err;
    err["error"] = "validation";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }

  try {
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.config = load_config(config_path);
    // flags override file values
    if (ctx.config.contains("threads") && ctx.threads == 0)
      ctx.threads = ctx.config.at("threads").get<int>();
    if (ctx.config.contains("tol") && ctx.tol < 0.0)
      ctx.tol = ctx.config.at("tol").get<double>();
    ctx.config_hash = fracelast::hash_hex(fracelast::fnv1a_hash(ctx.config.dump()));

    if (ctx.command == "dispersion") return cmd_dispersion(ctx);
    if (ctx.command == "simulate") return cmd_simulate(ctx);
    if (ctx.command == "static") return cmd_static(ctx);
    if (ctx.command == "green") return cmd_green(ctx);
    if (ctx.command == "asymptote") return cmd_asymptote(ctx);
    if (ctx.command == "compare") return cmd_compare(ctx);
    throw fracelast::validation_error("unknown command");
  } catch (const fracelast::validation_error& e) {
    json err;
    err["error"] = "validation";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const fracelast::numerical_error& e) {
    json err;
    err["error"] = "numerical";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    json err;
    err["error"] = "internal";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
