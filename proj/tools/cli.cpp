#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "galpha/amplification.hpp"
#include "galpha/csv.hpp"
#include "galpha/error.hpp"
#include "galpha/integrator.hpp"
#include "galpha/orderlab.hpp"
#include "galpha/schemes.hpp"
#include "galpha/stability.hpp"

namespace galpha::cli {

namespace {

namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Manifest = std::map<std::string, std::string>;

struct SchemeOptions {
  int p = 3;
  std::string variant = "equal";
  std::optional<double> alpha_m;
  std::optional<double> alpha_f;
  std::optional<double> rho_inf;
  std::optional<std::string> branch;
};

void add_scheme_options(CLI::App* cmd, SchemeOptions& o) {
  cmd->add_option("--p", o.p, "order of the scheme (2..11)");
  cmd->add_option("--variant", o.variant, "gamma rule: equal or remark1");
  cmd->add_option("--alpha-m", o.alpha_m, "alpha_m");
  cmd->add_option("--alpha-f", o.alpha_f, "alpha_f");
  cmd->add_option("--rho-inf", o.rho_inf, "high-frequency radius in [0, 1]");
  cmd->add_option("--branch", o.branch, "rho branch for p = 3: main, alt1, alt2, alt3");
}

std::string num(double x) { return format_number(x); }

std::string quoted(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += (c == '\n') ? ' ' : c;
  }
  return out;
}

SchemeParams resolve_scheme(const SchemeOptions& o, Manifest& m, std::ostream& err) {
  Variant variant;
  try {
    variant = parse_variant(o.variant);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (o.alpha_m.has_value() != o.alpha_f.has_value())
    throw ConfigError("--alpha-m and --alpha-f must be given together");
  if (o.alpha_m && o.rho_inf)
    throw ConfigError("give either --alpha-m/--alpha-f or --rho-inf, not both");
  if (o.branch && o.p != 3) throw ConfigError("--branch applies to p = 3 only");
  if (o.branch && o.alpha_m) throw ConfigError("--branch needs --rho-inf, not explicit alphas");

  double am = 0.0;
  double af = 0.0;
  if (o.alpha_m) {
    am = *o.alpha_m;
    af = *o.alpha_f;
    m["parameter_source"] = "alphas";
  } else if (variant == Variant::RemarkOne) {
    if (o.rho_inf) throw ConfigError("--rho-inf is not defined for the remark1 variant");
    am = 2.0 / 3.0;
    af = 1.0 / 3.0;
    m["parameter_source"] = "default";
  } else if (o.p >= 4) {
    if (o.rho_inf) throw ConfigError("--rho-inf is only defined for p = 2 and p = 3");
    am = 2.0;
    af = 0.6;
    m["parameter_source"] = "default";
  } else {
    const double rho = o.rho_inf.value_or(0.5);
    m["parameter_source"] = o.rho_inf ? "rho_inf" : "default_rho_inf";
    m["rho_inf"] = num(rho);
    AlphaPair a{};
    if (o.p == 2) {
      a = second_order_params_from_rho(rho);
    } else {
      RhoBranch b = RhoBranch::Main;
      if (o.branch) {
        try {
          b = parse_branch(*o.branch);
        } catch (const Error& e) {
          throw ConfigError(e.what());
        }
      }
      m["branch"] = std::string(to_string(b));
      a = params_from_rho(rho, b);
    }
    am = a.alpha_m;
    af = a.alpha_f;
  }

  SchemeParams s = make_scheme(o.p, am, af, variant);
  m["p"] = std::to_string(s.p);
  m["variant"] = std::string(to_string(s.variant));
  m["alpha_m"] = num(s.alpha_m);
  m["alpha_f"] = num(s.alpha_f);
  for (std::size_t j = 0; j < s.gammas.size(); ++j)
    m[fmt::format("gamma_{}", j + 1)] = num(s.gammas[j]);

  if (s.p == 3 && s.variant == Variant::EqualGamma && !in_stability_region(am, af))
    err << fmt::format(
        "warning: (alpha_m, alpha_f) = ({}, {}) lies outside the unconditional stability "
        "region alpha_m >= 7/12, 1/2 <= alpha_f <= alpha_m - 1/12; continuing\n",
        num(am), num(af));
  if (s.p >= 4) {
    double r0 = 0.0;
    try {
      r0 = spectral_radius(amplification_matrix(s, 0.0));
    } catch (const Error&) {
    }
    if (r0 > 1.0 + 1e-9)
      err << fmt::format(
          "warning: G(0) has spectral radius {:.6g} > 1 at (alpha_m, alpha_f) = ({:.6g}, {:.6g}); the "
          "scheme is zero-unstable and will not converge\n",
          r0, am, af);
  }
  return s;
}

double parse_real(const std::string& text, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size())
    throw ConfigError(fmt::format("cannot read {} from '{}'", what, text));
  return v;
}

Complex parse_lambda(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_real(text, "lambda"), 0.0};
  return {parse_real(text.substr(0, comma), "Re(lambda)"),
          parse_real(text.substr(comma + 1), "Im(lambda)")};
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw ConfigError(fmt::format("cannot create output directory '{}'", dir));
  return fs::path(dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  return f;
}

void write_manifest(const fs::path& dir, const Manifest& m) {
  std::ofstream f = open_out(dir / "manifest.txt");
  for (const auto& [k, v] : m) f << k << " = " << v << '\n';
}

// ---------------------------------------------------------------- integrate

struct IntegrateOptions {
  SchemeOptions scheme;
  std::string lambda = "1";
  std::optional<std::size_t> heat_n;
  double kappa = 1.0;
  double tau = 0.1;
  double t_end = 1.0;
  std::string out = ".";
};

int cmd_integrate(const IntegrateOptions& o, std::ostream& out, std::ostream& err) {
  Manifest m;
  m["command"] = "integrate";
  const SchemeParams s = resolve_scheme(o.scheme, m, err);
  if (!(o.tau > 0.0)) throw ConfigError("--tau must be positive");
  if (!(o.t_end >= o.tau)) throw ConfigError("--t-end must be at least --tau");
  m["tau"] = num(o.tau);
  m["t_end"] = num(o.t_end);

  LinearProblem prob;
  CVector u0;
  CVector exact;
  const fs::path dir = prepare_out(o.out);
  m["out"] = o.out;
  if (o.heat_n) {
    if (*o.heat_n < 2) throw ConfigError("--heat-n must be at least 2");
    if (!(o.kappa > 0.0)) throw ConfigError("--kappa must be positive");
    prob = heat_problem(*o.heat_n, o.kappa);
    const double h = 1.0 / static_cast<double>(*o.heat_n + 1);
    // sin(pi x) is an eigenvector of the discrete Laplacian.
    const double mu = 4.0 * o.kappa / (h * h) * std::pow(std::sin(std::numbers::pi * h / 2.0), 2);
    for (double x : heat_grid(*o.heat_n)) u0.emplace_back(std::sin(std::numbers::pi * x), 0.0);
    const double t_final = o.tau * std::round(o.t_end / o.tau);
    for (const Complex& v : u0) exact.push_back(v * std::exp(-mu * t_final));
    m["problem"] = "heat";
    m["heat_n"] = std::to_string(*o.heat_n);
    m["kappa"] = num(o.kappa);
  } else {
    const Complex lambda = parse_lambda(o.lambda);
    prob = scalar_problem(lambda);
    u0 = {Complex(1.0, 0.0)};
    m["problem"] = "scalar";
    m["lambda_re"] = num(lambda.real());
    m["lambda_im"] = num(lambda.imag());
  }

  const Trajectory tr = integrate(s, prob, u0, o.tau, o.t_end);
  {
    std::ofstream f = open_out(dir / "trajectory.csv");
    write_trajectory_csv(tr, f);
  }
  write_manifest(dir, m);

  out << fmt::format("steps = {}\n", tr.t.size() - 1);
  if (o.heat_n) {
    double error = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i)
      error = std::max(error, std::abs(tr.u.back()[i] - exact[i]));
    out << fmt::format("final error (max over grid, vs semi-discrete solution) = {}\n",
                       num(error));
  } else {
    const Complex lambda = parse_lambda(o.lambda);
    const Complex ref = std::exp(-lambda * tr.t.back());
    out << fmt::format("final u = {} {:+.17g}i\n", num(tr.u.back()[0].real()),
                       tr.u.back()[0].imag());
    out << fmt::format("final error vs exp(-lambda t) = {}\n",
                       num(std::abs(tr.u.back()[0] - ref)));
  }
  out << fmt::format("wrote {}\n", (dir / "trajectory.csv").string());
  return 0;
}

// ------------------------------------------------------------ stability-map

struct MapOptions {
  std::string variant = "equal";
  std::size_t grid = 200;
  bool rays = false;
  unsigned threads = 0;
  std::string out = ".";
};

void write_stability_plot(const GridSpec& g, std::ostream& f) {
  const double top = g.alpha_m_max;
  f << "# gnuplot script for stability.csv\n"
       "set datafile separator ','\n"
       "set xlabel 'alpha_f'\n"
       "set ylabel 'alpha_m'\n"
    << fmt::format("set xrange [{}:{}]\n", num(g.alpha_f_min), num(g.alpha_f_max))
    << fmt::format("set yrange [{}:{}]\n", num(g.alpha_m_min), num(g.alpha_m_max))
    << "set size square\n"
       "set key bottom right\n"
       "plot 'stability.csv' skip 1 using 2:($4 == 1 ? $1 : 1/0) with points pt 5 ps 0.5 "
       "lc rgb '#9ecae1' title 'stable', \\\n"
       "     '-' with lines lw 2 lc rgb 'black' title 'alpha_m >= 7/12, 1/2 <= alpha_f <= "
       "alpha_m - 1/12'\n"
    << fmt::format("0.5 {}\n0.5 {}\n{} {}\ne\n", num(top), num(7.0 / 12.0),
                   num(top - 1.0 / 12.0), num(top));
}

int cmd_stability_map(const MapOptions& o, std::ostream& out) {
  Manifest m;
  m["command"] = "stability-map";
  Variant variant;
  try {
    variant = parse_variant(o.variant);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (o.grid < 2) throw ConfigError("--grid must be at least 2");
  GridSpec g;
  g.n_alpha_m = o.grid;
  g.n_alpha_f = o.grid;
  const TSampleSpec spec = o.rays ? TSampleSpec::with_complex_rays() : TSampleSpec{};
  const fs::path dir = prepare_out(o.out);

  m["p"] = "3";
  m["variant"] = std::string(to_string(variant));
  m["grid"] = std::to_string(o.grid);
  m["alpha_m_range"] = num(g.alpha_m_min) + "," + num(g.alpha_m_max);
  m["alpha_f_range"] = num(g.alpha_f_min) + "," + num(g.alpha_f_max);
  m["t_real_samples"] = std::to_string(spec.n_real);
  m["t_magnitude_range"] = num(spec.magnitude_min) + "," + num(spec.magnitude_max);
  m["t_rays"] = o.rays ? "on" : "off";
  m["threads"] = std::to_string(o.threads);
  m["out"] = o.out;

  const StabilityMap map = scan_region(variant, g, spec.samples(), o.threads);
  {
    std::ofstream f = open_out(dir / "stability.csv");
    write_stability_csv(map, f);
  }
  {
    std::ofstream f = open_out(dir / "stability.plot");
    write_stability_plot(g, f);
  }
  write_manifest(dir, m);

  out << fmt::format("stable cells = {} of {}\n", map.stable_count(), map.cells.size());
  if (variant == Variant::EqualGamma) {
    const RegionComparison c = compare_with_closed_form(map);
    out << fmt::format("agreement with closed-form region = {:.4f} ({} cells off the boundary "
                       "disagree)\n",
                       c.agreement(), c.off_boundary);
  }
  out << fmt::format("wrote {}\n", (dir / "stability.csv").string());
  return 0;
}

// ---------------------------------------------------------------- rho-curve

struct RhoOptions {
  std::size_t n_points = 101;
  std::string out = ".";
};

void write_rho_plot(std::ostream& f) {
  f << "# gnuplot script for rho_curves.csv\n"
       "set datafile separator ','\n"
       "set xlabel 'alpha_f'\n"
       "set ylabel 'alpha_m'\n"
       "set key outside\n"
       "plot for [b in 'main alt1 alt2 alt3'] 'rho_curves.csv' skip 1 "
       "using (strcol(1) eq b ? $4 : 1/0):3 with linespoints pt 7 ps 0.4 title b\n";
}

int cmd_rho_curve(const RhoOptions& o, std::ostream& out) {
  if (o.n_points < 2) throw ConfigError("--n-points must be at least 2");
  Manifest m;
  m["command"] = "rho-curve";
  m["n_points"] = std::to_string(o.n_points);
  m["branches"] = "main,alt1,alt2,alt3";
  m["out"] = o.out;
  const fs::path dir = prepare_out(o.out);

  std::vector<RhoSample> all;
  for (RhoBranch b : kAllBranches) {
    const std::vector<RhoSample> curve = rho_curve(b, o.n_points);
    std::size_t defined = 0;
    std::size_t inside = 0;
    double worst = 0.0;
    for (const RhoSample& s : curve) {
      if (s.pole) continue;
      ++defined;
      if (s.inside_region) ++inside;
      worst = std::max(worst, s.max_eig_inf ? std::abs(*s.max_eig_inf - s.rho)
                                            : std::numeric_limits<double>::infinity());
    }
    out << fmt::format("{}: {} samples, {} poles, {} inside region, max |max_eig_inf - rho| = {}\n",
                       to_string(b), curve.size(), curve.size() - defined, inside, num(worst));
    all.insert(all.end(), curve.begin(), curve.end());
  }
  {
    std::ofstream f = open_out(dir / "rho_curves.csv");
    write_rho_curves_csv(all, f);
  }
  {
    std::ofstream f = open_out(dir / "rho_curves.plot");
    write_rho_plot(f);
  }
  write_manifest(dir, m);
  out << fmt::format("wrote {}\n", (dir / "rho_curves.csv").string());
  return 0;
}

// -------------------------------------------------------------- order-check

struct OrderOptions {
  SchemeOptions scheme;
  std::string lambda = "1";
  double t_end = 2.0;
  int tau_exp_min = 3;
  int tau_exp_max = 8;
  bool recover_c = false;
  std::string out = ".";
};

int cmd_order_check(const OrderOptions& o, std::ostream& out, std::ostream& err) {
  Manifest m;
  m["command"] = "order-check";
  const SchemeParams s = resolve_scheme(o.scheme, m, err);
  const Complex lambda = parse_lambda(o.lambda);
  if (!(o.t_end > 0.0)) throw ConfigError("--t-end must be positive");
  if (o.tau_exp_min < 0 || o.tau_exp_max <= o.tau_exp_min || o.tau_exp_max > 30)
    throw ConfigError("need 0 <= --tau-exp-min < --tau-exp-max <= 30");
  m["lambda_re"] = num(lambda.real());
  m["lambda_im"] = num(lambda.imag());
  m["t_end"] = num(o.t_end);
  m["tau_exp_min"] = std::to_string(o.tau_exp_min);
  m["tau_exp_max"] = std::to_string(o.tau_exp_max);
  m["recover_c"] = o.recover_c ? "on" : "off";
  m["out"] = o.out;
  const fs::path dir = prepare_out(o.out);

  const ConvergenceReport rep =
      measure_order(s, lambda, o.t_end, dyadic_taus(o.tau_exp_min, o.tau_exp_max));
  {
    std::ofstream f = open_out(dir / "convergence.csv");
    write_convergence_csv(rep, f);
  }
  out << fmt::format("expected order = {}\n", s.p);
  out << fmt::format("slope = {:.6f}\n", rep.slope);

  if (o.recover_c) {
    const RecoverOptions ro;
    m["recover_alpha_m"] = num(ro.alpha_m);
    m["recover_alpha_f"] = num(ro.alpha_f);
    m["recover_T0"] = num(ro.T0);
    m["recover_levels"] = std::to_string(ro.levels);
    const double c = recover_C(s.p, ro);
    const Rational t = c_of_p(s.p);
    out << fmt::format("recovered C({}) = {:.15f}\n", s.p, c);
    out << fmt::format("table C({}) = {}/{} = {:.15f}\n", s.p, t.num, t.den, t.value());
    out << fmt::format("|C - table| = {:.3e}\n", std::abs(c - t.value()));
  }
  write_manifest(dir, m);
  out << fmt::format("wrote {}\n", (dir / "convergence.csv").string());
  return 0;
}

bool is_validation(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::OutOfTable:
    case ErrorCode::VariantUnsupported:
    case ErrorCode::PoleAtRho:
    case ErrorCode::DimensionMismatch:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"generalized-alpha time integrators: runs, stability maps, rho curves, order checks",
               "galpha"};
  app.require_subcommand(1);

  IntegrateOptions io;
  auto* integ = app.add_subcommand("integrate", "integrate u' + A u = 0 and write trajectory.csv");
  add_scheme_options(integ, io.scheme);
  auto* lam = integ->add_option("--lambda", io.lambda, "scalar lambda as RE[,IM]");
  auto* heat = integ->add_option("--heat-n", io.heat_n, "heat equation with n interior points");
  integ->add_option("--kappa", io.kappa, "diffusivity for the heat problem");
  integ->add_option("--tau", io.tau, "step size");
  integ->add_option("--t-end", io.t_end, "final time");
  integ->add_option("--out", io.out, "output directory");
  lam->excludes(heat);

  MapOptions mo;
  auto* smap = app.add_subcommand("stability-map", "scan (alpha_m, alpha_f) for p = 3");
  smap->add_option("--variant", mo.variant, "gamma rule: equal or remark1");
  smap->add_option("--grid", mo.grid, "cells per axis");
  smap->add_flag("--rays", mo.rays, "also sample T on complex rays");
  smap->add_option("--threads", mo.threads, "worker threads (0 = all cores)");
  smap->add_option("--out", mo.out, "output directory");

  RhoOptions ro;
  auto* rho = app.add_subcommand("rho-curve", "alpha pairs against rho_inf on all four branches");
  rho->add_option("--n-points", ro.n_points, "samples per branch");
  rho->add_option("--out", ro.out, "output directory");

  OrderOptions oo;
  auto* order = app.add_subcommand("order-check", "measure the convergence order");
  add_scheme_options(order, oo.scheme);
  order->add_option("--lambda", oo.lambda, "scalar lambda as RE[,IM]");
  order->add_option("--t-end", oo.t_end, "final time");
  order->add_option("--tau-exp-min", oo.tau_exp_min, "largest step is 2^-min");
  order->add_option("--tau-exp-max", oo.tau_exp_max, "smallest step is 2^-max");
  order->add_flag("--recover-c", oo.recover_c, "recover C(p) from the principal eigenvalue");
  order->add_option("--out", oo.out, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << fmt::format("error: code=InvalidConfig message=\"{}\"\n", quoted(e.what()));
    return 2;
  }

  try {
    if (integ->parsed()) return cmd_integrate(io, out, err);
    if (smap->parsed()) return cmd_stability_map(mo, out);
    if (rho->parsed()) return cmd_rho_curve(ro, out);
    if (order->parsed()) return cmd_order_check(oo, out, err);
  } catch (const ConfigError& e) {
    err << fmt::format("error: code=InvalidConfig message=\"{}\"\n", quoted(e.what()));
    return 2;
  } catch (const Error& e) {
    err << fmt::format("error: code={} message=\"{}\"\n", to_string(e.code()), quoted(e.what()));
    return is_validation(e.code()) ? 2 : 3;
  }
  return 2;
}

}  // namespace galpha::cli
