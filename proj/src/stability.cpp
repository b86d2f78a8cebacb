#include "galpha/stability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "galpha/amplification.hpp"
#include "galpha/csv.hpp"
#include "galpha/error.hpp"

namespace galpha {

namespace {

std::vector<double> log_magnitudes(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
    out[k] = std::pow(10.0, a + frac * (b - a));
  }
  return out;
}

double max_modulus(const std::array<Complex, 3>& eig) {
  double m = 0.0;
  for (const Complex& z : eig) m = std::max(m, std::abs(z));
  return m;
}

std::size_t doubled(std::size_t n) { return n < 2 ? n : 2 * (n - 1) + 1; }

void accumulate(const std::vector<Complex>& eig, RadiusResult& acc) {
  for (std::size_t i = 0; i < eig.size(); ++i) {
    const double mod = std::abs(eig[i]);
    acc.radius = std::max(acc.radius, mod);
    if (std::abs(mod - 1.0) > kRepeatedRootWindow) continue;
    for (std::size_t j = i + 1; j < eig.size(); ++j)
      if (std::abs(eig[i] - eig[j]) <= kRepeatedRootWindow) acc.repeated_unit_root = true;
  }
}

}  // namespace

TSampleSpec TSampleSpec::with_complex_rays() {
  TSampleSpec s;
  const double half_pi = std::numbers::pi / 2.0;
  s.ray_angles = {std::numbers::pi / 4.0, -std::numbers::pi / 4.0, 0.98 * half_pi,
                  -0.98 * half_pi};
  return s;
}

std::vector<Complex> TSampleSpec::samples() const {
  std::vector<Complex> out;
  for (double m : log_magnitudes(magnitude_min, magnitude_max, n_real)) out.emplace_back(m, 0.0);
  const std::vector<double> ray = log_magnitudes(magnitude_min, magnitude_max, n_per_ray);
  for (double angle : ray_angles)
    for (double m : ray) out.push_back(std::polar(m, angle));
  return out;
}

TSampleSpec TSampleSpec::densified() const {
  TSampleSpec s = *this;
  s.n_real = doubled(n_real);
  s.n_per_ray = doubled(n_per_ray);
  return s;
}

RadiusResult worst_case_radius(const SchemeParams& params, std::span<const Complex> T_samples) {
  RadiusResult acc;
  auto guarded = [&](auto&& spectrum) {
    if (acc.singular) return;
    try {
      accumulate(spectrum(), acc);
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::SingularAtT:
        case ErrorCode::SingularMatrix:
        case ErrorCode::DegenerateAlphaM:
        case ErrorCode::DegenerateParams:
        case ErrorCode::NoConvergence:
        case ErrorCode::InvalidArgument:
          acc.singular = true;
          break;
        default:
          throw;
      }
    }
  };
  auto spectrum_of = [](const CMatrix& g) {
    if (!g.all_finite()) throw Error(ErrorCode::SingularAtT, "non-finite amplification matrix");
    return eigenvalues(g);
  };
  for (const Complex& T : T_samples)
    guarded([&] { return spectrum_of(amplification_matrix(params, T)); });
  if (params.p == 3) {
    guarded([&] { return spectrum_of(limit_matrix_zero(params)); });
    if (params.variant == Variant::EqualGamma) {
      guarded([&] {
        const auto e = limit_inf_eigenvalues(params);
        return std::vector<Complex>(e.begin(), e.end());
      });
    } else {
      guarded([&] { return spectrum_of(amplification_matrix(params, Complex(kLargeT, 0.0))); });
    }
  }
  if (acc.singular) acc.radius = std::numeric_limits<double>::infinity();
  return acc;
}

std::vector<double> uniform_axis(double lo, double hi, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "grid axis needs at least one point");
  if (n > 1 && !(hi > lo))
    throw Error(ErrorCode::InvalidArgument, "grid axis must be strictly increasing");
  std::vector<double> axis(n, lo);
  for (std::size_t k = 1; k < n; ++k)
    axis[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return axis;
}

std::size_t StabilityMap::stable_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const RadiusResult& c) { return c.stable(); }));
}

StabilityMap scan_region(Variant variant, const GridSpec& grid, std::span<const Complex> T_samples,
                         unsigned threads) {
  StabilityMap map;
  map.variant = variant;
  map.alpha_m_axis = uniform_axis(grid.alpha_m_min, grid.alpha_m_max, grid.n_alpha_m);
  map.alpha_f_axis = uniform_axis(grid.alpha_f_min, grid.alpha_f_max, grid.n_alpha_f);
  map.T_samples.assign(T_samples.begin(), T_samples.end());
  const std::size_t nf = map.alpha_f_axis.size();
  const std::size_t total = map.alpha_m_axis.size() * nf;
  map.cells.resize(total);

  auto evaluate = [&](std::size_t idx) {
    const double am = map.alpha_m_axis[idx / nf];
    const double af = map.alpha_f_axis[idx % nf];
    RadiusResult r;
    try {
      r = worst_case_radius(make_scheme(3, am, af, variant), map.T_samples);
    } catch (const Error&) {
      r.singular = true;
      r.radius = std::numeric_limits<double>::infinity();
    }
    map.cells[idx] = r;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    for (std::size_t i = 0; i < total; ++i) evaluate(i);
    return map;
  }
  // Strided partition: worker w owns cells w, w + threads, ...
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w)
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < total; i += threads) evaluate(i);
    });
  return map;
}

RegionComparison compare_with_closed_form(const StabilityMap& map) {
  const std::size_t nm = map.alpha_m_axis.size();
  const std::size_t nf = map.alpha_f_axis.size();
  auto closed = [&](std::size_t i, std::size_t j) {
    return in_stability_region(map.alpha_m_axis[i], map.alpha_f_axis[j]);
  };
  RegionComparison cmp;
  cmp.total = nm * nf;
  for (std::size_t i = 0; i < nm; ++i)
    for (std::size_t j = 0; j < nf; ++j) {
      const bool expected = closed(i, j);
      if (map.at(i, j).stable() == expected) {
        ++cmp.agree;
        continue;
      }
      bool touches_boundary = false;
      for (std::size_t a = i == 0 ? 0 : i - 1; a <= std::min(i + 1, nm - 1); ++a)
        for (std::size_t b = j == 0 ? 0 : j - 1; b <= std::min(j + 1, nf - 1); ++b)
          if (closed(a, b) != expected) touches_boundary = true;
      if (!touches_boundary) ++cmp.off_boundary;
    }
  return cmp;
}

void write_stability_csv(const StabilityMap& map, std::ostream& out) {
  out << "alpha_m,alpha_f,radius,stable\n";
  for (std::size_t i = 0; i < map.alpha_m_axis.size(); ++i)
    for (std::size_t j = 0; j < map.alpha_f_axis.size(); ++j) {
      const RadiusResult& c = map.at(i, j);
      out << format_number(map.alpha_m_axis[i]) << ',' << format_number(map.alpha_f_axis[j])
          << ',' << format_number(c.radius) << ',' << (c.stable() ? 1 : 0) << '\n';
    }
}

double verify_rho_control(double rho_inf, RhoBranch branch) {
  const AlphaPair a = params_from_rho(rho_inf, branch);
  const SchemeParams s = make_scheme(3, a.alpha_m, a.alpha_f, Variant::EqualGamma);
  return max_modulus(limit_inf_eigenvalues(s)) - rho_inf;
}

std::vector<RhoSample> rho_curve(RhoBranch branch, std::size_t n_points) {
  if (n_points < 2) throw Error(ErrorCode::InvalidArgument, "rho curve needs at least 2 points");
  std::vector<RhoSample> out;
  out.reserve(n_points);
  for (double rho : uniform_axis(0.0, 1.0, n_points)) {
    RhoSample s;
    s.branch = branch;
    s.rho = rho;
    try {
      const AlphaPair a = params_from_rho(rho, branch);
      s.alpha_m = a.alpha_m;
      s.alpha_f = a.alpha_f;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PoleAtRho) throw;
      s.pole = true;
      out.push_back(s);
      continue;
    }
    s.inside_region = in_stability_region(s.alpha_m, s.alpha_f);
    try {
      s.max_eig_inf = max_modulus(
          limit_inf_eigenvalues(make_scheme(3, s.alpha_m, s.alpha_f, Variant::EqualGamma)));
    } catch (const Error&) {
      s.max_eig_inf.reset();
    }
    out.push_back(s);
  }
  return out;
}

void write_rho_curves_csv(std::span<const RhoSample> samples, std::ostream& out) {
  out << "branch,rho,alpha_m,alpha_f,inside_region,max_eig_inf,pole\n";
  for (const RhoSample& s : samples) {
    out << to_string(s.branch) << ',' << format_number(s.rho) << ',';
    if (s.pole) {
      out << ",,,,1\n";
      continue;
    }
    out << format_number(s.alpha_m) << ',' << format_number(s.alpha_f) << ','
        << (s.inside_region ? 1 : 0) << ','
        << (s.max_eig_inf ? format_number(*s.max_eig_inf) : std::string{}) << ",0\n";
  }
}

bool stiff_limit_eigenvalues_real(const SchemeParams& params) {
  const double scale = std::max(1.0, limit_matrix_inf(params).norm_inf());
  for (const Complex& z : limit_inf_eigenvalues(params))
    if (std::abs(z.imag()) > 1e-12 * scale) return false;
  return true;
}

}  // namespace galpha
