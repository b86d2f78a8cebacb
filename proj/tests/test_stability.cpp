#include <doctest.h>

#include <cmath>
#include <sstream>

#include "galpha/amplification.hpp"
#include "galpha/error.hpp"
#include "galpha/stability.hpp"

using namespace galpha;

namespace {

std::vector<Complex> real_log_samples(double lo, double hi, std::size_t n) {
  TSampleSpec spec;
  spec.magnitude_min = lo;
  spec.magnitude_max = hi;
  spec.n_real = n;
  return spec.samples();
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_SUITE("stability") {

TEST_CASE("sample sets") {
  const TSampleSpec def;
  const std::vector<Complex> s = def.samples();
  CHECK(s.size() == 48);
  CHECK(s.front().real() == doctest::Approx(1e-4));
  CHECK(s.back().real() == doctest::Approx(1e8));
  for (const Complex& T : s) CHECK(T.imag() == 0.0);

  const std::vector<Complex> rays = TSampleSpec::with_complex_rays().samples();
  CHECK(rays.size() == 48 + 4 * 16);
  for (const Complex& T : rays) CHECK(T.real() > 0.0);

  // Densified samples contain the originals.
  const std::vector<Complex> dense = def.densified().samples();
  CHECK(dense.size() == 95);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(std::abs(dense[2 * k] - s[k]) <= 1e-9 * std::abs(s[k]));
}

TEST_CASE("worst-case radius examples") {
  const std::vector<Complex> T = real_log_samples(1e-3, 1e6, 40);
  const RadiusResult corner = worst_case_radius(make_scheme(3, 7.0 / 12.0, 0.5), T);
  CHECK(corner.radius <= 1.0 + 1e-9);

  const RadiusResult outside = worst_case_radius(make_scheme(3, 0.5, 0.5), T);
  CHECK(outside.radius > 1.0);
  CHECK_FALSE(outside.stable());

  const AlphaPair a = params_from_rho(0.5, RhoBranch::Main);
  const std::vector<Complex> only_zero{Complex(0.0)};
  const RadiusResult z = worst_case_radius(make_scheme(3, a.alpha_m, a.alpha_f), only_zero);
  CHECK(z.radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(z.stable());
}

TEST_CASE("repeated unit roots are unstable") {
  // The stiff limit at the region corner carries a double eigenvalue -1.
  const RadiusResult corner =
      worst_case_radius(make_scheme(3, 7.0 / 12.0, 0.5), std::vector<Complex>{});
  CHECK(corner.repeated_unit_root);
  CHECK_FALSE(corner.stable());
}

TEST_CASE("singular samples mark the cell instead of throwing") {
  const SchemeParams s = make_scheme(3, 0.9, 0.6);
  const Complex pole = -s.alpha_m / (s.gamma(1) * s.alpha_f);
  const RadiusResult r = worst_case_radius(s, std::vector<Complex>{pole});
  CHECK(r.singular);
  CHECK(std::isinf(r.radius));
  CHECK_FALSE(r.stable());
}

TEST_CASE("single interior cell") {
  GridSpec g{1.0, 1.0, 0.6, 0.6, 1, 1};
  const StabilityMap map = scan_region(Variant::EqualGamma, g, TSampleSpec{}.samples());
  REQUIRE(map.cells.size() == 1);
  CHECK(map.at(0, 0).stable());
}

TEST_CASE("scan agrees with the closed-form region on a coarse grid") {
  GridSpec g;
  g.n_alpha_m = 41;
  g.n_alpha_f = 41;
  const StabilityMap map = scan_region(Variant::EqualGamma, g, TSampleSpec{}.samples(), 1);
  const RegionComparison c = compare_with_closed_form(map);
  CHECK(c.total == 41 * 41);
  CHECK(c.agreement() >= 0.99);
  CHECK(c.off_boundary == 0);
}

TEST_CASE("the alternative gamma rule has the larger region") {
  GridSpec g;
  g.n_alpha_m = 31;
  g.n_alpha_f = 31;
  const auto T = TSampleSpec{}.samples();
  const StabilityMap eq = scan_region(Variant::EqualGamma, g, T, 1);
  const StabilityMap r1 = scan_region(Variant::RemarkOne, g, T, 1);
  CHECK(r1.stable_count() > eq.stable_count());
}

TEST_CASE("scan result does not depend on the worker count") {
  GridSpec g;
  g.n_alpha_m = 13;
  g.n_alpha_f = 11;
  const auto T = TSampleSpec{}.samples();
  const StabilityMap a = scan_region(Variant::EqualGamma, g, T, 1);
  const StabilityMap b = scan_region(Variant::EqualGamma, g, T, 4);
  std::ostringstream sa, sb;
  write_stability_csv(a, sa);
  write_stability_csv(b, sb);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("denser sampling never turns an unstable cell stable") {
  GridSpec g;
  g.n_alpha_m = 16;
  g.n_alpha_f = 16;
  for (const TSampleSpec& spec : {TSampleSpec{}, TSampleSpec::with_complex_rays()}) {
    const StabilityMap base = scan_region(Variant::EqualGamma, g, spec.samples(), 1);
    const StabilityMap dense = scan_region(Variant::EqualGamma, g, spec.densified().samples(), 1);
    for (std::size_t k = 0; k < base.cells.size(); ++k)
      if (!base.cells[k].stable()) CHECK_FALSE(dense.cells[k].stable());
  }
}

TEST_CASE("complex rays witness instability off the real axis") {
  const AlphaPair a = params_from_rho(0.5, RhoBranch::Main);
  const SchemeParams s = make_scheme(3, a.alpha_m, a.alpha_f);
  CHECK(worst_case_radius(s, TSampleSpec{}.samples()).stable());
  CHECK(worst_case_radius(s, TSampleSpec::with_complex_rays().samples()).radius > 1.0);
}

TEST_CASE("stability CSV") {
  GridSpec g{0.0, 1.5, 0.0, 1.5, 2, 2};
  const StabilityMap map = scan_region(Variant::EqualGamma, g, TSampleSpec{}.samples(), 1);
  std::ostringstream os;
  write_stability_csv(map, os);
  const std::string text = os.str();
  CHECK(text.rfind("alpha_m,alpha_f,radius,stable\n", 0) == 0);
  CHECK(count_lines(text) == 5);
  CHECK(text.find("\n0,1.5,") != std::string::npos);
}

TEST_CASE("grid axes") {
  const std::vector<double> ax = uniform_axis(0.0, 1.5, 4);
  CHECK(ax == std::vector<double>{0.0, 0.5, 1.0, 1.5});
  CHECK(uniform_axis(0.3, 0.3, 1) == std::vector<double>{0.3});
  CHECK_THROWS_AS(uniform_axis(1.0, 0.0, 3), Error);
  CHECK_THROWS_AS(uniform_axis(0.0, 1.0, 0), Error);
}

TEST_CASE("rho control") {
  CHECK(std::abs(verify_rho_control(0.5, RhoBranch::Main)) <= 1e-10);
  CHECK(std::abs(verify_rho_control(1.0, RhoBranch::Main)) <= 1e-10);
  // Above 1/3 the Main branch hits its target exactly.
  for (double rho = 0.34; rho <= 1.0; rho += 0.06)
    CHECK_MESSAGE(std::abs(verify_rho_control(rho, RhoBranch::Main)) <= 1e-10, "rho = " << rho);
  CHECK_THROWS_AS(verify_rho_control(1.0, RhoBranch::Alt2), Error);
}

TEST_CASE("Main branch stiff spectrum in closed form") {
  // Eigenvalues -rho, -rho and -(1 - rho) / (1 + 3 rho).
  for (double rho : {0.0, 0.1, 0.25, 0.5, 0.9}) {
    const AlphaPair a = params_from_rho(rho, RhoBranch::Main);
    const auto e = limit_inf_eigenvalues(make_scheme(3, a.alpha_m, a.alpha_f));
    const double third = -(1.0 - rho) / (1.0 + 3.0 * rho);
    double want = std::max(rho, std::abs(third));
    double got = 0.0;
    for (const Complex& z : e) got = std::max(got, std::abs(z));
    CHECK_MESSAGE(got == doctest::Approx(want).epsilon(1e-7), "rho = " << rho);
  }
}

TEST_CASE("rho curves") {
  const std::vector<RhoSample> main = rho_curve(RhoBranch::Main, 3);
  REQUIRE(main.size() == 3);
  CHECK(main.front().alpha_m == doctest::Approx(13.0 / 12.0));
  CHECK(main.front().alpha_f == doctest::Approx(0.5));
  CHECK(main.back().alpha_m == doctest::Approx(7.0 / 12.0));
  CHECK(main.back().alpha_f == doctest::Approx(0.5));

  for (const RhoSample& s : rho_curve(RhoBranch::Main, 101)) {
    CHECK(s.inside_region);
    CHECK_FALSE(s.pole);
    CHECK(s.alpha_f <= 9.0 / 16.0 + 1e-15);
    CHECK(stiff_limit_eigenvalues_real(make_scheme(3, s.alpha_m, s.alpha_f)));
  }

  const std::vector<RhoSample> alt2 = rho_curve(RhoBranch::Alt2, 5);
  CHECK(std::abs(alt2.front().alpha_f - (5.0 + std::sqrt(7.0)) / 4.0) < 1e-12);
  CHECK(alt2.back().pole);

  const std::vector<RhoSample> alt1 = rho_curve(RhoBranch::Alt1, 2);
  CHECK(alt1.front().alpha_m == doctest::Approx(13.0 / 12.0));
  CHECK(alt1.front().alpha_f == doctest::Approx(0.5));

  CHECK_THROWS_AS(rho_curve(RhoBranch::Main, 1), Error);
}

TEST_CASE("rho curve CSV") {
  std::vector<RhoSample> all;
  for (RhoBranch b : kAllBranches) {
    const auto c = rho_curve(b, 2);
    all.insert(all.end(), c.begin(), c.end());
  }
  std::ostringstream os;
  write_rho_curves_csv(all, os);
  const std::string text = os.str();
  CHECK(text.rfind("branch,rho,alpha_m,alpha_f,inside_region,max_eig_inf,pole\n", 0) == 0);
  CHECK(count_lines(text) == 9);
  CHECK(text.find("alt1,1,,,,,1\n") != std::string::npos);
}

TEST_CASE("real/complex transition of the stiff spectrum") {
  // For the 2x2 block: trace 2 - 3/(2 af), det 1 - 1/(2 af); real iff af <= 9/16.
  for (double af : {0.5, 0.55, 0.56, 0.562}) CHECK(stiff_limit_eigenvalues_real(make_scheme(3, 1.0, af)));
  for (double af : {0.563, 0.6, 0.8}) CHECK_FALSE(stiff_limit_eigenvalues_real(make_scheme(3, 1.0, af)));
}

}  // TEST_SUITE
