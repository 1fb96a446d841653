#include <doctest.h>

#include <pxlap/counting.hpp>
#include <pxlap/oracle.hpp>

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <numbers>

using namespace pxlap;

namespace
{

constexpr double pi = std::numbers::pi;

/// sin_p by direct integration of (|u'|^{p-2}u')' + (p-1)|u|^{p-2}u = 0 with
/// u(0) = 0, u'(0) = 1, in the variables (u, w = |u'|^{p-2}u').
double sin_p_ode(double p, double t)
{
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  auto rhs = [p](State const &s, State &ds, double) {
    double const w = s[1];
    ds[0] = std::copysign(std::pow(std::abs(w), 1 / (p - 1)), w);
    ds[1] = -(p - 1) * std::copysign(std::pow(std::abs(s[0]), p - 1), s[0]);
  };
  State s{0.0, 1.0};
  odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-14, 1e-14),
                             rhs, s, 0.0, t, 1e-4);
  return s[0];
}

} // namespace

TEST_CASE("pi_p examples")
{
  CHECK(pi_p(2) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(pi_p(3) == doctest::Approx(4 * pi / (3 * std::sqrt(3.0))).epsilon(1e-12));
  CHECK(pi_p(3) == doctest::Approx(2.418399152).epsilon(1e-9));
  CHECK(pi_p(50) > 2.0);
  CHECK(pi_p(50) < 2.01);
  CHECK_THROWS_AS(pi_p(1.0), std::invalid_argument);
  CHECK_THROWS_AS(pi_p(0.5), std::invalid_argument);
}

TEST_CASE("pi_p quadrature agrees with the closed form")
{
  for (int k = 0; k < 20; ++k)
  {
    double const p = 1.05 * std::pow(50 / 1.05, k / 19.0) * (k == 19 ? 0.999 : 1.0);
    CAPTURE(p);
    CHECK(std::abs(pi_p(p) - 2 * pi / (p * std::sin(pi / p))) <= 1e-8);
    CHECK(pi_p_closed(p) == doctest::Approx(2 * pi / (p * std::sin(pi / p))).epsilon(1e-15));
  }
}

TEST_CASE("sin_p examples")
{
  CHECK(sin_p(2, pi / 2) == doctest::Approx(1.0).epsilon(1e-12));
  for (double p : {1.3, 2.0, 3.0, 7.0})
  {
    CAPTURE(p);
    CHECK(sin_p(p, 0) == 0.0);
    CHECK(sin_p(p, pi_p(p) / 2) == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (double t : {0.1, 0.7, 1.3, 2.9, 4.0, -2.2})
    CHECK(sin_p(2, t) == doctest::Approx(std::sin(t)).epsilon(1e-10));
  CHECK(sin_p(3, pi_p(3) / 4) == doctest::Approx(0.593341218883519).epsilon(1e-12));
  CHECK_THROWS_AS(sin_p(2, INFINITY), std::invalid_argument);
}

TEST_CASE("sin_p matches the ODE")
{
  for (double p : {1.5, 3.0, 4.5})
    for (double frac : {0.05, 0.25, 0.4, 0.49})
    {
      CAPTURE(p);
      CAPTURE(frac);
      double const t = frac * pi_p(p);
      CHECK(std::abs(sin_p(p, t) - sin_p_ode(p, t)) <= 1e-8);
    }
}

TEST_CASE("sin_p symmetries")
{
  for (double p : {1.5, 2.5, 4.0})
  {
    double const h = pi_p(p);
    for (double t : {0.05, 0.4, 1.1})
    {
      CAPTURE(p);
      CAPTURE(t);
      CHECK(std::abs(sin_p(p, t)) <= 1.0);
      CHECK(sin_p(p, -t) == doctest::Approx(-sin_p(p, t)).epsilon(1e-12));
      CHECK(sin_p(p, h - t) == doctest::Approx(sin_p(p, t)).epsilon(1e-10));
      CHECK(sin_p(p, t + h) == doctest::Approx(-sin_p(p, t)).epsilon(1e-10));
      CHECK(sin_p(p, t + 2 * h) == doctest::Approx(sin_p(p, t)).epsilon(1e-10));
    }
  }
}

TEST_CASE("exact constant-p spectra")
{
  auto const d = exact_spectrum_constant_p(2, 1, Boundary::dirichlet_zero, 3).numbers();
  CHECK(d == std::vector<double>{pi, 2 * pi, 3 * pi});
  auto const f = exact_spectrum_constant_p(2, 1, Boundary::free, 3).numbers();
  CHECK(f[0] == 0.0);
  CHECK(f[1] == doctest::Approx(pi).epsilon(1e-15));
  CHECK(f[2] == doctest::Approx(2 * pi).epsilon(1e-15));

  // p ≠ 2: j (p-1)^{1/p} π_p, the same for p and its conjugate 3/2 ↔ 3
  auto const s3 = exact_spectrum_constant_p(3, 1, Boundary::dirichlet_zero, 2).numbers();
  CHECK(s3[0] == doctest::Approx(3.046991999).epsilon(1e-9));
  CHECK(s3[1] == doctest::Approx(2 * 3.046991999).epsilon(1e-9));
  CHECK(varpi_p(1.5) == doctest::Approx(varpi_p(3)).epsilon(1e-13));

  auto const a = exact_spectrum_constant_p(2.7, 1, Boundary::dirichlet_zero, 5).numbers();
  auto const b = exact_spectrum_constant_p(2.7, 3, Boundary::dirichlet_zero, 5).numbers();
  for (std::size_t k = 0; k < a.size(); ++k)
    CHECK(b[k] == doctest::Approx(a[k] / 3).epsilon(1e-14));

  CHECK_THROWS_AS(exact_spectrum_constant_p(2, 0, Boundary::free, 3), std::invalid_argument);
  CHECK_THROWS_AS(exact_spectrum_constant_p(2, 1, Boundary::free, 0), std::invalid_argument);
}

TEST_CASE("constant-p counting is linear")
{
  for (double p : {1.5, 2.0, 4.0})
  {
    auto const sp = exact_spectrum_constant_p(p, 2, Boundary::dirichlet_zero, 400);
    double const step = varpi_p(p) / 2;
    for (double lambda : {1.0, 7.3, 55.5, 301.0})
    {
      CAPTURE(lambda);
      CHECK(counting_function(sp, lambda) == static_cast<int>(std::ceil(lambda / step)) - 1);
    }
  }
}

TEST_CASE("shooting agrees with the exact spectrum")
{
  for (double p : {1.5, 2.0, 3.0})
    for (int j = 1; j <= 5; ++j)
    {
      CAPTURE(p);
      CAPTURE(j);
      CHECK(std::abs(shooting_check(p, 1, j) / (j * varpi_p(p)) - 1) <= 1e-6);
    }
  CHECK(shooting_check(2, 1, 1) == doctest::Approx(pi).epsilon(1e-8));
  CHECK(shooting_check(1.5, 2, 4) == doctest::Approx(4 * varpi_p(1.5) / 2).epsilon(1e-6));
  CHECK_THROWS_AS(shooting_check(2, 1, 0), std::invalid_argument);
}

TEST_CASE("box laplacian spectrum")
{
  auto const d = box_laplacian_spectrum(1, 1, Boundary::dirichlet_zero, 20).numbers();
  REQUIRE(!d.empty());
  CHECK(d[0] == doctest::Approx(pi * std::sqrt(2.0)).epsilon(1e-15));
  // brute-force count of sqrt(m² + n²) π < 20 with m, n >= 1
  int count = 0;
  for (int m = 1; m < 10; ++m)
    for (int n = 1; n < 10; ++n)
      count += pi * std::hypot(m, n) < 20;
  CHECK(static_cast<int>(d.size()) == count);
  CHECK(std::is_sorted(d.begin(), d.end()));

  auto const f = box_laplacian_spectrum(2, 1, Boundary::free, 5).numbers();
  REQUIRE(f.size() >= 3);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(f[2] == doctest::Approx(pi).epsilon(1e-15));
}

TEST_CASE("spectrum helpers")
{
  auto const d = exact_spectrum_constant_p(2.5, 1, Boundary::dirichlet_zero, 6);
  auto const f = exact_spectrum_constant_p(2.5, 1, Boundary::free, 6);
  CHECK(d.nondecreasing());
  CHECK(f.nondecreasing());
  CHECK(free_below_dirichlet(f, d));
  CHECK_FALSE(free_below_dirichlet(d, f));
  CHECK(free_below_dirichlet(d, f, 1.01 * varpi_p(2.5)));

  Spectrum bad;
  bad.values = {{1, 2.0, ValueKind::descent}, {2, 1.0, ValueKind::descent}};
  CHECK_FALSE(bad.nondecreasing());
  CHECK(std::string(to_string(ValueKind::nodal_upper)) == "nodal-upper");
  CHECK(std::string(to_string(ValueKind::exact)) == "exact");
}
