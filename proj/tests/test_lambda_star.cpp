#include <doctest.h>

#include "oracles.hpp"

#include <pxlap/lambda_star.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace pxlap;

namespace
{

constexpr double pi = std::numbers::pi;

GridPtr unit(std::size_t n) { return Grid::make(Domain::interval(0, 1), n); }

/// ∫|u'|^p / ∫|u|^p summed cell by cell with std::pow.
double quotient_oracle(GridFunction const &u, ExponentField const &field)
{
  auto const c = oracle::cells_of(u, field);
  auto const g = oracle::grad_magnitude(c);
  double num = 0, den = 0;
  for (std::size_t k = 0; k < c.p.size(); ++k)
  {
    num += std::pow(g[k], c.p[k]);
    den += std::pow(std::abs(c.value[k]), c.p[k]);
  }
  return num / den;
}

std::vector<double> decades()
{
  return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
}

bool strictly_decreasing(ExplorerResult const &r)
{
  for (std::size_t k = 1; k < r.samples.size(); ++k)
    if (!(r.samples[k].quotient < r.samples[k - 1].quotient))
      return false;
  return true;
}

} // namespace

TEST_CASE("modular quotient examples")
{
  auto g = unit(2001);
  auto const p2 = constant_exponent(g, 2);
  auto const s = GridFunction::sample(g, [](double x, double) { return std::sin(pi * x); },
                                      Boundary::dirichlet_zero);
  CHECK(modular_quotient(s, p2) == doctest::Approx(pi * pi).epsilon(1e-6));
  auto const q = GridFunction::sample(g, [](double x, double) { return x * (1 - x); },
                                      Boundary::dirichlet_zero);
  CHECK(modular_quotient(q, p2) == doctest::Approx(10).epsilon(1e-6));
  CHECK_THROWS_AS(modular_quotient(GridFunction::zero(g, Boundary::free), p2), std::invalid_argument);
}

TEST_CASE("modular quotient against the oracle")
{
  std::mt19937_64 rng(4);
  auto g = unit(97);
  for (int k = 0; k < 50; ++k)
  {
    auto const u = oracle::random_function(g, rng);
    auto const field = oracle::random_exponent(g, rng);
    CHECK(modular_quotient(u, field) == doctest::Approx(quotient_oracle(u, field)).epsilon(1e-12));
  }
}

TEST_CASE("constant exponents make the quotient scale free")
{
  std::mt19937_64 rng(6);
  auto g = unit(129);
  for (double p : {1.3, 2.0, 3.7})
  {
    auto const field = constant_exponent(g, p);
    auto const u = oracle::random_function(g, rng, Boundary::dirichlet_zero);
    double const base = modular_quotient(u, field);
    for (double t : {1e-6, 1e-3, 0.5, 7.0, 1e4})
      CHECK(std::abs(modular_quotient(u.scaled(t), field) / base - 1) <= 1e-10);
  }
}

TEST_CASE("plateau bump")
{
  auto g = unit(201);
  auto const b = plateau_bump(g, BumpGeometry{{0.5, 0}, 0.1, 0.1});
  CHECK(b[100] == 1.0);
  CHECK(b[80] == 1.0);
  CHECK(b[70] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b[60] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b[10] == 0.0);
  CHECK(b.boundary() == Boundary::dirichlet_zero);
}

TEST_CASE("strict interior minimum: quotients decay")
{
  auto g = unit(2001);
  auto const field = build_exponent_field(g, Expression::parse("2 + abs(x - 0.5)"));
  auto const r = bump_family_explorer(field, BumpGeometry{{0.5, 0}, 0.05, 0.05}, decades());
  REQUIRE(r.samples.size() == 6);
  CHECK(strictly_decreasing(r));
  CHECK(r.decreasing_below_tenth);
  CHECK(r.plateau_contains_min);
  CHECK(r.ramp_excess() == doctest::Approx(0.05).epsilon(1e-9));
  auto const phi = plateau_bump(g, BumpGeometry{{0.5, 0}, 0.05, 0.05});
  for (auto const &s : r.samples)
    CHECK(s.quotient == doctest::Approx(quotient_oracle(phi.scaled(s.t), field)).epsilon(1e-12));
  // a shallow minimum decays slowly: six decades only lose about 40%
  CHECK(r.samples.back().quotient / r.samples.front().quotient == doctest::Approx(0.6082).epsilon(1e-3));

  // a steeper field pushes the ratio well below 1e-2
  auto const steep = build_exponent_field(g, Expression::parse("2 + 3*abs(x - 0.5)"));
  auto const s = bump_family_explorer(steep, BumpGeometry{{0.5, 0}, 0.2, 0.05}, decades());
  CHECK(strictly_decreasing(s));
  CHECK(s.samples.back().quotient / s.samples.front().quotient < 1e-2);
}

TEST_CASE("three geometries around an off-center minimum")
{
  auto g = unit(2001);
  auto const field = build_exponent_field(g, Expression::parse("1.8 + 2*(x - 0.4)^2"));
  for (auto const &bump : {BumpGeometry{{0.4, 0}, 0.05, 0.05}, BumpGeometry{{0.4, 0}, 0.15, 0.1},
                           BumpGeometry{{0.42, 0}, 0.1, 0.2}})
  {
    CAPTURE(bump.plateau);
    auto const r = bump_family_explorer(field, bump, decades());
    CHECK(r.plateau_contains_min);
    CHECK(r.ramp_excess() > 0);
    CHECK(strictly_decreasing(r));
  }
}

TEST_CASE("monotone and constant exponents")
{
  auto g = unit(2001);
  auto const mono = build_exponent_field(g, Expression::parse("2 + x"));
  auto const r = bump_family_explorer(mono, BumpGeometry{{0.5, 0}, 0.2, 0.05}, decades());
  CHECK_FALSE(r.plateau_contains_min);
  CHECK_FALSE(r.decreasing_below_tenth);
  for (auto const &s : r.samples)
    CHECK(s.quotient > 300);

  auto const flat = constant_exponent(g, 2.4);
  auto const c = bump_family_explorer(flat, BumpGeometry{{0.5, 0}, 0.2, 0.05}, decades());
  for (auto const &s : c.samples)
    CHECK(std::abs(s.quotient / c.samples.front().quotient - 1) <= 1e-10);
}

TEST_CASE("radial bumps in 2D")
{
  auto g = Grid::make(Domain::box(0, 1, 0, 1), 161);
  auto const field = build_exponent_field(g, Expression::parse("2 + 3*((x-0.5)^2 + (y-0.5)^2)^0.5"));
  auto const r = bump_family_explorer(field, BumpGeometry{{0.5, 0.5}, 0.15, 0.1}, decades());
  CHECK(r.plateau_contains_min);
  CHECK(strictly_decreasing(r));
}

TEST_CASE("explorer preconditions")
{
  auto const field = constant_exponent(unit(201), 2);
  CHECK_THROWS_AS(bump_family_explorer(field, BumpGeometry{{0.1, 0}, 0.1, 0.05}, decades()),
                  std::invalid_argument);
  CHECK_THROWS_AS(bump_family_explorer(field, BumpGeometry{{0.5, 0}, 0.0, 0.05}, decades()),
                  std::invalid_argument);
  CHECK_THROWS_AS(bump_family_explorer(field, BumpGeometry{{0.5, 0}, 0.1, 0.001}, decades()),
                  std::invalid_argument);
  CHECK_THROWS_AS(bump_family_explorer(field, BumpGeometry{{0.5, 0}, 0.1, 0.05}, {0.1, -1.0}),
                  std::invalid_argument);
}
