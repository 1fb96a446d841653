#include <doctest.h>

#include <pxlap/domain.hpp>

#include <cmath>
#include <numbers>

using namespace pxlap;

TEST_CASE("domain measures")
{
  CHECK(Domain::interval(0, 1).measure() == 1.0);
  CHECK(Domain::interval(-1, 2).measure() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(Domain::box(0, 2, 0, 0.5).measure() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Domain::disk(0, 0, 0.5).measure() == doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));

  auto const u = Domain::cube_union(2, {Cube{{0, 0}, 0.5}, Cube{{0.5, 0}, 0.25}, Cube{{0, 0.5}, 1}});
  CHECK(u.measure() == doctest::Approx(0.25 + 0.0625 + 1.0).epsilon(1e-12));
  CHECK(Domain::cube_union(1, {}).measure() == 0.0);
}

TEST_CASE("domain construction errors")
{
  CHECK_THROWS(Domain::interval(1, 1));
  CHECK_THROWS(Domain::box(0, 1, 2, 1));
  CHECK_THROWS(Domain::disk(0, 0, 0));
  CHECK_THROWS(Domain::cube_union(2, {Cube{{0, 0}, 1}, Cube{{0.5, 0.5}, 1}}));
  // touching faces are fine
  CHECK_NOTHROW(Domain::cube_union(2, {Cube{{0, 0}, 1}, Cube{{1, 0}, 1}}));
  CHECK_THROWS(Grid::make(Domain::disk(0, 0, 1), 10));
  CHECK_THROWS(Grid::make(Domain::interval(0, 1), 2));
}

TEST_CASE("grid layout")
{
  auto g = Grid::make(Domain::box(0, 2, -1, 1), 5, 3);
  CHECK(g->node_count() == 15);
  CHECK(g->cell_count() == 8);
  CHECK(g->hx() == doctest::Approx(0.5));
  CHECK(g->hy() == doctest::Approx(1.0));
  CHECK(g->node(7)[0] == doctest::Approx(1.0));
  CHECK(g->node(7)[1] == doctest::Approx(0.0));
  CHECK(g->on_boundary(0));
  CHECK_FALSE(g->on_boundary(7));
  CHECK(g->on_boundary(9));

  auto g1 = Grid::make(Domain::interval(0, 1), 11);
  CHECK(g1->cell_count() == 10);
  CHECK(g1->cell_volume() == doctest::Approx(0.1));
}

TEST_CASE("build_exponent_field examples")
{
  auto g = Grid::make(Domain::interval(0, 1), 101);

  auto constant = build_exponent_field(g, Expression::parse("2"));
  CHECK(constant.p_minus() == 2.0);
  CHECK(constant.p_plus() == 2.0);
  CHECK(constant.is_constant());

  auto linear = build_exponent_field(g, Expression::parse("1.5 + x"));
  CHECK(linear.p_minus() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(linear.p_plus() == doctest::Approx(2.5).epsilon(1e-12));
  for (double p : linear.cell_p())
  {
    CHECK(p >= linear.p_minus());
    CHECK(p <= linear.p_plus());
  }

  try
  {
    build_exponent_field(g, Expression::parse("0.9"));
    FAIL("expected a range error");
  }
  catch (RangeError const &e)
  {
    std::string const what = e.what();
    CHECK(what.find("exponent out of range") != std::string::npos);
    CHECK(what.find("node 0") != std::string::npos);
  }

  // offending node location is reported
  try
  {
    build_exponent_field(g, Expression::parse("2 - x"));
    FAIL("expected a range error");
  }
  catch (RangeError const &e)
  {
    CHECK(std::string(e.what()).find("node 100") != std::string::npos);
  }

  CHECK_THROWS(build_exponent_field(g, Expression::parse("2 + y")));
  CHECK_THROWS(build_exponent_field(g, std::vector<double>(10, 2.0)));
}

TEST_CASE("exponent_stats examples")
{
  auto const c = exponent_stats(2.0, 2.0, 1, 3.7);
  CHECK(c.sigma == 0.0);
  CHECK(c.tau == 0.0);
  CHECK(c.kappa == 1.0);
  CHECK(c.bounds_available());

  // sigma = tau = 1/1.5 - 1/2.5 = 4/15
  auto const s1 = exponent_stats(1.5, 2.5, 1, 1.0);
  CHECK(s1.sigma == doctest::Approx(4.0 / 15).epsilon(1e-14));
  CHECK(s1.tau == doctest::Approx(4.0 / 15).epsilon(1e-14));
  double const kappa = std::pow(19.0 / 15, 1 / 1.5) / std::pow(11.0 / 15, 1 / 2.5);
  CHECK(s1.kappa == doctest::Approx(kappa).epsilon(1e-14));
  CHECK(s1.kappa == doctest::Approx(1.32531).epsilon(1e-5));

  auto const s2 = exponent_stats(1.5, 2.5, 2, 1.0);
  CHECK(s2.sigma == doctest::Approx(8.0 / 15).epsilon(1e-14));
  CHECK(s2.tau == doctest::Approx(4.0 / 15).epsilon(1e-14));

  auto const wide = exponent_stats(1.1, 10, 2, 4.0);
  CHECK_FALSE(wide.bounds_available());
  CHECK(wide.warning_messages().size() == 2);
  CHECK(std::isinf(wide.kappa));
}

TEST_CASE("stats invariants")
{
  for (double pm : {1.1, 1.5, 2.0, 3.0})
    for (double pp : {pm, pm + 0.1, pm + 0.5})
    {
      auto const s = exponent_stats(pm, pp, 1, 1.0);
      CHECK(s.sigma >= 0.0);
      CHECK(s.tau >= 0.0);
      if (s.tau < 1.0)
      {
        CHECK(s.kappa >= 1.0);
        CHECK((s.kappa == 1.0) == (pm == pp));
      }
    }

  // translation of the domain leaves sigma and tau unchanged
  auto const expr = Expression::parse("2 + sin(3*x)");
  auto const ga = Grid::make(Domain::interval(0, 1), 65);
  auto const gb = Grid::make(Domain::interval(5, 6), 65);
  std::vector<double> samples(65);
  for (std::size_t i = 0; i < 65; ++i)
    samples[i] = expr(ga->x(i));
  auto const fa = build_exponent_field(ga, samples);
  auto const fb = build_exponent_field(gb, samples);
  auto const sa = exponent_stats(fa, ga->domain());
  auto const sb = exponent_stats(fb, gb->domain());
  CHECK(sa.sigma == sb.sigma);
  CHECK(sa.tau == doctest::Approx(sb.tau).epsilon(1e-14));
}

TEST_CASE("cube_cover examples")
{
  SUBCASE("unit interval tiles exactly")
  {
    auto const cover = cube_cover(Domain::interval(0, 1), 0.3);
    CHECK(cover.side == 0.25);
    CHECK(cover.inner.cubes().size() == 4);
    CHECK(cover.outer.cubes().size() == 4);
    CHECK(cover.gap() == 0.0);
  }
  SUBCASE("unit square tiles exactly")
  {
    auto const cover = cube_cover(Domain::box(0, 1, 0, 1), 0.1);
    CHECK(cover.gap() == 0.0);
    CHECK(cover.side <= 0.1);
    CHECK(cover.inner.measure() == doctest::Approx(1.0));
  }
  SUBCASE("inscribed disk")
  {
    Domain const disk = Domain::disk(0.5, 0.5, 0.5);
    auto const cover = cube_cover(disk, 0.5);
    CHECK(cover.side == 0.125);
    CHECK(cover.gap() < 0.5);
    CHECK(cover.inner.measure() <= disk.measure());
    CHECK(cover.outer.measure() >= disk.measure());

    // Independent count of straddling cells: sample each cell densely.
    int straddle = 0;
    for (int j = 0; j < 8; ++j)
      for (int i = 0; i < 8; ++i)
      {
        int in = 0, out = 0;
        for (int b = 0; b <= 40; ++b)
          for (int a = 0; a <= 40; ++a)
          {
            double const x = (i + a / 40.0) / 8, y = (j + b / 40.0) / 8;
            double const r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
            (r2 < 0.25 ? in : out) += 1;
          }
        straddle += (in > 0 && out > 0);
      }
    CHECK(cover.gap() == doctest::Approx(straddle / 64.0));
  }
  SUBCASE("cube unions are their own covers")
  {
    auto const u = Domain::cube_union(1, {Cube{{0, 0}, 1}, Cube{{2, 0}, 1}});
    auto const cover = cube_cover(u, 0.01);
    CHECK(cover.gap() == 0.0);
    CHECK(cover.outer.cubes().size() == 2);
  }
  CHECK_THROWS(cube_cover(Domain::interval(0, 1), 0.0));
}

TEST_CASE("cube covers nest and shrink under refinement")
{
  for (Domain const &d : {Domain::disk(0.3, -0.2, 0.7), Domain::box(0.1, 0.95, -0.3, 0.4),
                          Domain::interval(-0.3, 0.77)})
  {
    double previous = std::numeric_limits<double>::infinity();
    for (int level = 0; level <= 8; ++level)
    {
      auto const cover = cube_cover_at_level(d, level);
      CHECK(cover.inner.measure() <= d.measure() + 1e-12);
      CHECK(cover.outer.measure() >= d.measure() - 1e-12);
      CHECK(cover.gap() <= previous + 1e-12);
      previous = cover.gap();
    }
  }
}
