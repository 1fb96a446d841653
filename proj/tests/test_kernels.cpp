#include <doctest.h>

#include <pxlap/kernels.hpp>

#include <cmath>
#include <random>
#include <vector>

#ifdef PXLAP_HAVE_OPENMP
#include <omp.h>
#endif

using namespace pxlap;
namespace ks = kernels::serial;
namespace kp = kernels::parallel;

namespace
{

struct Data
{
  GridPtr grid;
  std::vector<double> nodal, p, logs, cell_s, cell_v;
};

Data make(GridPtr grid, unsigned seed)
{
  Data d;
  d.grid = grid;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1, 1);
  d.nodal.resize(grid->node_count());
  for (auto &v : d.nodal)
    v = uni(rng);
  std::size_t const nc = grid->cell_count();
  d.p.resize(nc);
  d.logs.resize(nc);
  d.cell_s.resize(nc);
  d.cell_v.resize(nc * static_cast<std::size_t>(grid->dimension()));
  for (std::size_t c = 0; c < nc; ++c)
  {
    d.p[c] = 1.3 + 2 * std::abs(uni(rng));
    d.logs[c] = std::log(std::abs(uni(rng)) + 1e-6);
    d.cell_s[c] = uni(rng);
  }
  for (auto &v : d.cell_v)
    v = uni(rng);
  // a few exact zeros
  d.logs[0] = -std::numeric_limits<double>::infinity();
  return d;
}

void compare_all(Data const &d)
{
  auto const a = ks::power_sums(d.p, d.logs, 0.3);
  auto const b = kp::power_sums(d.p, d.logs, 0.3);
  CHECK(b.plain == doctest::Approx(a.plain).epsilon(1e-13));
  CHECK(b.weighted == doctest::Approx(a.weighted).epsilon(1e-13));

  std::vector<double> ta(d.p.size()), tb(d.p.size());
  ks::power_terms(d.p, d.logs, -0.2, 1.0, ta);
  kp::power_terms(d.p, d.logs, -0.2, 1.0, tb);
  CHECK(ta == tb);

  Grid const &g = *d.grid;
  std::vector<double> va(g.cell_count()), vb(g.cell_count());
  ks::cell_values(g, d.nodal, va);
  kp::cell_values(g, d.nodal, vb);
  CHECK(va == vb);

  std::size_t const ng = g.cell_count() * static_cast<std::size_t>(g.dimension());
  std::vector<double> ga(ng), gb(ng);
  ks::cell_gradients(g, d.nodal, ga);
  kp::cell_gradients(g, d.nodal, gb);
  CHECK(ga == gb);

  std::vector<double> na(g.node_count()), nb(g.node_count());
  ks::gather(g, d.cell_s, d.cell_v, na);
  kp::gather(g, d.cell_s, d.cell_v, nb);
  CHECK(na == nb);

  CHECK(kp::sum(d.cell_s) == doctest::Approx(ks::sum(d.cell_s)).epsilon(1e-12));
  CHECK(kp::dot(d.cell_s, d.p) == doctest::Approx(ks::dot(d.cell_s, d.p)).epsilon(1e-12));
}

} // namespace

TEST_CASE("parallel kernels agree with the serial reference")
{
  compare_all(make(Grid::make(Domain::interval(0, 1), 257), 1));
  compare_all(make(Grid::make(Domain::interval(0, 3), 20001), 2)); // above the parallel cutoff
  compare_all(make(Grid::make(Domain::box(0, 1, 0, 2), 17, 33), 3));
  compare_all(make(Grid::make(Domain::box(0, 1, 0, 1), 129), 4));
}

TEST_CASE("gather is the transpose of cell sampling")
{
  // sum_i gather(s, w)_i v_i = sum_c s_c v(center_c) + w_c . grad v_c
  for (auto grid : {Grid::make(Domain::interval(0, 2), 33), Grid::make(Domain::box(0, 1, 0, 1), 9, 13)})
  {
    auto d = make(grid, 7);
    std::vector<double> nodal_out(grid->node_count());
    ks::gather(*grid, d.cell_s, d.cell_v, nodal_out);
    double lhs = 0.0;
    for (std::size_t i = 0; i < nodal_out.size(); ++i)
      lhs += nodal_out[i] * d.nodal[i];

    std::vector<double> vals(grid->cell_count()),
        grads(grid->cell_count() * static_cast<std::size_t>(grid->dimension()));
    ks::cell_values(*grid, d.nodal, vals);
    ks::cell_gradients(*grid, d.nodal, grads);
    double rhs = ks::dot(d.cell_s, vals) + ks::dot(d.cell_v, grads);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("parallel reductions do not depend on the thread count")
{
#ifdef PXLAP_HAVE_OPENMP
  auto d = make(Grid::make(Domain::box(0, 1, 0, 1), 257), 11);
  int const saved = omp_get_max_threads();
  omp_set_num_threads(1);
  auto const one = kp::power_sums(d.p, d.logs, 0.1);
  double const sum_one = kp::sum(d.cell_s);
  omp_set_num_threads(4);
  auto const four = kp::power_sums(d.p, d.logs, 0.1);
  double const sum_four = kp::sum(d.cell_s);
  omp_set_num_threads(saved);
  CHECK(one.plain == four.plain);
  CHECK(one.weighted == four.weighted);
  CHECK(sum_one == sum_four);
#else
  CHECK(kp::max_threads() == 1);
#endif
}
