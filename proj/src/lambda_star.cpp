#include <pxlap/lambda_star.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pxlap
{

double modular_quotient(GridFunction const &u, ExponentField const &field)
{
  if (u.is_zero())
    throw std::invalid_argument("modular quotient needs u != 0");
  double const den = modular(u, 1.0, field, Weighting::plain);
  if (!(den > 0.0))
    throw std::invalid_argument("modular quotient underflowed; rescale u");
  return modular(gradient(u), 1.0, field, Weighting::plain) / den;
}

namespace
{

double distance(Grid const &g, std::array<double, 2> const &x, std::array<double, 2> const &c)
{
  return g.dimension() == 1 ? std::abs(x[0] - c[0]) : std::hypot(x[0] - c[0], x[1] - c[1]);
}

double profile(BumpGeometry const &b, double r)
{
  if (r <= b.plateau)
    return 1.0;
  return std::max(0.0, 1.0 - (r - b.plateau) / b.ramp);
}

void check_geometry(Grid const &g, BumpGeometry const &b)
{
  if (!(b.plateau > 0.0) || !(b.ramp > 0.0))
    throw std::invalid_argument("bump plateau and ramp must be positive");
  double const reach = b.plateau + b.ramp;
  Domain const &d = g.domain();
  for (int axis = 0; axis < g.dimension(); ++axis)
    if (b.center[axis] - reach < d.lower()[axis] || b.center[axis] + reach > d.upper()[axis])
      throw std::invalid_argument("bump support leaves the domain");
  double const h = g.dimension() == 1 ? g.hx() : std::max(g.hx(), g.hy());
  if (b.ramp < h)
    throw std::invalid_argument("bump ramp is narrower than one grid cell");
}

} // namespace

GridFunction plateau_bump(GridPtr const &grid, BumpGeometry const &bump)
{
  check_geometry(*grid, bump);
  std::vector<double> v(grid->node_count());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = grid->on_boundary(k) ? 0.0 : profile(bump, distance(*grid, grid->node(k), bump.center));
  return GridFunction(grid, std::move(v), Boundary::dirichlet_zero);
}

ExplorerResult bump_family_explorer(ExponentField const &field, BumpGeometry const &bump,
                                    std::vector<double> const &t_grid)
{
  GridPtr const &grid = field.grid();
  auto const phi = plateau_bump(grid, bump);
  for (double t : t_grid)
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::invalid_argument("bump amplitudes must be positive");

  ExplorerResult r;
  // classify cells by the bump's cell-center value
  auto const centers = center_values(phi).data;
  auto const p = field.cell_p();
  double const inf = std::numeric_limits<double>::infinity();
  r.plateau_p_min = inf;
  r.ramp_p_min = inf;
  double global = inf;
  for (std::size_t c = 0; c < centers.size(); ++c)
  {
    global = std::min(global, p[c]);
    if (centers[c] >= 1.0 - 1e-9)
      r.plateau_p_min = std::min(r.plateau_p_min, p[c]);
    else if (centers[c] > 0.0)
      r.ramp_p_min = std::min(r.ramp_p_min, p[c]);
  }
  r.plateau_contains_min = r.plateau_p_min <= global;

  r.samples.resize(t_grid.size());
#pragma omp parallel for schedule(static) if (t_grid.size() > 4)
  for (std::size_t k = 0; k < t_grid.size(); ++k)
    r.samples[k] = QuotientSample{t_grid[k], bump, modular_quotient(phi.scaled(t_grid[k]), field)};

  std::vector<QuotientSample> small;
  for (auto const &s : r.samples)
    if (s.t < 0.1)
      small.push_back(s);
  std::sort(small.begin(), small.end(),
            [](QuotientSample const &a, QuotientSample const &b) { return a.t < b.t; });
  r.decreasing_below_tenth = true;
  for (std::size_t k = 1; k < small.size(); ++k)
    if (!(small[k - 1].quotient < small[k].quotient))
      r.decreasing_below_tenth = false;
  return r;
}

} // namespace pxlap
