#include <pxlap/luxemburg.hpp>

#include <pxlap/kernels.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pxlap
{

namespace kp = kernels::parallel;

char const *to_string(Boundary bc)
{
  return bc == Boundary::dirichlet_zero ? "dirichlet" : "free";
}

void require_same_grid(Grid const &a, Grid const &b, char const *what)
{
  if (!a.same_as(b))
    throw std::invalid_argument(std::string(what) + ": grids differ");
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values, Boundary bc)
    : _grid(std::move(grid)), _values(std::move(values)), _bc(bc)
{
  if (!_grid)
    throw std::invalid_argument("grid function needs a grid");
  if (_values.size() != _grid->node_count())
    throw std::invalid_argument("grid function has " + std::to_string(_values.size()) +
                                " values for " + std::to_string(_grid->node_count()) + " nodes");
  if (_bc == Boundary::dirichlet_zero)
    for (std::size_t k = 0; k < _values.size(); ++k)
      if (_grid->on_boundary(k) && _values[k] != 0.0)
        throw std::invalid_argument("dirichlet_zero function is nonzero at boundary node " +
                                    std::to_string(k));
}

GridFunction GridFunction::sample(GridPtr grid, std::function<double(double, double)> const &f,
                                  Boundary bc)
{
  std::vector<double> values(grid->node_count());
  for (std::size_t k = 0; k < values.size(); ++k)
  {
    if (bc == Boundary::dirichlet_zero && grid->on_boundary(k))
      continue;
    auto const at = grid->node(k);
    values[k] = f(at[0], at[1]);
  }
  return GridFunction(std::move(grid), std::move(values), bc);
}

GridFunction GridFunction::zero(GridPtr grid, Boundary bc)
{
  std::size_t const n = grid->node_count();
  return GridFunction(std::move(grid), std::vector<double>(n, 0.0), bc);
}

bool GridFunction::is_zero() const
{
  return std::all_of(_values.begin(), _values.end(), [](double v) { return v == 0.0; });
}

double GridFunction::max_abs() const
{
  double m = 0.0;
  for (double v : _values)
    m = std::max(m, std::abs(v));
  return m;
}

GridFunction GridFunction::scaled(double c) const
{
  std::vector<double> out(_values);
  for (double &v : out)
    v *= c;
  return GridFunction(_grid, std::move(out), _bc);
}

GridFunction GridFunction::operator+(GridFunction const &other) const
{
  require_same_grid(*_grid, *other._grid, "grid function sum");
  std::vector<double> out(_values);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] += other._values[k];
  Boundary const bc = (_bc == Boundary::dirichlet_zero && other._bc == Boundary::dirichlet_zero)
                          ? Boundary::dirichlet_zero
                          : Boundary::free;
  return GridFunction(_grid, std::move(out), bc);
}

GridFunction GridFunction::operator-(GridFunction const &other) const
{
  return *this + other.scaled(-1.0);
}

bool CellField::is_zero() const
{
  return std::all_of(magnitude.begin(), magnitude.end(), [](double v) { return v == 0.0; });
}

CellField center_values(GridFunction const &u)
{
  Grid const &g = *u.grid();
  CellField f;
  f.grid = u.grid();
  f.components = 1;
  f.data.resize(g.cell_count());
  kp::cell_values(g, u.values(), f.data);
  f.magnitude.resize(f.data.size());
  for (std::size_t c = 0; c < f.data.size(); ++c)
    f.magnitude[c] = std::abs(f.data[c]);
  return f;
}

GradientField gradient(GridFunction const &u)
{
  Grid const &g = *u.grid();
  int const n = g.dimension();
  GradientField f;
  f.grid = u.grid();
  f.components = n;
  f.data.resize(g.cell_count() * static_cast<std::size_t>(n));
  kp::cell_gradients(g, u.values(), f.data);
  f.magnitude.resize(g.cell_count());
  if (n == 1)
    for (std::size_t c = 0; c < f.magnitude.size(); ++c)
      f.magnitude[c] = std::abs(f.data[c]);
  else
    for (std::size_t c = 0; c < f.magnitude.size(); ++c)
      f.magnitude[c] = std::hypot(f.data[2 * c], f.data[2 * c + 1]);
  return f;
}

namespace
{

std::vector<double> log_of(std::span<double const> magnitude, double scale)
{
  std::vector<double> out(magnitude.size());
  double const inv = 1.0 / scale;
  for (std::size_t c = 0; c < out.size(); ++c)
    out[c] = magnitude[c] > 0.0 ? std::log(magnitude[c] * inv)
                                : -std::numeric_limits<double>::infinity();
  return out;
}

double max_of(std::span<double const> v)
{
  double m = 0.0;
  for (double x : v)
    m = std::max(m, x);
  return m;
}

} // namespace

double modular(CellField const &f, double nu, ExponentField const &field, Weighting weighting)
{
  if (!(nu > 0.0))
    throw std::invalid_argument("modular needs nu > 0");
  require_same_grid(*f.grid, *field.grid(), "modular");
  auto const logs = log_of(f.magnitude, 1.0);
  auto const sums = kp::power_sums(field.cell_p(), logs, std::log(nu));
  double const vol = f.grid->cell_volume();
  return vol * (weighting == Weighting::weighted ? sums.weighted : sums.plain);
}

double modular(GridFunction const &u, double nu, ExponentField const &field, Weighting weighting)
{
  return modular(center_values(u), nu, field, weighting);
}

double luxemburg_norm(std::span<double const> magnitude, std::span<double const> cell_p,
                      double cell_volume)
{
  double const scale = max_of(magnitude);
  if (scale == 0.0)
    return 0.0;
  auto const logs = log_of(magnitude, scale);

  // g(s) = log(vol * sum exp(p (L - s)) / p) is convex and strictly
  // decreasing in s = log(nu / scale), with slope in [-p+, -p-]. Newton on g
  // converges from either side; the bracket guards overflow.
  double const inf = std::numeric_limits<double>::infinity();
  double lo = -inf, hi = inf;
  double s = 0.0;
  for (int it = 0; it < 200; ++it)
  {
    auto const sums = kp::power_sums(cell_p, logs, s);
    double const m = cell_volume * sums.weighted;
    double next;
    if (!std::isfinite(m))
    {
      lo = s;
      next = std::isfinite(hi) ? 0.5 * (lo + hi) : s + 1.0;
    }
    else if (m == 0.0)
    {
      hi = s;
      next = std::isfinite(lo) ? 0.5 * (lo + hi) : s - 1.0;
    }
    else
    {
      double const g = std::log(m);
      if (g == 0.0)
        break;
      (g > 0.0 ? lo : hi) = s;
      next = s + g * sums.weighted / sums.plain;
      // Newton stays inside the bracket in exact arithmetic; rounding can put
      // it on an endpoint. Bisect only once both ends are known.
      if (!(next > lo && next < hi) && std::isfinite(lo) && std::isfinite(hi))
        next = 0.5 * (lo + hi);
    }
    bool const done = std::abs(next - s) <= 1e-15 * std::max(1.0, std::abs(s));
    s = next;
    if (done)
      break;
  }
  return scale * std::exp(s);
}

double luxemburg_norm(CellField const &f, ExponentField const &field)
{
  require_same_grid(*f.grid, *field.grid(), "luxemburg_norm");
  return luxemburg_norm(f.magnitude, field.cell_p(), f.grid->cell_volume());
}

double luxemburg_norm(GridFunction const &u, ExponentField const &field)
{
  return luxemburg_norm(center_values(u), field);
}

double lp_norm(CellField const &f, double p, Weighting weighting)
{
  if (!(p > 1.0))
    throw std::invalid_argument("lp_norm needs p > 1");
  double const scale = max_of(f.magnitude);
  if (scale == 0.0)
    return 0.0;
  auto const logs = log_of(f.magnitude, scale);
  std::vector<double> const ps(logs.size(), p);
  auto const sums = kp::power_sums(ps, logs, 0.0);
  double const integral =
      f.grid->cell_volume() * (weighting == Weighting::weighted ? sums.weighted : sums.plain);
  return scale * std::pow(integral, 1.0 / p);
}

double lp_norm(GridFunction const &u, double p, Weighting weighting)
{
  return lp_norm(center_values(u), p, weighting);
}

SandwichReport check_norm_sandwich(CellField const &f, ExponentField const &field,
                                   ExponentStats const &stats, double slack)
{
  if (!(stats.tau < 1.0))
    throw std::domain_error("norm sandwich needs τ < 1");
  SandwichReport r;
  r.mid = luxemburg_norm(f, field);
  r.lower = lp_norm(f, stats.p_minus, Weighting::weighted) / std::pow(1.0 + stats.tau, 1.0 / stats.p_minus);
  r.upper = lp_norm(f, stats.p_plus, Weighting::weighted) / std::pow(1.0 - stats.tau, 1.0 / stats.p_plus);
  double const tol = slack * std::max(1.0, r.mid);
  r.holds = r.lower <= r.mid + tol && r.mid <= r.upper + tol;
  return r;
}

SandwichReport check_norm_sandwich(GridFunction const &u, ExponentField const &field,
                                   ExponentStats const &stats, double slack)
{
  return check_norm_sandwich(center_values(u), field, stats, slack);
}

} // namespace pxlap
