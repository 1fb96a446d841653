#include <pxlap/domain.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace pxlap
{

namespace
{

double cube_volume(Cube const &cube, int dimension)
{
  return dimension == 1 ? cube.side : cube.side * cube.side;
}

bool interiors_overlap(Cube const &a, Cube const &b, int dimension)
{
  for (int axis = 0; axis < dimension; ++axis)
  {
    double const lo = std::max(a.lower[axis], b.lower[axis]);
    double const hi = std::min(a.lower[axis] + a.side, b.lower[axis] + b.side);
    if (hi <= lo)
      return false;
  }
  return true;
}

std::string format_double(double v)
{
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

} // namespace

Domain Domain::interval(double a, double b)
{
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("interval requires a < b");
  Domain d;
  d._kind = DomainKind::interval;
  d._dimension = 1;
  d._lower = {a, 0.0};
  d._upper = {b, 0.0};
  d._measure = b - a;
  return d;
}

Domain Domain::box(double x0, double x1, double y0, double y1)
{
  if (!(x0 < x1) || !(y0 < y1))
    throw std::invalid_argument("box requires x0 < x1 and y0 < y1");
  Domain d;
  d._kind = DomainKind::box;
  d._dimension = 2;
  d._lower = {x0, y0};
  d._upper = {x1, y1};
  d._measure = (x1 - x0) * (y1 - y0);
  return d;
}

Domain Domain::disk(double cx, double cy, double radius)
{
  if (!(radius > 0.0))
    throw std::invalid_argument("disk requires radius > 0");
  Domain d;
  d._kind = DomainKind::disk;
  d._dimension = 2;
  d._radius = radius;
  d._lower = {cx - radius, cy - radius};
  d._upper = {cx + radius, cy + radius};
  d._measure = std::numbers::pi * radius * radius;
  return d;
}

Domain Domain::cube_union(int dimension, std::vector<Cube> cubes)
{
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("cube union dimension must be 1 or 2");
  for (auto const &c : cubes)
    if (!(c.side > 0.0))
      throw std::invalid_argument("cube side must be positive");

  // Sweep along x: only cubes whose x-ranges intersect can overlap.
  std::vector<std::size_t> order(cubes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return cubes[a].lower[0] < cubes[b].lower[0]; });
  std::vector<std::size_t> active;
  for (std::size_t i : order)
  {
    double const x = cubes[i].lower[0];
    std::erase_if(active, [&](std::size_t j) { return cubes[j].lower[0] + cubes[j].side <= x; });
    for (std::size_t j : active)
      if (interiors_overlap(cubes[i], cubes[j], dimension))
        throw std::invalid_argument("cubes " + std::to_string(std::min(i, j)) + " and " +
                                    std::to_string(std::max(i, j)) + " overlap");
    active.push_back(i);
  }

  Domain d;
  d._kind = DomainKind::cube_union;
  d._dimension = dimension;
  d._lower = {std::numeric_limits<double>::max(), 0.0};
  d._upper = {std::numeric_limits<double>::lowest(), 0.0};
  if (dimension == 2)
  {
    d._lower[1] = std::numeric_limits<double>::max();
    d._upper[1] = std::numeric_limits<double>::lowest();
  }
  double measure = 0.0;
  for (auto const &c : cubes)
  {
    measure += cube_volume(c, dimension);
    for (int axis = 0; axis < dimension; ++axis)
    {
      d._lower[axis] = std::min(d._lower[axis], c.lower[axis]);
      d._upper[axis] = std::max(d._upper[axis], c.lower[axis] + c.side);
    }
  }
  if (cubes.empty())
  {
    d._lower = {};
    d._upper = {};
  }
  d._measure = measure;
  d._cubes = std::move(cubes);
  return d;
}

Domain Domain::scaled(double factor) const
{
  if (!(factor > 0.0))
    throw std::invalid_argument("scale factor must be positive");
  switch (_kind)
  {
  case DomainKind::interval: return interval(factor * _lower[0], factor * _upper[0]);
  case DomainKind::box:
    return box(factor * _lower[0], factor * _upper[0], factor * _lower[1], factor * _upper[1]);
  case DomainKind::disk:
    return disk(factor * 0.5 * (_lower[0] + _upper[0]), factor * 0.5 * (_lower[1] + _upper[1]),
                factor * _radius);
  case DomainKind::cube_union:
  {
    std::vector<Cube> cubes = _cubes;
    for (auto &c : cubes)
    {
      c.lower[0] *= factor;
      c.lower[1] *= factor;
      c.side *= factor;
    }
    return cube_union(_dimension, std::move(cubes));
  }
  }
  return *this;
}

std::string Domain::describe() const
{
  switch (_kind)
  {
  case DomainKind::interval:
    return "interval(" + format_double(_lower[0]) + "," + format_double(_upper[0]) + ")";
  case DomainKind::box:
    return "box(" + format_double(_lower[0]) + "," + format_double(_upper[0]) + "," +
           format_double(_lower[1]) + "," + format_double(_upper[1]) + ")";
  case DomainKind::disk:
    return "disk(" + format_double(0.5 * (_lower[0] + _upper[0])) + "," +
           format_double(0.5 * (_lower[1] + _upper[1])) + "," + format_double(_radius) + ")";
  case DomainKind::cube_union:
    return "cube_union(" + std::to_string(_cubes.size()) + " cubes)";
  }
  return {};
}

// ---------------------------------------------------------------------------

Grid::Grid(Domain domain, std::size_t nx, std::size_t ny)
    : _domain(std::move(domain)), _nx(nx), _ny(ny)
{
  _hx = _domain.length(0) / static_cast<double>(_nx - 1);
  _hy = _domain.dimension() == 1 ? 1.0 : _domain.length(1) / static_cast<double>(_ny - 1);
}

GridPtr Grid::make(Domain const &domain, std::size_t nodes_x, std::size_t nodes_y)
{
  if (domain.kind() != DomainKind::interval && domain.kind() != DomainKind::box)
    throw std::invalid_argument("grids are only built on intervals and boxes, not " +
                                domain.describe());
  if (nodes_x < 3)
    throw std::invalid_argument("a grid needs at least 3 nodes per axis");
  if (domain.dimension() == 1)
    return GridPtr(new Grid(domain, nodes_x, 1));
  if (nodes_y == 0)
    nodes_y = nodes_x;
  if (nodes_y < 3)
    throw std::invalid_argument("a grid needs at least 3 nodes per axis");
  return GridPtr(new Grid(domain, nodes_x, nodes_y));
}

bool Grid::on_boundary(std::size_t index) const
{
  std::size_t const i = index % _nx;
  if (i == 0 || i == _nx - 1)
    return true;
  if (dimension() == 1)
    return false;
  std::size_t const j = index / _nx;
  return j == 0 || j == _ny - 1;
}

bool Grid::same_as(Grid const &other) const
{
  if (this == &other)
    return true;
  return dimension() == other.dimension() && _nx == other._nx && _ny == other._ny &&
         _domain.lower() == other._domain.lower() && _domain.upper() == other._domain.upper();
}

GridPtr Grid::scaled(double factor) const
{
  return GridPtr(new Grid(_domain.scaled(factor), _nx, _ny));
}

// ---------------------------------------------------------------------------

ExponentField::ExponentField(GridPtr grid, std::vector<double> node_samples)
    : _grid(std::move(grid)), _nodes(std::move(node_samples))
{
  if (!_grid)
    throw std::invalid_argument("exponent field needs a grid");
  if (_nodes.size() != _grid->node_count())
    throw std::invalid_argument("exponent field has " + std::to_string(_nodes.size()) +
                                " samples for " + std::to_string(_grid->node_count()) +
                                " nodes");

  for (std::size_t k = 0; k < _nodes.size(); ++k)
  {
    double const p = _nodes[k];
    if (!(p > 1.0) || !std::isfinite(p))
    {
      auto const at = _grid->node(k);
      std::ostringstream msg;
      msg.precision(17);
      msg << "exponent out of range: p = " << p << " at node " << k << " (x = " << at[0];
      if (_grid->dimension() == 2)
        msg << ", y = " << at[1];
      msg << "); need 1 < p < inf";
      throw RangeError(msg.str());
    }
  }
  auto const [lo, hi] = std::minmax_element(_nodes.begin(), _nodes.end());
  _p_minus = *lo;
  _p_plus = *hi;

  Grid const &g = *_grid;
  _cell_p.resize(g.cell_count());
  if (g.dimension() == 1)
  {
    for (std::size_t c = 0; c < g.cell_count(); ++c)
      _cell_p[c] = 0.5 * (_nodes[c] + _nodes[c + 1]);
  }
  else
  {
    std::size_t const nx = g.nx();
    for (std::size_t j = 0; j < g.cells_y(); ++j)
      for (std::size_t i = 0; i < g.cells_x(); ++i)
      {
        std::size_t const n0 = i + nx * j;
        _cell_p[i + g.cells_x() * j] =
            0.25 * (_nodes[n0] + _nodes[n0 + 1] + _nodes[n0 + nx] + _nodes[n0 + nx + 1]);
      }
  }
}

ExponentField ExponentField::restrict_1d(std::size_t first, std::size_t last) const
{
  Grid const &g = *_grid;
  if (g.dimension() != 1)
    throw std::invalid_argument("restrict_1d needs a 1D field");
  if (!(first < last) || last >= g.nx() || last - first < 2)
    throw std::invalid_argument("restrict_1d needs at least 3 nodes inside the grid");
  auto sub = Grid::make(Domain::interval(g.x(first), g.x(last)), last - first + 1);
  return ExponentField(sub, std::vector<double>(_nodes.begin() + static_cast<long>(first),
                                                _nodes.begin() + static_cast<long>(last) + 1));
}

ExponentField build_exponent_field(GridPtr const &grid, Expression const &expression)
{
  if (grid->dimension() == 1 && expression.uses_y())
    throw std::invalid_argument("exponent expression uses y on a 1D domain");
  std::vector<double> samples(grid->node_count());
  for (std::size_t k = 0; k < samples.size(); ++k)
  {
    auto const at = grid->node(k);
    samples[k] = expression(at[0], at[1]);
  }
  return ExponentField(grid, std::move(samples));
}

ExponentField build_exponent_field(GridPtr const &grid, std::vector<double> node_samples)
{
  return ExponentField(grid, std::move(node_samples));
}

ExponentField constant_exponent(GridPtr const &grid, double p)
{
  return ExponentField(grid, std::vector<double>(grid->node_count(), p));
}

std::vector<double> read_exponent_csv(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open exponent CSV '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (line.empty() || line[0] == '#')
      continue;
    auto const comma = line.find_last_of(',');
    std::string const field = comma == std::string::npos ? line : line.substr(comma + 1);
    char *end = nullptr;
    double const v = std::strtod(field.c_str(), &end);
    if (end == field.c_str())
    {
      // header row
      if (values.empty() && line_no == 1)
        continue;
      throw std::invalid_argument("exponent CSV '" + path + "' line " +
                                  std::to_string(line_no) + ": not a number");
    }
    values.push_back(v);
  }
  return values;
}

// ---------------------------------------------------------------------------

std::vector<std::string> ExponentStats::warning_messages() const
{
  std::vector<std::string> out;
  if (warnings & static_cast<unsigned>(StatsWarning::sigma_not_below_one))
    out.push_back("theorem bounds unavailable: σ ≥ 1");
  if (warnings & static_cast<unsigned>(StatsWarning::tau_not_below_one))
    out.push_back("theorem bounds unavailable: τ ≥ 1");
  return out;
}

ExponentStats exponent_stats(double p_minus, double p_plus, int dimension, double measure)
{
  if (!(p_minus > 1.0) || !(p_plus >= p_minus) || !std::isfinite(p_plus))
    throw RangeError("exponent bounds must satisfy 1 < p- <= p+ < inf");

  ExponentStats s;
  s.dimension = dimension;
  s.measure = measure;
  s.p_minus = p_minus;
  s.p_plus = p_plus;
  double const spread = 1.0 / p_minus - 1.0 / p_plus;
  s.sigma = dimension * spread;
  s.tau = spread * measure;
  if (s.sigma >= 1.0)
    s.warnings |= static_cast<unsigned>(StatsWarning::sigma_not_below_one);
  if (s.tau >= 1.0)
  {
    s.warnings |= static_cast<unsigned>(StatsWarning::tau_not_below_one);
    s.kappa = std::numeric_limits<double>::infinity();
  }
  else
  {
    s.kappa = std::pow(1.0 + s.tau, 1.0 / p_minus) / std::pow(1.0 - s.tau, 1.0 / p_plus);
  }
  return s;
}

ExponentStats exponent_stats(ExponentField const &field, Domain const &domain)
{
  return exponent_stats(field.p_minus(), field.p_plus(), domain.dimension(), domain.measure());
}

// ---------------------------------------------------------------------------

namespace
{

enum class CellRelation
{
  outside,
  straddles,
  inside
};

CellRelation classify(Domain const &domain, Cube const &cube)
{
  int const n = domain.dimension();
  double const s = cube.side;
  if (domain.kind() == DomainKind::disk)
  {
    double const cx = 0.5 * (domain.lower()[0] + domain.upper()[0]);
    double const cy = 0.5 * (domain.lower()[1] + domain.upper()[1]);
    double const r2 = domain.radius() * domain.radius();
    // Farthest and nearest cube points from the center.
    double far2 = 0.0, near2 = 0.0;
    double const lo[2] = {cube.lower[0] - cx, cube.lower[1] - cy};
    for (int a = 0; a < 2; ++a)
    {
      double const l = lo[a], h = lo[a] + s;
      far2 += std::max(l * l, h * h);
      double const nearest = std::clamp(0.0, l, h);
      near2 += nearest * nearest;
    }
    if (far2 <= r2)
      return CellRelation::inside;
    if (near2 < r2)
      return CellRelation::straddles;
    return CellRelation::outside;
  }

  // interval or box
  bool inside = true;
  for (int a = 0; a < n; ++a)
  {
    double const l = cube.lower[a], h = l + s;
    if (h <= domain.lower()[a] || l >= domain.upper()[a])
      return CellRelation::outside;
    if (l < domain.lower()[a] || h > domain.upper()[a])
      inside = false;
  }
  return inside ? CellRelation::inside : CellRelation::straddles;
}

} // namespace

CubeCover cube_cover_at_level(Domain const &domain, int level)
{
  if (domain.kind() == DomainKind::cube_union)
    return CubeCover{domain, domain, 0.0};
  if (level < 0 || level > 24)
    throw std::invalid_argument("cube cover level must lie in [0, 24]");

  double const side = std::ldexp(1.0, -level);
  int const n = domain.dimension();
  long first[2] = {0, 0}, last[2] = {0, 0};
  for (int a = 0; a < n; ++a)
  {
    first[a] = static_cast<long>(std::floor(domain.lower()[a] / side));
    last[a] = static_cast<long>(std::ceil(domain.upper()[a] / side));
  }

  std::vector<Cube> inner, outer;
  for (long j = first[1]; j < (n == 2 ? last[1] : first[1] + 1); ++j)
    for (long i = first[0]; i < last[0]; ++i)
    {
      Cube c;
      c.lower = {static_cast<double>(i) * side, n == 2 ? static_cast<double>(j) * side : 0.0};
      c.side = side;
      auto const rel = classify(domain, c);
      if (rel == CellRelation::outside)
        continue;
      outer.push_back(c);
      if (rel == CellRelation::inside)
        inner.push_back(c);
    }

  return CubeCover{Domain::cube_union(n, std::move(inner)), Domain::cube_union(n, std::move(outer)),
                   side};
}

CubeCover cube_cover(Domain const &domain, double epsilon)
{
  if (!(epsilon > 0.0))
    throw std::invalid_argument("cube cover needs epsilon > 0");
  if (domain.kind() == DomainKind::cube_union)
    return CubeCover{domain, domain, 0.0};

  int level = 0;
  while (std::ldexp(1.0, -level) > epsilon)
    ++level;
  for (; level <= 24; ++level)
  {
    auto cover = cube_cover_at_level(domain, level);
    if (cover.gap() < epsilon)
      return cover;
  }
  throw std::runtime_error("cube cover did not reach gap < epsilon by level 24");
}

} // namespace pxlap
