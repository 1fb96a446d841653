#ifndef PXLAP_DOMAIN_HPP
#define PXLAP_DOMAIN_HPP

#include <pxlap/expression.hpp>

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pxlap
{

/// Axis-aligned cube (interval in 1D, square in 2D) given by its lower
/// corner and side length.
struct Cube
{
  std::array<double, 2> lower{};
  double side = 0.0;
};

enum class DomainKind
{
  interval,
  box,
  disk,
  cube_union
};

/// Bounded region of R^n, n in {1, 2}.
///
/// Intervals and boxes carry grids. Disks only take part in cube covers.
class Domain
{
public:
  static Domain interval(double a, double b);
  static Domain box(double x0, double x1, double y0, double y1);
  static Domain disk(double cx, double cy, double radius);
  /// Throws if two cubes overlap in their interiors. May be empty (measure 0).
  static Domain cube_union(int dimension, std::vector<Cube> cubes);

  DomainKind kind() const { return _kind; }
  int dimension() const { return _dimension; }
  double measure() const { return _measure; }

  /// Bounding box; the y entries are 0 in 1D.
  std::array<double, 2> const &lower() const { return _lower; }
  std::array<double, 2> const &upper() const { return _upper; }
  double length(int axis) const { return _upper[axis] - _lower[axis]; }

  std::vector<Cube> const &cubes() const { return _cubes; }
  double radius() const { return _radius; }

  /// Image under x -> factor * x.
  Domain scaled(double factor) const;

  std::string describe() const;

private:
  Domain() = default;

  DomainKind _kind = DomainKind::interval;
  int _dimension = 1;
  double _measure = 0.0;
  std::array<double, 2> _lower{};
  std::array<double, 2> _upper{};
  double _radius = 0.0;
  std::vector<Cube> _cubes;
};

/// Uniform tensor grid over an interval or a box. Nodes are numbered with
/// x fastest: index = i + nx * j.
class Grid
{
public:
  static std::shared_ptr<Grid const> make(Domain const &domain, std::size_t nodes_x,
                                          std::size_t nodes_y = 0);

  Domain const &domain() const { return _domain; }
  int dimension() const { return _domain.dimension(); }

  std::size_t nx() const { return _nx; }
  std::size_t ny() const { return _ny; }
  std::size_t node_count() const { return _nx * _ny; }
  std::size_t cells_x() const { return _nx - 1; }
  std::size_t cells_y() const { return dimension() == 1 ? 1 : _ny - 1; }
  std::size_t cell_count() const { return cells_x() * cells_y(); }

  double hx() const { return _hx; }
  double hy() const { return _hy; }
  /// Measure of one cell.
  double cell_volume() const { return dimension() == 1 ? _hx : _hx * _hy; }

  double x(std::size_t i) const { return _domain.lower()[0] + static_cast<double>(i) * _hx; }
  double y(std::size_t j) const
  {
    return dimension() == 1 ? 0.0 : _domain.lower()[1] + static_cast<double>(j) * _hy;
  }
  std::array<double, 2> node(std::size_t index) const
  {
    return {x(index % _nx), y(index / _nx)};
  }

  bool on_boundary(std::size_t index) const;

  /// Same layout and coordinates (used to check that fields and functions
  /// are compatible).
  bool same_as(Grid const &other) const;

  /// Grid over the image of the domain under x -> factor * x.
  std::shared_ptr<Grid const> scaled(double factor) const;

private:
  Grid(Domain domain, std::size_t nx, std::size_t ny);

  Domain _domain;
  std::size_t _nx;
  std::size_t _ny;
  double _hx;
  double _hy;
};

using GridPtr = std::shared_ptr<Grid const>;

class RangeError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// Exponent p sampled at grid nodes, 1 < p_minus <= p <= p_plus < inf.
/// Between nodes p is multilinear; cell_p holds the cell-center values used
/// by the midpoint quadrature.
class ExponentField
{
public:
  /// Throws RangeError naming the first node with p <= 1 (or non-finite).
  ExponentField(GridPtr grid, std::vector<double> node_samples);

  GridPtr const &grid() const { return _grid; }
  std::span<double const> nodes() const { return _nodes; }
  std::span<double const> cell_p() const { return _cell_p; }
  double p_minus() const { return _p_minus; }
  double p_plus() const { return _p_plus; }
  bool is_constant() const { return _p_minus == _p_plus; }

  /// Restriction to the nodes [first, last] of a 1D grid.
  ExponentField restrict_1d(std::size_t first, std::size_t last) const;

private:
  GridPtr _grid;
  std::vector<double> _nodes;
  std::vector<double> _cell_p;
  double _p_minus = 0.0;
  double _p_plus = 0.0;
};

ExponentField build_exponent_field(GridPtr const &grid, Expression const &expression);
ExponentField build_exponent_field(GridPtr const &grid, std::vector<double> node_samples);
ExponentField constant_exponent(GridPtr const &grid, double p);

/// Reads node samples from CSV: one value per line (optional header), or
/// rows whose last column is the value. Row order must follow node order.
std::vector<double> read_exponent_csv(std::string const &path);

enum class StatsWarning : unsigned
{
  none = 0,
  sigma_not_below_one = 1,
  tau_not_below_one = 2
};

struct ExponentStats
{
  int dimension = 1;
  double measure = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
  /// Infinite when tau >= 1.
  double kappa = 1.0;
  unsigned warnings = 0;

  bool bounds_available() const { return warnings == 0; }
  std::vector<std::string> warning_messages() const;
};

ExponentStats exponent_stats(double p_minus, double p_plus, int dimension, double measure);
ExponentStats exponent_stats(ExponentField const &field, Domain const &domain);

struct CubeCover
{
  Domain inner;
  Domain outer;
  double side = 0.0;
  double gap() const { return outer.measure() - inner.measure(); }
};

/// Dyadic cube covers inner ⊆ domain ⊆ outer. The side 2^-m uses the smallest
/// m with 2^-m <= epsilon and |outer| - |inner| < epsilon.
CubeCover cube_cover(Domain const &domain, double epsilon);

/// Covers at a fixed dyadic level (side 2^-level).
CubeCover cube_cover_at_level(Domain const &domain, int level);

} // namespace pxlap

#endif
