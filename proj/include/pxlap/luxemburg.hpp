#ifndef PXLAP_LUXEMBURG_HPP
#define PXLAP_LUXEMBURG_HPP

#include <pxlap/domain.hpp>

#include <functional>
#include <span>
#include <vector>

namespace pxlap
{

enum class Boundary
{
  dirichlet_zero,
  free
};

char const *to_string(Boundary bc);

/// Nodal values of a continuous piecewise-(bi)linear function.
///
/// A dirichlet_zero function vanishes at every boundary node; the
/// constructor rejects anything else.
class GridFunction
{
public:
  GridFunction(GridPtr grid, std::vector<double> values, Boundary bc);

  /// Samples f at the nodes. Boundary nodes are set to 0 for dirichlet_zero.
  static GridFunction sample(GridPtr grid, std::function<double(double, double)> const &f,
                             Boundary bc);
  static GridFunction zero(GridPtr grid, Boundary bc);

  GridPtr const &grid() const { return _grid; }
  Boundary boundary() const { return _bc; }
  std::span<double const> values() const { return _values; }
  std::span<double> values() { return _values; }
  std::size_t size() const { return _values.size(); }
  double operator[](std::size_t k) const { return _values[k]; }

  bool is_zero() const;
  double max_abs() const;

  GridFunction scaled(double c) const;
  GridFunction operator+(GridFunction const &other) const;
  GridFunction operator-(GridFunction const &other) const;

private:
  GridPtr _grid;
  std::vector<double> _values;
  Boundary _bc;
};

/// Per-cell samples used by the midpoint rule: `components` numbers per cell
/// and their Euclidean magnitude.
struct CellField
{
  GridPtr grid;
  int components = 1;
  std::vector<double> data;
  std::vector<double> magnitude;

  bool is_zero() const;
};

using GradientField = CellField;

/// Cell-center values of u.
CellField center_values(GridFunction const &u);
/// Forward differences in 1D, cell-averaged bilinear gradients in 2D.
GradientField gradient(GridFunction const &u);

enum class Weighting
{
  /// integrand divided by the exponent
  weighted,
  plain
};

/// Midpoint approximation of the integral of |f/nu|^p(x) / p(x) (weighted) or
/// |f/nu|^p(x) (plain).
double modular(CellField const &f, double nu, ExponentField const &field,
               Weighting weighting = Weighting::weighted);
double modular(GridFunction const &u, double nu, ExponentField const &field,
               Weighting weighting = Weighting::weighted);

/// The nu > 0 with modular(f, nu) = 1; 0 for f = 0.
double luxemburg_norm(CellField const &f, ExponentField const &field);
double luxemburg_norm(GridFunction const &u, ExponentField const &field);

/// Root of vol * sum_c |m_c / nu|^{p_c} / p_c = 1 over raw cell data.
double luxemburg_norm(std::span<double const> magnitude, std::span<double const> cell_p,
                      double cell_volume);

/// Constant-exponent norm: (int |f|^p / p)^(1/p) when weighted, the
/// classical L^p norm otherwise.
double lp_norm(CellField const &f, double p, Weighting weighting);
double lp_norm(GridFunction const &u, double p, Weighting weighting);

struct SandwichReport
{
  double lower = 0.0;
  double mid = 0.0;
  double upper = 0.0;
  bool holds = true;
};

/// Evaluates ‖f‖_{p-}/(1+τ)^{1/p-} <= ‖f‖_{p(x)} <= ‖f‖_{p+}/(1-τ)^{1/p+}
/// with weighted constant-exponent norms. Throws if τ >= 1.
SandwichReport check_norm_sandwich(CellField const &f, ExponentField const &field,
                                   ExponentStats const &stats, double slack = 1e-9);
SandwichReport check_norm_sandwich(GridFunction const &u, ExponentField const &field,
                                   ExponentStats const &stats, double slack = 1e-9);

/// Throws std::invalid_argument when grids differ.
void require_same_grid(Grid const &a, Grid const &b, char const *what);

} // namespace pxlap

#endif
