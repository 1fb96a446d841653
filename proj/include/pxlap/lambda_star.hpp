#ifndef PXLAP_LAMBDA_STAR_HPP
#define PXLAP_LAMBDA_STAR_HPP

#include <pxlap/luxemburg.hpp>

#include <array>
#include <vector>

namespace pxlap
{

/// ∫|∇u|^{p(x)} / ∫|u|^{p(x)} with unweighted modulars. Not scale invariant
/// unless p is constant. Throws std::invalid_argument for u = 0.
double modular_quotient(GridFunction const &u, ExponentField const &field);

/// Plateau bump: 1 within `plateau` of the center (|x - c| in 1D, Euclidean
/// distance in 2D), then a linear ramp down to 0 over `ramp`.
struct BumpGeometry
{
  std::array<double, 2> center{};
  double plateau = 0.0;
  double ramp = 0.0;
};

/// The bump sampled at the grid nodes (dirichlet_zero).
GridFunction plateau_bump(GridPtr const &grid, BumpGeometry const &bump);

struct QuotientSample
{
  double t = 0.0;
  BumpGeometry bump;
  double quotient = 0.0;
};

struct ExplorerResult
{
  std::vector<QuotientSample> samples;
  /// Smallest p on the plateau and on the ramp (cell-center values).
  double plateau_p_min = 0.0;
  double ramp_p_min = 0.0;
  /// Whether the global minimum of p over the grid lies on the plateau.
  bool plateau_contains_min = false;
  /// Quotients strictly decrease along increasing-t order restricted to t < 0.1,
  /// i.e. they shrink as t decreases.
  bool decreasing_below_tenth = false;

  double ramp_excess() const { return ramp_p_min - plateau_p_min; }
};

/// modular_quotient(t φ) over t_grid for the plateau bump φ. Throws
/// std::invalid_argument when the bump support leaves the domain, the
/// sizes are not positive, or the ramp is narrower than one grid cell.
ExplorerResult bump_family_explorer(ExponentField const &field, BumpGeometry const &bump,
                                    std::vector<double> const &t_grid);

} // namespace pxlap

#endif
