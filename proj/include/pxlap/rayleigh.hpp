#ifndef PXLAP_RAYLEIGH_HPP
#define PXLAP_RAYLEIGH_HPP

#include <pxlap/luxemburg.hpp>

#include <span>
#include <vector>

namespace pxlap
{

/// K = ‖∇u‖_{p(x)}, k = ‖u‖_{p(x)}, the modular ratio S and the quotient K/k.
/// With a free boundary tag the same numbers are L, l, T of the Neumann-type
/// problem.
struct RayleighState
{
  GridFunction u;
  double K = 0.0;
  double k = 0.0;
  double S = 0.0;
  double quotient = 0.0;
};

/// Throws std::invalid_argument for u = 0.
RayleighState rayleigh(GridFunction const &u, ExponentField const &field);

/// <k'(u), v>: the derivative of the Luxemburg norm at u in direction v.
double pairing_k_prime(GridFunction const &u, GridFunction const &v, ExponentField const &field);

/// <K'(u), v>: the derivative of ‖∇u‖_{p(x)} in direction v. Throws if ∇u = 0.
double pairing_K_prime(GridFunction const &u, GridFunction const &v, ExponentField const &field);

/// Both pairings against every hat function, plus the state they came from.
/// dK[i] = <K'(u), phi_i>, dk[i] = <k'(u), phi_i>; pairings with any grid
/// function v are the dot products with its nodal values. dK is zero when
/// ∇u = 0.
struct NodalDerivatives
{
  double K = 0.0;
  double k = 0.0;
  double S = 0.0;
  std::vector<double> dK;
  std::vector<double> dk;

  double quotient() const { return K / k; }
};

NodalDerivatives nodal_derivatives(GridFunction const &u, ExponentField const &field);

/// Hat functions of the discrete space: interior nodes for dirichlet_zero,
/// all nodes for free.
std::vector<GridFunction> hat_basis(GridPtr const &grid, Boundary bc);

/// Midpoint integral of |v|.
double l1_norm(GridFunction const &v);

/// Integral of each hat function (the midpoint rule's nodal masses).
std::vector<double> hat_masses(Grid const &grid);

/// max_i |<K'(u),v_i> - lambda <k'(u),v_i>| / ‖v_i‖_1 over the test basis.
/// For hats this is a nodal strong-form defect of the Euler-Lagrange
/// equation: O(h^2) at a true eigenpair, O(1) at a wrong lambda.
double el_residual(GridFunction const &u, double lambda, ExponentField const &field,
                   std::span<GridFunction const> test_basis);

/// el_residual against the hat basis of u's boundary tag, in one pass.
double el_residual_hats(GridFunction const &u, double lambda, ExponentField const &field);

} // namespace pxlap

#endif
