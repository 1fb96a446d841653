#ifndef PXLAP_EIGENSOLVER_HPP
#define PXLAP_EIGENSOLVER_HPP

#include <pxlap/rayleigh.hpp>
#include <pxlap/spectrum.hpp>

#include <cstdint>
#include <vector>

namespace pxlap
{

struct SolverOptions
{
  int max_iter = 2000;
  /// Convergence threshold on the hat-basis Euler-Lagrange residual.
  double tol = 1e-5;
  std::uint64_t seed = 1;
  /// Independent descents; the lowest level wins. Restart 0 uses the
  /// deterministic initial guess, restart r > 0 perturbs it with
  /// std::mt19937_64 seeded by seed + r.
  int restarts = 5;
  /// Free boundary only: restrict to functions odd under x -> a + b - x, which
  /// excludes constants.
  bool odd_symmetry = false;
};

struct EigenpairResult
{
  double lambda = 0.0;
  GridFunction u;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  Boundary boundary = Boundary::dirichlet_zero;
  /// Quotient after every accepted step, starting with the initial guess.
  std::vector<double> trace;
  /// No sign change across interior nodes.
  bool single_signed = false;
};

/// u / k(u). Throws std::invalid_argument for u = 0.
GridFunction project_to_sphere(GridFunction const &u, ExponentField const &field);

/// Minimizes K/k by preconditioned projected descent. With a free boundary
/// and no constraint the minimum is 0 at constants and is returned directly.
/// Requires at least 17 nodes per axis.
EigenpairResult first_eigenpair(ExponentField const &field, Boundary bc,
                                SolverOptions const &opts = {});

/// First nontrivial free-boundary level: descent restricted to functions
/// whose positive and negative parts carry equal modular mass.
EigenpairResult neumann_first_nontrivial(ExponentField const &field,
                                         SolverOptions const &opts = {});

/// Upper estimates for the first j_max Dirichlet levels of a 1D problem from
/// sign-alternating gluing of first eigenfunctions on j subintervals. Each
/// subinterval needs at least 8 nodes.
Spectrum nodal_modes_1d(ExponentField const &field, int j_max, SolverOptions const &opts = {});

/// Detail behind nodal_modes_1d for one j.
struct NodalMode
{
  int j = 1;
  /// Node indices of the breakpoints, including both ends.
  std::vector<std::size_t> breaks;
  /// First eigenvalue of each subinterval.
  std::vector<double> piece_values;
  /// Glued function (each piece normalized to k = 1, alternating signs).
  GridFunction glued;
  /// Quotient of the glued function.
  double value = 0.0;
};

NodalMode nodal_mode_1d(ExponentField const &field, int j, SolverOptions const &opts = {});

} // namespace pxlap

#endif
