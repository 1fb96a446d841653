#ifndef PXLAP_COUNTING_HPP
#define PXLAP_COUNTING_HPP

#include <pxlap/domain.hpp>
#include <pxlap/luxemburg.hpp>
#include <pxlap/spectrum.hpp>

#include <vector>

namespace pxlap
{

/// #{j : λ_j < lambda} for a spectrum sorted by value.
int counting_function(Spectrum const &spectrum, double lambda);

/// Thrown when σ >= 1 or τ >= 1; the message names the failing condition.
class BoundsUnavailable : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// Throws BoundsUnavailable unless σ < 1 and τ < 1.
void require_bounds(ExponentStats const &stats);

struct CountingReport
{
  std::vector<double> lambda;
  std::vector<int> N;
  /// C1 |Ω| (λ/κ)^{n/(1+σ)} and C2 |Ω| (κλ)^{n/(1-σ)}.
  std::vector<double> lower;
  std::vector<double> upper;
  ExponentStats stats;
  double anchor_lambda = 0.0;
  int anchor_N = 0;
  double C1 = 0.0;
  double C2 = 0.0;
  /// Samples at or above the anchor where N leaves [lower, upper].
  std::vector<std::size_t> violations;
};

/// Theorem curves over lambda_grid with C1, C2 fixed at the anchor: the
/// lower curve passes through max(N_anchor - 1, 0) and the upper one through
/// N_anchor + 1 there, which leaves room for the unit jumps of N. Samples
/// below the anchor are reported but not checked. N is left empty.
CountingReport theorem_bounds(ExponentStats const &stats, std::vector<double> const &lambda_grid,
                              double anchor_lambda, int anchor_N);

/// N(λ) from the spectrum plus the curves anchored at anchor_lambda, with
/// violations flagged.
CountingReport counting_report(Spectrum const &spectrum, ExponentStats const &stats,
                               std::vector<double> const &lambda_grid, double anchor_lambda);

/// Least-squares slope of log N against log λ over samples with N >= 1.
/// Throws std::invalid_argument with fewer than 5 such samples.
double fit_growth_exponent(CountingReport const &report);
double fit_growth_exponent(std::vector<double> const &lambda, std::vector<int> const &N);

/// Geometric grid of `count` points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

struct CubeEstimate
{
  double lambda0 = 0.0;
  double lambda = 0.0;
  double lambda_prime = 0.0;
  long r = 1;
  long s = 1;
  /// (λ0/λ)^{1/(1+σ)} and (λ0/λ')^{1/(1-σ)}
  double a_side = 0.0;
  double b_side = 0.0;
  long lower_count = 0;
  long upper_count = 0;
};

/// Sums r ⌊a_i/a_side⌋^n and s (⌊a_i/b_side⌋ + 1)^n over the cubes of the
/// cover. Requires lambda0 < lambda < lambda_prime.
CubeEstimate cube_count_bounds(ExponentStats const &stats, Domain const &cover, double lambda,
                               double lambda_prime, double lambda0, long r = 1, long s = 1);

struct HomothetyReport
{
  double delta = 0.0;
  double sigma = 0.0;
  /// ‖∇u‖_{p+}/‖u‖_{p-} on Ω and on δΩ
  double plus_minus_before = 0.0;
  double plus_minus_after = 0.0;
  /// ‖∇u‖_{p-}/‖u‖_{p+} on Ω and on δΩ
  double minus_plus_before = 0.0;
  double minus_plus_after = 0.0;
  double expected_plus_minus = 0.0; // δ^{-σ-1}
  double expected_minus_plus = 0.0; // δ^{σ-1}

  double observed_plus_minus() const { return plus_minus_after / plus_minus_before; }
  double observed_minus_plus() const { return minus_plus_after / minus_plus_before; }
  bool holds(double rel_tol = 1e-8) const;
};

/// Moves u to the shrunk domain (same nodal values on the scaled grid) and
/// compares both mixed-norm ratios with their predicted factors. The
/// constant-exponent norms are the weighted ones (∫|f|^q/q)^{1/q}.
HomothetyReport homothety_transport(GridFunction const &u, double delta, double p_minus,
                                    double p_plus);

/// [(1-t)^{p+} + t^{p+}]^{1/p+} / [(1-t)^{p-} + t^{p-}]^{1/p-}
double mix_factor(double t, double p_plus, double p_minus);

/// True when p -> [(1-t)^p + t^p]^{1/p} is nonincreasing along p_grid
/// (taken in increasing order).
bool mix_factor_monotonicity(double t, std::vector<double> p_grid);

struct JoinResult
{
  GridFunction joined;
  double mix = 1.0;
  /// ‖∇·‖_{p+} of each input and of the result (all have ‖·‖_{p-} = 1).
  double K_hat_1 = 0.0;
  double K_hat_2 = 0.0;
  double K_hat = 0.0;

  /// K_hat <= max(K_hat_1, K_hat_2) * mix within tol.
  bool bound_holds(double tol = 1e-9) const;
};

/// ((1-t) u1 ⊕ t u2) / ‖·‖_{p-} on the union of two grids that share a face
/// (end node in 1D, an edge of nodes in 2D) with equal spacing. Both inputs
/// must be dirichlet_zero with ‖u_i‖_{p-} = 1 (relative 1e-9).
JoinResult join_normalized(GridFunction const &u1, GridFunction const &u2, double t,
                           double p_plus, double p_minus);

/// ‖∇u‖_{p+} / ‖u‖_{p-} with weighted constant-exponent norms.
double k_hat_ratio(GridFunction const &u, double p_plus, double p_minus);

} // namespace pxlap

#endif
