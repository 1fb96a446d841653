#ifndef PXLAP_ORACLE_HPP
#define PXLAP_ORACLE_HPP

#include <pxlap/spectrum.hpp>

namespace pxlap
{

/// Generalized half-period 2 ∫_0^1 (1 - t^p)^{-1/p} dt by tanh-sinh quadrature.
/// Throws std::invalid_argument for p <= 1.
double pi_p(double p);

/// Closed form 2π / (p sin(π/p)).
double pi_p_closed(double p);

/// First eigenvalue of the normalized constant-p problem on a unit interval:
/// (p - 1)^{1/p} π_p. Equals π at p = 2.
double varpi_p(double p);

/// Generalized sine: the inverse of s -> ∫_0^s (1 - τ^p)^{-1/p} dτ on
/// [0, π_p/2], extended to R as an odd, 2π_p-periodic function symmetric
/// about π_p/2. Solves (|u'|^{p-2}u')' + (p-1)|u|^{p-2}u = 0.
double sin_p(double p, double t);

/// Exact spectrum of the normalized constant-p problem on an interval:
/// j varpi_p / length (dirichlet) or 0, varpi_p/length, ... (free).
Spectrum exact_spectrum_constant_p(double p, double length, Boundary bc, int j_max);

/// Normalized j-th Dirichlet value recovered independently: the classical
/// eigenvalue Λ_j of -(|u'|^{p-2}u')' = Λ|u|^{p-2}u is found by shooting
/// with bisection on the nodal count, and Λ_j^{1/p} is returned.
/// Throws std::runtime_error if the bisection cannot bracket the value.
double shooting_check(double p, double length, int j);

/// p = 2 Dirichlet or Neumann spectrum of a box, normalized (square roots of
/// the Laplacian eigenvalues), every value below lambda_max, sorted.
Spectrum box_laplacian_spectrum(double lx, double ly, Boundary bc, double lambda_max);

} // namespace pxlap

#endif
