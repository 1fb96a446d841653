#ifndef PXLAP_KERNELS_HPP
#define PXLAP_KERNELS_HPP

// Cell/node loops behind the quadrature. Every kernel exists twice: a plain
// serial reference and an OpenMP version. The OpenMP reductions sum fixed-size
// blocks and then combine the block partials in order, so their results do not
// depend on the thread count.

#include <pxlap/domain.hpp>

#include <span>

namespace pxlap::kernels
{

struct PowerSums
{
  /// sum_c exp(p_c (L_c - s)) / p_c
  double weighted = 0.0;
  /// sum_c exp(p_c (L_c - s))
  double plain = 0.0;
};

/// Cells handled per reduction block.
inline constexpr std::size_t block_size = 1024;

namespace serial
{

PowerSums power_sums(std::span<double const> p, std::span<double const> log_mag, double s);

/// out_c = exp((p_c - shift) (L_c - s)).
void power_terms(std::span<double const> p, std::span<double const> log_mag, double s,
                 double shift, std::span<double> out);

/// Cell-center values of a nodal function (multilinear interpolation).
void cell_values(Grid const &grid, std::span<double const> nodal, std::span<double> out);

/// Per-cell gradients, `dimension` interleaved components per cell.
void cell_gradients(Grid const &grid, std::span<double const> nodal, std::span<double> out);

/// out_i = sum over cells c touching node i of
///   scalar_c * phi_i(center_c) + vector_c . grad phi_i(c)
/// where phi_i is the hat function of node i. Either input may be empty.
void gather(Grid const &grid, std::span<double const> cell_scalar,
            std::span<double const> cell_vector, std::span<double> out);

double sum(std::span<double const> values);
double dot(std::span<double const> a, std::span<double const> b);

} // namespace serial

namespace parallel
{

PowerSums power_sums(std::span<double const> p, std::span<double const> log_mag, double s);
void power_terms(std::span<double const> p, std::span<double const> log_mag, double s,
                 double shift, std::span<double> out);
void cell_values(Grid const &grid, std::span<double const> nodal, std::span<double> out);
void cell_gradients(Grid const &grid, std::span<double const> nodal, std::span<double> out);
void gather(Grid const &grid, std::span<double const> cell_scalar,
            std::span<double const> cell_vector, std::span<double> out);
double sum(std::span<double const> values);
double dot(std::span<double const> a, std::span<double const> b);

/// Threads the parallel kernels would use (1 without OpenMP).
int max_threads();

} // namespace parallel

} // namespace pxlap::kernels

#endif
