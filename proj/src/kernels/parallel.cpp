#include <pxlap/kernels.hpp>

#include <cmath>
#include <vector>

#ifdef PXLAP_HAVE_OPENMP
#include <omp.h>
#endif

namespace pxlap::kernels::parallel
{

namespace
{

// Below this many items the loops run on the calling thread; the block
// structure (and therefore every rounding) is the same either way.
constexpr std::size_t min_parallel = 8192;

std::size_t block_count(std::size_t n) { return (n + block_size - 1) / block_size; }

} // namespace

int max_threads()
{
#ifdef PXLAP_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

PowerSums power_sums(std::span<double const> p, std::span<double const> log_mag, double s)
{
  std::size_t const n = p.size();
  long const nb = static_cast<long>(block_count(n));
  std::vector<PowerSums> partial(static_cast<std::size_t>(nb));

#pragma omp parallel for schedule(static) if (n >= min_parallel)
  for (long b = 0; b < nb; ++b)
  {
    std::size_t const lo = static_cast<std::size_t>(b) * block_size;
    std::size_t const hi = std::min(n, lo + block_size);
    PowerSums acc;
    for (std::size_t c = lo; c < hi; ++c)
    {
      double const t = std::exp(p[c] * (log_mag[c] - s));
      acc.plain += t;
      acc.weighted += t / p[c];
    }
    partial[static_cast<std::size_t>(b)] = acc;
  }

  PowerSums out;
  for (auto const &ps : partial)
  {
    out.plain += ps.plain;
    out.weighted += ps.weighted;
  }
  return out;
}

void power_terms(std::span<double const> p, std::span<double const> log_mag, double s,
                 double shift, std::span<double> out)
{
  long const n = static_cast<long>(p.size());
#pragma omp parallel for schedule(static) if (p.size() >= min_parallel)
  for (long c = 0; c < n; ++c)
    out[c] = std::exp((p[c] - shift) * (log_mag[c] - s));
}

void cell_values(Grid const &grid, std::span<double const> nodal, std::span<double> out)
{
  if (grid.dimension() == 1)
  {
    long const nc = static_cast<long>(grid.cell_count());
#pragma omp parallel for schedule(static) if (grid.cell_count() >= min_parallel)
    for (long c = 0; c < nc; ++c)
      out[c] = 0.5 * (nodal[c] + nodal[c + 1]);
    return;
  }
  std::size_t const nx = grid.nx(), cx = grid.cells_x();
  long const cy = static_cast<long>(grid.cells_y());
#pragma omp parallel for schedule(static) if (grid.cell_count() >= min_parallel)
  for (long j = 0; j < cy; ++j)
    for (std::size_t i = 0; i < cx; ++i)
    {
      std::size_t const n0 = i + nx * static_cast<std::size_t>(j);
      out[i + cx * static_cast<std::size_t>(j)] =
          0.25 * (nodal[n0] + nodal[n0 + 1] + nodal[n0 + nx] + nodal[n0 + nx + 1]);
    }
}

void cell_gradients(Grid const &grid, std::span<double const> nodal, std::span<double> out)
{
  if (grid.dimension() == 1)
  {
    double const inv_h = 1.0 / grid.hx();
    long const nc = static_cast<long>(grid.cell_count());
#pragma omp parallel for schedule(static) if (grid.cell_count() >= min_parallel)
    for (long c = 0; c < nc; ++c)
      out[c] = (nodal[c + 1] - nodal[c]) * inv_h;
    return;
  }
  std::size_t const nx = grid.nx(), cx = grid.cells_x();
  long const cy = static_cast<long>(grid.cells_y());
  double const ax = 0.5 / grid.hx(), ay = 0.5 / grid.hy();
#pragma omp parallel for schedule(static) if (grid.cell_count() >= min_parallel)
  for (long j = 0; j < cy; ++j)
    for (std::size_t i = 0; i < cx; ++i)
    {
      std::size_t const n0 = i + nx * static_cast<std::size_t>(j);
      double const u00 = nodal[n0], u10 = nodal[n0 + 1];
      double const u01 = nodal[n0 + nx], u11 = nodal[n0 + nx + 1];
      std::size_t const c = i + cx * static_cast<std::size_t>(j);
      out[2 * c] = ax * ((u10 - u00) + (u11 - u01));
      out[2 * c + 1] = ay * ((u01 - u00) + (u11 - u10));
    }
}

void gather(Grid const &grid, std::span<double const> cell_scalar,
            std::span<double const> cell_vector, std::span<double> out)
{
  // Node-centred loop: each output is written by exactly one iteration.
  bool const has_s = !cell_scalar.empty(), has_v = !cell_vector.empty();
  if (grid.dimension() == 1)
  {
    std::size_t const nc = grid.cell_count();
    double const inv_h = 1.0 / grid.hx();
    long const nn = static_cast<long>(grid.nx());
#pragma omp parallel for schedule(static) if (grid.nx() >= min_parallel)
    for (long ii = 0; ii < nn; ++ii)
    {
      std::size_t const i = static_cast<std::size_t>(ii);
      double acc = 0.0;
      if (i > 0)
      {
        if (has_s)
          acc += 0.5 * cell_scalar[i - 1];
        if (has_v)
          acc += inv_h * cell_vector[i - 1];
      }
      if (i < nc)
      {
        if (has_s)
          acc += 0.5 * cell_scalar[i];
        if (has_v)
          acc -= inv_h * cell_vector[i];
      }
      out[i] = acc;
    }
    return;
  }

  std::size_t const nx = grid.nx(), cx = grid.cells_x(), cy = grid.cells_y();
  long const ny = static_cast<long>(grid.ny());
  double const ax = 0.5 / grid.hx(), ay = 0.5 / grid.hy();
#pragma omp parallel for schedule(static) if (grid.node_count() >= min_parallel)
  for (long jj = 0; jj < ny; ++jj)
  {
    std::size_t const j = static_cast<std::size_t>(jj);
    for (std::size_t i = 0; i < nx; ++i)
    {
      double acc = 0.0;
      for (int dj = 0; dj < 2; ++dj)
        for (int di = 0; di < 2; ++di)
        {
          if ((di == 1 && i == 0) || (di == 0 && i == cx) || (dj == 1 && j == 0) ||
              (dj == 0 && j == cy))
            continue;
          std::size_t const c = (i - static_cast<std::size_t>(di)) +
                                cx * (j - static_cast<std::size_t>(dj));
          if (has_s)
            acc += 0.25 * cell_scalar[c];
          if (has_v)
            acc += (di ? ax : -ax) * cell_vector[2 * c] + (dj ? ay : -ay) * cell_vector[2 * c + 1];
        }
      out[i + nx * j] = acc;
    }
  }
}

double sum(std::span<double const> values)
{
  std::size_t const n = values.size();
  long const nb = static_cast<long>(block_count(n));
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
#pragma omp parallel for schedule(static) if (n >= min_parallel)
  for (long b = 0; b < nb; ++b)
  {
    std::size_t const lo = static_cast<std::size_t>(b) * block_size;
    std::size_t const hi = std::min(n, lo + block_size);
    double acc = 0.0;
    for (std::size_t c = lo; c < hi; ++c)
      acc += values[c];
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double out = 0.0;
  for (double v : partial)
    out += v;
  return out;
}

double dot(std::span<double const> a, std::span<double const> b)
{
  std::size_t const n = a.size();
  long const nb = static_cast<long>(block_count(n));
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
#pragma omp parallel for schedule(static) if (n >= min_parallel)
  for (long k = 0; k < nb; ++k)
  {
    std::size_t const lo = static_cast<std::size_t>(k) * block_size;
    std::size_t const hi = std::min(n, lo + block_size);
    double acc = 0.0;
    for (std::size_t c = lo; c < hi; ++c)
      acc += a[c] * b[c];
    partial[static_cast<std::size_t>(k)] = acc;
  }
  double out = 0.0;
  for (double v : partial)
    out += v;
  return out;
}

} // namespace pxlap::kernels::parallel
