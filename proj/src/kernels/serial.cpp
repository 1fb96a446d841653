#include <pxlap/kernels.hpp>

#include <cmath>

namespace pxlap::kernels::serial
{

PowerSums power_sums(std::span<double const> p, std::span<double const> log_mag, double s)
{
  PowerSums out;
  for (std::size_t c = 0; c < p.size(); ++c)
  {
    double const t = std::exp(p[c] * (log_mag[c] - s));
    out.plain += t;
    out.weighted += t / p[c];
  }
  return out;
}

void power_terms(std::span<double const> p, std::span<double const> log_mag, double s,
                 double shift, std::span<double> out)
{
  for (std::size_t c = 0; c < p.size(); ++c)
    out[c] = std::exp((p[c] - shift) * (log_mag[c] - s));
}

void cell_values(Grid const &grid, std::span<double const> nodal, std::span<double> out)
{
  if (grid.dimension() == 1)
  {
    for (std::size_t c = 0; c < grid.cell_count(); ++c)
      out[c] = 0.5 * (nodal[c] + nodal[c + 1]);
    return;
  }
  std::size_t const nx = grid.nx(), cx = grid.cells_x();
  for (std::size_t j = 0; j < grid.cells_y(); ++j)
    for (std::size_t i = 0; i < cx; ++i)
    {
      std::size_t const n0 = i + nx * j;
      out[i + cx * j] = 0.25 * (nodal[n0] + nodal[n0 + 1] + nodal[n0 + nx] + nodal[n0 + nx + 1]);
    }
}

void cell_gradients(Grid const &grid, std::span<double const> nodal, std::span<double> out)
{
  if (grid.dimension() == 1)
  {
    double const inv_h = 1.0 / grid.hx();
    for (std::size_t c = 0; c < grid.cell_count(); ++c)
      out[c] = (nodal[c + 1] - nodal[c]) * inv_h;
    return;
  }
  std::size_t const nx = grid.nx(), cx = grid.cells_x();
  double const ax = 0.5 / grid.hx(), ay = 0.5 / grid.hy();
  for (std::size_t j = 0; j < grid.cells_y(); ++j)
    for (std::size_t i = 0; i < cx; ++i)
    {
      std::size_t const n0 = i + nx * j;
      double const u00 = nodal[n0], u10 = nodal[n0 + 1];
      double const u01 = nodal[n0 + nx], u11 = nodal[n0 + nx + 1];
      std::size_t const c = i + cx * j;
      out[2 * c] = ax * ((u10 - u00) + (u11 - u01));
      out[2 * c + 1] = ay * ((u01 - u00) + (u11 - u10));
    }
}

void gather(Grid const &grid, std::span<double const> cell_scalar,
            std::span<double const> cell_vector, std::span<double> out)
{
  bool const has_s = !cell_scalar.empty(), has_v = !cell_vector.empty();
  if (grid.dimension() == 1)
  {
    std::size_t const nc = grid.cell_count();
    double const inv_h = 1.0 / grid.hx();
    for (std::size_t i = 0; i < grid.nx(); ++i)
    {
      double acc = 0.0;
      if (i > 0) // cell i-1, node i is its right end
      {
        if (has_s)
          acc += 0.5 * cell_scalar[i - 1];
        if (has_v)
          acc += inv_h * cell_vector[i - 1];
      }
      if (i < nc) // cell i, node i is its left end
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

  std::size_t const nx = grid.nx(), ny = grid.ny(), cx = grid.cells_x(), cy = grid.cells_y();
  double const ax = 0.5 / grid.hx(), ay = 0.5 / grid.hy();
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
    {
      double acc = 0.0;
      // the four cells around node (i, j); (di, dj) is the node's corner in the cell
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

double sum(std::span<double const> values)
{
  double acc = 0.0;
  for (double v : values)
    acc += v;
  return acc;
}

double dot(std::span<double const> a, std::span<double const> b)
{
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    acc += a[k] * b[k];
  return acc;
}

} // namespace pxlap::kernels::serial
