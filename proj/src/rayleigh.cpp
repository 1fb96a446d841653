#include <pxlap/rayleigh.hpp>

#include <pxlap/kernels.hpp>

#include <cmath>
#include <limits>

namespace pxlap
{

namespace kp = kernels::parallel;

namespace
{

// Below this a kernel |w|^{p-2} w is taken to be 0.
constexpr double tiny = 1e-300;

struct CellKernel
{
  double norm = 0.0;        // Luxemburg norm of the field
  double plain_sum = 0.0;   // sum_c |f_c / norm|^{p_c} (without the cell volume)
  std::vector<double> term; // |f/norm|^{p-2} f/norm, components per cell like the field
};

// Normalized kernel of the pairing formulas for a cell field f.
CellKernel cell_kernel(CellField const &f, ExponentField const &field)
{
  CellKernel out;
  std::size_t const nc = f.magnitude.size();
  out.term.assign(f.data.size(), 0.0);
  out.norm = luxemburg_norm(f, field);
  if (out.norm == 0.0)
    return out;

  std::vector<double> logs(nc);
  for (std::size_t c = 0; c < nc; ++c)
    logs[c] = f.magnitude[c] > tiny ? std::log(f.magnitude[c])
                                    : -std::numeric_limits<double>::infinity();
  double const s = std::log(out.norm);
  out.plain_sum = kp::power_sums(field.cell_p(), logs, s).plain;

  // |f/N|^{p-1} then times the unit direction f/|f|.
  std::vector<double> mag_pow(nc);
  kp::power_terms(field.cell_p(), logs, s, 1.0, mag_pow);
  int const m = f.components;
  for (std::size_t c = 0; c < nc; ++c)
  {
    if (!(f.magnitude[c] > tiny))
      continue;
    double const factor = mag_pow[c] / f.magnitude[c];
    for (int a = 0; a < m; ++a)
      out.term[c * static_cast<std::size_t>(m) + static_cast<std::size_t>(a)] =
          factor * f.data[c * static_cast<std::size_t>(m) + static_cast<std::size_t>(a)];
  }
  return out;
}

void require_nonzero(GridFunction const &u, char const *what)
{
  if (u.is_zero())
    throw std::invalid_argument(std::string(what) + " is undefined for u = 0");
}

} // namespace

RayleighState rayleigh(GridFunction const &u, ExponentField const &field)
{
  require_nonzero(u, "rayleigh");
  require_same_grid(*u.grid(), *field.grid(), "rayleigh");
  auto const values = center_values(u);
  auto const grad = gradient(u);

  RayleighState st{u};
  st.k = luxemburg_norm(values, field);
  st.K = luxemburg_norm(grad, field);
  st.quotient = st.K / st.k;

  // S = int |∇u/K|^p / int |u/k|^p; with ∇u = 0 the numerator is 0.
  double const den = modular(values, st.k, field, Weighting::plain);
  double const num = st.K > 0.0 ? modular(grad, st.K, field, Weighting::plain) : 0.0;
  st.S = num / den;
  return st;
}

NodalDerivatives nodal_derivatives(GridFunction const &u, ExponentField const &field)
{
  require_nonzero(u, "nodal_derivatives");
  require_same_grid(*u.grid(), *field.grid(), "nodal_derivatives");
  Grid const &g = *u.grid();

  auto const kv = cell_kernel(center_values(u), field);
  auto const kg = cell_kernel(gradient(u), field);

  NodalDerivatives d;
  d.k = kv.norm;
  d.K = kg.norm;
  d.S = kv.plain_sum > 0.0 ? kg.plain_sum / kv.plain_sum : 0.0;
  d.dk.assign(g.node_count(), 0.0);
  d.dK.assign(g.node_count(), 0.0);

  // The cell volume cancels between numerator and denominator.
  kp::gather(g, kv.term, {}, d.dk);
  for (double &x : d.dk)
    x /= kv.plain_sum;
  if (kg.norm > 0.0)
  {
    kp::gather(g, {}, kg.term, d.dK);
    for (double &x : d.dK)
      x /= kg.plain_sum;
  }
  return d;
}

double pairing_k_prime(GridFunction const &u, GridFunction const &v, ExponentField const &field)
{
  require_same_grid(*u.grid(), *v.grid(), "pairing_k_prime");
  auto const d = nodal_derivatives(u, field);
  return kp::dot(d.dk, v.values());
}

double pairing_K_prime(GridFunction const &u, GridFunction const &v, ExponentField const &field)
{
  require_same_grid(*u.grid(), *v.grid(), "pairing_K_prime");
  auto const d = nodal_derivatives(u, field);
  if (d.K == 0.0)
    throw std::invalid_argument("pairing_K_prime is undefined for ∇u = 0");
  return kp::dot(d.dK, v.values());
}

std::vector<GridFunction> hat_basis(GridPtr const &grid, Boundary bc)
{
  std::vector<GridFunction> basis;
  for (std::size_t k = 0; k < grid->node_count(); ++k)
  {
    if (bc == Boundary::dirichlet_zero && grid->on_boundary(k))
      continue;
    std::vector<double> values(grid->node_count(), 0.0);
    values[k] = 1.0;
    basis.emplace_back(grid, std::move(values), bc);
  }
  return basis;
}

double l1_norm(GridFunction const &v)
{
  auto const f = center_values(v);
  return v.grid()->cell_volume() * kp::sum(f.magnitude);
}

std::vector<double> hat_masses(Grid const &grid)
{
  std::vector<double> const ones(grid.cell_count(), grid.cell_volume());
  std::vector<double> out(grid.node_count());
  kp::gather(grid, ones, {}, out);
  return out;
}

double el_residual(GridFunction const &u, double lambda, ExponentField const &field,
                   std::span<GridFunction const> test_basis)
{
  if (test_basis.empty())
    throw std::invalid_argument("el_residual needs a nonempty test basis");
  auto const d = nodal_derivatives(u, field);
  double worst = 0.0;
  for (auto const &v : test_basis)
  {
    require_same_grid(*u.grid(), *v.grid(), "el_residual");
    double const scale = l1_norm(v);
    if (scale == 0.0)
      continue;
    double const defect = kp::dot(d.dK, v.values()) - lambda * kp::dot(d.dk, v.values());
    worst = std::max(worst, std::abs(defect) / scale);
  }
  return worst;
}

double el_residual_hats(GridFunction const &u, double lambda, ExponentField const &field)
{
  auto const d = nodal_derivatives(u, field);
  Grid const &g = *u.grid();
  auto const mass = hat_masses(g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i)
  {
    if (u.boundary() == Boundary::dirichlet_zero && g.on_boundary(i))
      continue;
    worst = std::max(worst, std::abs(d.dK[i] - lambda * d.dk[i]) / mass[i]);
  }
  return worst;
}

} // namespace pxlap
