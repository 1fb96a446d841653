#include <pxlap/preconditioner.hpp>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>

namespace pxlap
{

struct Preconditioner::Impl
{
  std::vector<long> unknown; // node -> unknown index or -1
  std::vector<std::size_t> node_of;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
};

Preconditioner::Preconditioner(GridFunction const &u, ExponentField const &field, double K,
                               double shift)
    : _impl(std::make_unique<Impl>())
{
  require_same_grid(*u.grid(), *field.grid(), "preconditioner");
  if (!(K > 0.0))
    throw std::invalid_argument("preconditioner needs a nonconstant function");
  Grid const &g = *u.grid();
  auto const grad = gradient(u);
  auto const p = field.cell_p();

  _impl->unknown.assign(g.node_count(), -1);
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (u.boundary() == Boundary::free || !g.on_boundary(i))
    {
      _impl->unknown[i] = static_cast<long>(_impl->node_of.size());
      _impl->node_of.push_back(i);
    }
  auto const n = static_cast<Eigen::Index>(_impl->node_of.size());

  std::vector<Eigen::Triplet<double>> entries;
  double const vol = g.cell_volume();
  auto weight = [&](std::size_t c) {
    double const a = std::max(grad.magnitude[c] / K, floor);
    return std::pow(a, p[c] - 2.0) * vol;
  };
  auto add = [&](std::size_t a, std::size_t b, double v) {
    long const ia = _impl->unknown[a], ib = _impl->unknown[b];
    if (ia >= 0 && ib >= 0)
      entries.emplace_back(ia, ib, v);
  };

  if (g.dimension() == 1)
  {
    double const inv = 1.0 / (g.hx() * g.hx());
    for (std::size_t c = 0; c < g.cell_count(); ++c)
    {
      double const w = weight(c) * inv;
      add(c, c, w);
      add(c + 1, c + 1, w);
      add(c, c + 1, -w);
      add(c + 1, c, -w);
    }
  }
  else
  {
    std::size_t const nx = g.nx();
    double const gx = 0.5 / g.hx(), gy = 0.5 / g.hy();
    // corner order (0,0), (1,0), (0,1), (1,1)
    double const dx[4] = {-gx, gx, -gx, gx};
    double const dy[4] = {-gy, -gy, gy, gy};
    for (std::size_t j = 0; j < g.cells_y(); ++j)
      for (std::size_t i = 0; i < g.cells_x(); ++i)
      {
        std::size_t const c = i + g.cells_x() * j;
        std::size_t const node[4] = {i + nx * j, i + 1 + nx * j, i + nx * (j + 1),
                                     i + 1 + nx * (j + 1)};
        double const w = weight(c);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            add(node[a], node[b], w * (dx[a] * dx[b] + dy[a] * dy[b]));
      }
  }
  double const diag = shift * vol;
  for (Eigen::Index k = 0; k < n; ++k)
    entries.emplace_back(k, k, diag);

  Eigen::SparseMatrix<double> P(n, n);
  P.setFromTriplets(entries.begin(), entries.end());
  _impl->solver.compute(P);
  if (_impl->solver.info() != Eigen::Success)
    throw std::runtime_error("preconditioner factorization failed");
}

Preconditioner::~Preconditioner() = default;
Preconditioner::Preconditioner(Preconditioner &&) noexcept = default;
Preconditioner &Preconditioner::operator=(Preconditioner &&) noexcept = default;

std::vector<double> Preconditioner::apply(std::span<double const> g) const
{
  auto const n = static_cast<Eigen::Index>(_impl->node_of.size());
  Eigen::VectorXd rhs(n);
  for (Eigen::Index k = 0; k < n; ++k)
    rhs[k] = g[_impl->node_of[static_cast<std::size_t>(k)]];
  Eigen::VectorXd const x = _impl->solver.solve(rhs);
  std::vector<double> out(g.size(), 0.0);
  for (Eigen::Index k = 0; k < n; ++k)
    out[_impl->node_of[static_cast<std::size_t>(k)]] = x[k];
  return out;
}

} // namespace pxlap
