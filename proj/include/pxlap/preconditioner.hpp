#ifndef PXLAP_PRECONDITIONER_HPP
#define PXLAP_PRECONDITIONER_HPP

#include <pxlap/luxemburg.hpp>

#include <memory>
#include <span>
#include <vector>

namespace pxlap
{

/// Linearized p(x)-Laplacian used to precondition the descent:
///   P = A_w + shift * h^n * I,   w_c = max(|∇u_c|/K, floor)^{p_c - 2}
/// where A_w is the weighted stiffness matrix of the hat functions on the
/// unknowns (interior nodes for dirichlet_zero, all nodes for free). For
/// p = 2 this is the plain stiffness matrix and a preconditioned step is one
/// inverse-iteration update.
class Preconditioner
{
public:
  Preconditioner(GridFunction const &u, ExponentField const &field, double K, double shift);
  ~Preconditioner();
  Preconditioner(Preconditioner &&) noexcept;
  Preconditioner &operator=(Preconditioner &&) noexcept;

  /// P^{-1} g on the unknowns; other entries of the result are 0.
  std::vector<double> apply(std::span<double const> g) const;

  /// Weight floor applied to |∇u|/K before raising it to p - 2.
  static constexpr double floor = 1e-8;

private:
  struct Impl;
  std::unique_ptr<Impl> _impl;
};

} // namespace pxlap

#endif
