#ifndef PXLAP_SPECTRUM_HPP
#define PXLAP_SPECTRUM_HPP

#include <pxlap/luxemburg.hpp>

#include <vector>

namespace pxlap
{

/// Where a spectrum value came from.
enum class ValueKind
{
  exact,
  descent,
  nodal_upper
};

char const *to_string(ValueKind kind);

struct SpectrumValue
{
  int index = 1;
  double value = 0.0;
  ValueKind kind = ValueKind::exact;
};

/// Eigenvalue list for one boundary setting, ordered by index.
struct Spectrum
{
  Boundary boundary = Boundary::dirichlet_zero;
  std::vector<SpectrumValue> values;

  std::vector<double> numbers() const;
  bool nondecreasing() const;
};

/// True when free[j] <= dirichlet[j] + slack for every index present in both.
bool free_below_dirichlet(Spectrum const &free, Spectrum const &dirichlet, double slack = 0.0);

} // namespace pxlap

#endif
