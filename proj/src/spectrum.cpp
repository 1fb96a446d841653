#include <pxlap/spectrum.hpp>

#include <algorithm>

namespace pxlap
{

char const *to_string(ValueKind kind)
{
  switch (kind)
  {
  case ValueKind::exact:
    return "exact";
  case ValueKind::descent:
    return "descent";
  case ValueKind::nodal_upper:
    return "nodal-upper";
  }
  return "?";
}

std::vector<double> Spectrum::numbers() const
{
  std::vector<double> out;
  out.reserve(values.size());
  for (auto const &v : values)
    out.push_back(v.value);
  return out;
}

bool Spectrum::nondecreasing() const
{
  return std::is_sorted(values.begin(), values.end(),
                        [](SpectrumValue const &a, SpectrumValue const &b) { return a.value < b.value; });
}

bool free_below_dirichlet(Spectrum const &free, Spectrum const &dirichlet, double slack)
{
  for (auto const &f : free.values)
    for (auto const &d : dirichlet.values)
      if (f.index == d.index && f.value > d.value + slack)
        return false;
  return true;
}

} // namespace pxlap
