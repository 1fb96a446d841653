#include <pxlap/oracle.hpp>

#include <cmath>
// Boost 1.74's pchip calls isnan unqualified.
using std::isnan;

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace pxlap
{

namespace
{

void require_exponent(double p)
{
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("exponent must satisfy 1 < p < inf");
}

/// 1 - (s u)^p for u in [0, 1], with uc = 1 - u when u is near 1.
double one_minus_power(double p, double log_s, double u, double uc)
{
  double const log_u = u > 0.5 ? std::log1p(-uc) : std::log(u);
  return -std::expm1(p * (log_s + log_u));
}

/// F(s) = ∫_0^s (1 - τ^p)^{-1/p} dτ for s in [0, 1].
double incomplete(double p, double s)
{
  if (s <= 0.0)
    return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double const log_s = std::log(s);
  auto f = [&](double u, double uc) {
    double const r = one_minus_power(p, log_s, u, uc);
    return r > 0.0 ? std::pow(r, -1.0 / p) : 0.0;
  };
  return s * integrator.integrate(f, 0.0, 1.0, 1e-15);
}

/// Table of s(t) on [0, π_p/2], built once per exponent.
class SineTable
{
public:
  explicit SineTable(double p) : _p(p), _half(pi_p(p) / 2)
  {
    constexpr int n = 4096;
    std::vector<double> t(n + 1), s(n + 1);
    for (int k = 0; k <= n; ++k)
    {
      // cluster near s = 1, where s(t) flattens
      s[k] = std::sin(std::numbers::pi / 2 * k / n);
      t[k] = k == n ? _half : incomplete(p, s[k]);
    }
    _interp = std::make_unique<boost::math::interpolators::pchip<std::vector<double>>>(
        std::move(t), std::move(s), 1.0, 0.0);
  }

  double half_period() const { return _half; }

  /// s with F(s) = t for t in [0, π_p/2].
  double operator()(double t) const
  {
    if (t <= 0.0)
      return 0.0;
    if (t >= _half)
      return 1.0;
    double s = std::clamp((*_interp)(t), 0.0, 1.0);
    // Newton on F(s) = t; F'(s) = (1 - s^p)^{-1/p}
    for (int it = 0; it < 3 && s < 1.0; ++it)
    {
      double const slope = std::pow(-std::expm1(_p * std::log(s)), 1.0 / _p);
      double const next = std::clamp(s - (incomplete(_p, s) - t) * slope, 0.0, 1.0);
      if (next == s)
        break;
      s = next;
    }
    return s;
  }

private:
  double _p;
  double _half;
  std::unique_ptr<boost::math::interpolators::pchip<std::vector<double>>> _interp;
};

SineTable const &table_for(double p)
{
  static std::mutex lock;
  static std::map<double, std::unique_ptr<SineTable>> tables;
  {
    std::lock_guard<std::mutex> guard(lock);
    auto it = tables.find(p);
    if (it != tables.end())
      return *it->second;
  }
  // build outside the lock; if two threads race, the first insert wins
  auto fresh = std::make_unique<SineTable>(p);
  std::lock_guard<std::mutex> guard(lock);
  auto [it, inserted] = tables.emplace(p, std::move(fresh));
  return *it->second;
}

} // namespace

double pi_p(double p)
{
  require_exponent(p);
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [p](double t, double tc) {
    double const r = one_minus_power(p, 0.0, t, tc);
    return r > 0.0 ? std::pow(r, -1.0 / p) : 0.0;
  };
  return 2.0 * integrator.integrate(f, 0.0, 1.0, 1e-15);
}

double pi_p_closed(double p)
{
  require_exponent(p);
  return 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
}

double varpi_p(double p)
{
  require_exponent(p);
  return std::pow(p - 1.0, 1.0 / p) * pi_p(p);
}

double sin_p(double p, double t)
{
  require_exponent(p);
  if (!std::isfinite(t))
    throw std::invalid_argument("sin_p needs a finite argument");
  auto const &table = table_for(p);
  double const half = table.half_period();
  double const period = 4 * half;
  double r = std::fmod(t, period);
  if (r < 0)
    r += period;
  double sign = 1.0;
  if (r >= 2 * half)
  {
    r -= 2 * half;
    sign = -1.0;
  }
  if (r > half)
    r = 2 * half - r;
  return sign * table(r);
}

Spectrum exact_spectrum_constant_p(double p, double length, Boundary bc, int j_max)
{
  require_exponent(p);
  if (!(length > 0.0) || j_max < 1)
    throw std::invalid_argument("exact spectrum needs length > 0 and j_max >= 1");
  double const unit = varpi_p(p) / length;
  Spectrum s;
  s.boundary = bc;
  for (int j = 1; j <= j_max; ++j)
    s.values.push_back({j, unit * (bc == Boundary::dirichlet_zero ? j : j - 1), ValueKind::exact});
  return s;
}

double shooting_check(double p, double length, int j)
{
  require_exponent(p);
  if (!(length > 0.0) || j < 1)
    throw std::invalid_argument("shooting needs length > 0 and j >= 1");
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>; // u and w = |u'|^{p-2} u'
  double const q = 1.0 / (p - 1.0);

  // zeros of u in (0, length] and the final value
  auto shoot = [&](double Lambda) {
    auto rhs = [&](State const &x, State &dx, double) {
      dx[0] = std::copysign(std::pow(std::abs(x[1]), q), x[1]);
      dx[1] = -Lambda * std::copysign(std::pow(std::abs(x[0]), p - 1.0), x[0]);
    };
    State x{0.0, 1.0};
    int zeros = 0;
    double last = 0.0;
    auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
    double const dt = length / (200.0 * j);
    odeint::integrate_const(stepper, rhs, x, 0.0, length, dt, [&](State const &y, double t) {
      if (t > 0.0 && last != 0.0 && (y[0] == 0.0 || (y[0] > 0.0) != (last > 0.0)))
        ++zeros;
      last = y[0];
    });
    return std::make_pair(zeros, x[0]);
  };

  // Λ_j scales like (j/length)^p; bracket generously around that guess
  double lo = 0.0, hi = std::pow(8.0 * j / length, p) + 1.0;
  if (shoot(hi).first < j)
    throw std::runtime_error("shooting could not bracket the eigenvalue");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it)
  {
    double const mid = 0.5 * (lo + hi);
    auto const [zeros, end] = shoot(mid);
    // the j-th zero has reached the right end once there are j sign changes
    (zeros >= j ? hi : lo) = mid;
    (void)end;
  }
  return std::pow(0.5 * (lo + hi), 1.0 / p);
}

Spectrum box_laplacian_spectrum(double lx, double ly, Boundary bc, double lambda_max)
{
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("box sides must be positive");
  Spectrum s;
  s.boundary = bc;
  std::vector<double> values;
  int const first = bc == Boundary::dirichlet_zero ? 1 : 0;
  double const pi = std::numbers::pi;
  for (int m = first; pi * m / lx < lambda_max; ++m)
    for (int n = first; ; ++n)
    {
      double const v = pi * std::hypot(m / lx, n / ly);
      if (!(v < lambda_max))
        break;
      values.push_back(v);
    }
  std::sort(values.begin(), values.end());
  for (std::size_t k = 0; k < values.size(); ++k)
    s.values.push_back({static_cast<int>(k + 1), values[k], ValueKind::exact});
  return s;
}

} // namespace pxlap
