#include <pxlap/counting.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pxlap
{

int counting_function(Spectrum const &spectrum, double lambda)
{
  auto const &v = spectrum.values;
  auto const it = std::lower_bound(v.begin(), v.end(), lambda,
                                   [](SpectrumValue const &a, double x) { return a.value < x; });
  return static_cast<int>(it - v.begin());
}

void require_bounds(ExponentStats const &stats)
{
  if (!stats.bounds_available())
  {
    std::string message;
    for (auto const &m : stats.warning_messages())
      message += (message.empty() ? "" : "\n") + m;
    throw BoundsUnavailable(message);
  }
}

CountingReport theorem_bounds(ExponentStats const &stats, std::vector<double> const &lambda_grid,
                              double anchor_lambda, int anchor_N)
{
  require_bounds(stats);
  if (!(anchor_lambda > 0.0) || anchor_N < 0)
    throw std::invalid_argument("anchor needs lambda > 0 and N >= 0");
  CountingReport r;
  r.stats = stats;
  r.lambda = lambda_grid;
  r.anchor_lambda = anchor_lambda;
  r.anchor_N = anchor_N;

  double const n = stats.dimension;
  double const lo_exp = n / (1.0 + stats.sigma);
  double const hi_exp = n / (1.0 - stats.sigma);
  double const lo_at_anchor = std::max(anchor_N - 1, 0);
  double const hi_at_anchor = anchor_N + 1;
  r.C1 = lo_at_anchor / (stats.measure * std::pow(anchor_lambda / stats.kappa, lo_exp));
  r.C2 = hi_at_anchor / (stats.measure * std::pow(stats.kappa * anchor_lambda, hi_exp));
  for (double lam : lambda_grid)
  {
    r.lower.push_back(r.C1 * stats.measure * std::pow(lam / stats.kappa, lo_exp));
    r.upper.push_back(r.C2 * stats.measure * std::pow(stats.kappa * lam, hi_exp));
  }
  return r;
}

CountingReport counting_report(Spectrum const &spectrum, ExponentStats const &stats,
                               std::vector<double> const &lambda_grid, double anchor_lambda)
{
  auto r = theorem_bounds(stats, lambda_grid, anchor_lambda,
                          counting_function(spectrum, anchor_lambda));
  for (std::size_t k = 0; k < lambda_grid.size(); ++k)
  {
    int const N = counting_function(spectrum, lambda_grid[k]);
    r.N.push_back(N);
    if (lambda_grid[k] >= anchor_lambda &&
        (N < r.lower[k] * (1 - 1e-12) || N > r.upper[k] * (1 + 1e-12)))
      r.violations.push_back(k);
  }
  return r;
}

double fit_growth_exponent(std::vector<double> const &lambda, std::vector<int> const &N)
{
  if (lambda.size() != N.size())
    throw std::invalid_argument("growth fit needs matching lambda and N samples");
  std::vector<double> x, y;
  for (std::size_t k = 0; k < N.size(); ++k)
    if (N[k] >= 1 && lambda[k] > 0.0)
    {
      x.push_back(std::log(lambda[k]));
      y.push_back(std::log(static_cast<double>(N[k])));
    }
  if (x.size() < 5)
    throw std::invalid_argument("growth fit needs at least 5 samples with N >= 1");
  double const mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double const my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
  {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  if (!(sxx > 0.0))
    throw std::invalid_argument("growth fit needs distinct lambda samples");
  return sxy / sxx;
}

double fit_growth_exponent(CountingReport const &report)
{
  return fit_growth_exponent(report.lambda, report.N);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count)
{
  if (!(lo > 0.0) || !(hi >= lo) || count == 0)
    throw std::invalid_argument("geometric grid needs 0 < lo <= hi and count >= 1");
  // interpolating log10 keeps decade grids on exact powers of ten
  double const a = std::log10(lo);
  double const b = std::log10(hi);
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = count == 1 ? lo
                        : std::pow(10.0, a + (b - a) * static_cast<double>(k) /
                                                  static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace
{

/// ⌊x⌋ that does not lose a unit to rounding when x is an integer in exact
/// arithmetic.
long floor_count(double x)
{
  return static_cast<long>(std::floor(x * (1.0 + 1e-12)));
}

long power(long base, int n)
{
  return n == 1 ? base : base * base;
}

} // namespace

CubeEstimate cube_count_bounds(ExponentStats const &stats, Domain const &cover, double lambda,
                               double lambda_prime, double lambda0, long r, long s)
{
  require_bounds(stats);
  if (cover.kind() != DomainKind::cube_union)
    throw std::invalid_argument("cube counts need a cube-union cover");
  if (cover.dimension() != stats.dimension)
    throw std::invalid_argument("cover and exponent stats disagree on the dimension");
  if (!(lambda0 > 0.0) || !(lambda > lambda0))
    throw std::invalid_argument("cube counts need 0 < lambda0 < lambda");
  if (!(lambda_prime > lambda))
    throw std::invalid_argument("cube counts need lambda < lambda'");
  if (r < 0 || s < 0)
    throw std::invalid_argument("seed counts r, s must be nonnegative");

  CubeEstimate e;
  e.lambda0 = lambda0;
  e.lambda = lambda;
  e.lambda_prime = lambda_prime;
  e.r = r;
  e.s = s;
  e.a_side = std::pow(lambda0 / lambda, 1.0 / (1.0 + stats.sigma));
  e.b_side = std::pow(lambda0 / lambda_prime, 1.0 / (1.0 - stats.sigma));
  for (auto const &c : cover.cubes())
  {
    e.lower_count += r * power(floor_count(c.side / e.a_side), stats.dimension);
    e.upper_count += s * power(floor_count(c.side / e.b_side) + 1, stats.dimension);
  }
  return e;
}

namespace
{

double ratio(GridFunction const &u, double grad_p, double value_p)
{
  return lp_norm(gradient(u), grad_p, Weighting::weighted) /
         lp_norm(u, value_p, Weighting::weighted);
}

void require_exponents(double p_minus, double p_plus)
{
  if (!(p_minus > 1.0) || !(p_plus >= p_minus) || !std::isfinite(p_plus))
    throw std::invalid_argument("exponents need 1 < p- <= p+ < inf");
}

} // namespace

bool HomothetyReport::holds(double rel_tol) const
{
  return std::abs(observed_plus_minus() / expected_plus_minus - 1.0) <= rel_tol &&
         std::abs(observed_minus_plus() / expected_minus_plus - 1.0) <= rel_tol;
}

HomothetyReport homothety_transport(GridFunction const &u, double delta, double p_minus,
                                    double p_plus)
{
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("homothety needs 0 < delta < 1");
  require_exponents(p_minus, p_plus);
  if (u.is_zero())
    throw std::invalid_argument("homothety needs u != 0");
  if (gradient(u).is_zero())
    throw std::invalid_argument("homothety needs a nonconstant u");

  HomothetyReport h;
  h.delta = delta;
  int const n = u.grid()->dimension();
  h.sigma = n * (1.0 / p_minus - 1.0 / p_plus);
  GridFunction const v(u.grid()->scaled(delta), std::vector<double>(u.values().begin(), u.values().end()),
                       u.boundary());
  h.plus_minus_before = ratio(u, p_plus, p_minus);
  h.plus_minus_after = ratio(v, p_plus, p_minus);
  h.minus_plus_before = ratio(u, p_minus, p_plus);
  h.minus_plus_after = ratio(v, p_minus, p_plus);
  h.expected_plus_minus = std::pow(delta, -h.sigma - 1.0);
  h.expected_minus_plus = std::pow(delta, h.sigma - 1.0);
  return h;
}

double mix_factor(double t, double p_plus, double p_minus)
{
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("mix factor needs t in [0, 1]");
  require_exponents(p_minus, p_plus);
  auto mix = [t](double p) { return std::pow(std::pow(1.0 - t, p) + std::pow(t, p), 1.0 / p); };
  return mix(p_plus) / mix(p_minus);
}

bool mix_factor_monotonicity(double t, std::vector<double> p_grid)
{
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("mix monotonicity needs t in (0, 1)");
  std::sort(p_grid.begin(), p_grid.end());
  double last = std::numeric_limits<double>::infinity();
  for (double p : p_grid)
  {
    if (!(p > 1.0))
      throw std::invalid_argument("mix monotonicity needs p > 1");
    double const v = std::pow(std::pow(1.0 - t, p) + std::pow(t, p), 1.0 / p);
    if (v > last * (1.0 + 1e-15))
      return false;
    last = v;
  }
  return true;
}

double k_hat_ratio(GridFunction const &u, double p_plus, double p_minus)
{
  return ratio(u, p_plus, p_minus);
}

bool JoinResult::bound_holds(double tol) const
{
  return K_hat <= std::max(K_hat_1, K_hat_2) * mix + tol;
}

namespace
{

bool close(double a, double b)
{
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

enum class Side
{
  none,
  x,
  y
};

/// Axis along which `second` continues `first` on a common grid.
Side shared_face(Grid const &first, Grid const &second)
{
  if (first.dimension() != second.dimension() || !close(first.hx(), second.hx()))
    return Side::none;
  Domain const &a = first.domain();
  Domain const &b = second.domain();
  if (first.dimension() == 1)
    return close(a.upper()[0], b.lower()[0]) ? Side::x : Side::none;
  if (!close(first.hy(), second.hy()))
    return Side::none;
  if (close(a.upper()[0], b.lower()[0]) && first.ny() == second.ny() &&
      close(a.lower()[1], b.lower()[1]))
    return Side::x;
  if (close(a.upper()[1], b.lower()[1]) && first.nx() == second.nx() &&
      close(a.lower()[0], b.lower()[0]))
    return Side::y;
  return Side::none;
}

} // namespace

JoinResult join_normalized(GridFunction const &u1, GridFunction const &u2, double t, double p_plus,
                           double p_minus)
{
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("join needs t in [0, 1]");
  require_exponents(p_minus, p_plus);
  if (u1.boundary() != Boundary::dirichlet_zero || u2.boundary() != Boundary::dirichlet_zero)
    throw std::invalid_argument("join needs dirichlet_zero inputs");
  for (auto const *u : {&u1, &u2})
    if (std::abs(lp_norm(*u, p_minus, Weighting::weighted) - 1.0) > 1e-9)
      throw std::invalid_argument("join inputs must have unit p- norm");

  bool swapped = false;
  Side side = shared_face(*u1.grid(), *u2.grid());
  if (side == Side::none)
  {
    side = shared_face(*u2.grid(), *u1.grid());
    swapped = true;
  }
  if (side == Side::none)
    throw std::invalid_argument("join needs domains that share a face on a common grid");
  GridFunction const &first = swapped ? u2 : u1;
  GridFunction const &second = swapped ? u1 : u2;
  double const w_first = swapped ? t : 1.0 - t;
  double const w_second = swapped ? 1.0 - t : t;

  Grid const &g1 = *first.grid();
  Grid const &g2 = *second.grid();
  Domain const &d1 = g1.domain();
  Domain const &d2 = g2.domain();
  GridPtr joined_grid;
  if (g1.dimension() == 1)
    joined_grid = Grid::make(Domain::interval(d1.lower()[0], d2.upper()[0]), g1.nx() + g2.nx() - 1);
  else if (side == Side::x)
    joined_grid = Grid::make(Domain::box(d1.lower()[0], d2.upper()[0], d1.lower()[1], d1.upper()[1]),
                             g1.nx() + g2.nx() - 1, g1.ny());
  else
    joined_grid = Grid::make(Domain::box(d1.lower()[0], d1.upper()[0], d1.lower()[1], d2.upper()[1]),
                             g1.nx(), g1.ny() + g2.ny() - 1);

  std::size_t const nx = joined_grid->nx();
  std::vector<double> values(joined_grid->node_count(), 0.0);
  // the shared face is zero in both inputs, so plain addition is safe
  for (std::size_t j = 0; j < g1.ny(); ++j)
    for (std::size_t i = 0; i < g1.nx(); ++i)
      values[i + nx * j] += w_first * first[i + g1.nx() * j];
  std::size_t const di = side == Side::x ? g1.nx() - 1 : 0;
  std::size_t const dj = side == Side::y ? g1.ny() - 1 : 0;
  for (std::size_t j = 0; j < g2.ny(); ++j)
    for (std::size_t i = 0; i < g2.nx(); ++i)
      values[(i + di) + nx * (j + dj)] += w_second * second[i + g2.nx() * j];

  GridFunction mixed(joined_grid, std::move(values), Boundary::dirichlet_zero);
  double const norm = lp_norm(mixed, p_minus, Weighting::weighted);
  GridFunction joined = mixed.scaled(1.0 / norm);

  auto grad_norm = [p_plus](GridFunction const &u) {
    return lp_norm(gradient(u), p_plus, Weighting::weighted);
  };
  JoinResult r{joined, mix_factor(t, p_plus, p_minus), grad_norm(u1), grad_norm(u2), 0.0};
  r.K_hat = grad_norm(joined);
  return r;
}

} // namespace pxlap
