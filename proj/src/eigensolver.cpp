#include <pxlap/eigensolver.hpp>

#include <pxlap/kernels.hpp>
#include <pxlap/preconditioner.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>

namespace pxlap
{

namespace kp = kernels::parallel;

GridFunction project_to_sphere(GridFunction const &u, ExponentField const &field)
{
  double const k = luxemburg_norm(u, field);
  if (!(k > 0.0))
    throw std::invalid_argument("cannot normalize the zero function");
  return u.scaled(1.0 / k);
}

namespace
{

enum class Constraint
{
  none,
  odd,
  balanced
};

constexpr double armijo_c = 1e-4;
constexpr int max_backtracks = 60;
constexpr int max_stalled = 5;

void require_resolution(Grid const &g)
{
  if (g.nx() < 17 || (g.dimension() == 2 && g.ny() < 17))
    throw std::invalid_argument("eigensolver needs at least 17 nodes per axis");
}

/// v <- (v - Rv)/2 with R the reflection x -> a + b - x.
void make_odd(Grid const &g, std::vector<double> &v)
{
  std::size_t const nx = g.nx();
  std::vector<double> const copy = v;
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < nx; ++i)
      v[i + nx * j] = 0.5 * (copy[i + nx * j] - copy[(nx - 1 - i) + nx * j]);
}

double mass_mean(std::vector<double> const &v, std::vector<double> const &mass)
{
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    num += mass[i] * v[i];
    den += mass[i];
  }
  return num / den;
}

/// Signed modular split of the normalized function at cell level:
/// sum over positive cells minus sum over negative cells of |w/nu|^p / p.
double balance_of(std::vector<double> const &centers, std::span<double const> p, double vol)
{
  std::vector<double> mag(centers.size());
  for (std::size_t c = 0; c < mag.size(); ++c)
    mag[c] = std::abs(centers[c]);
  double const nu = luxemburg_norm(mag, p, vol);
  if (nu == 0.0)
    return 0.0;
  double b = 0.0;
  for (std::size_t c = 0; c < mag.size(); ++c)
  {
    double const t = std::pow(mag[c] / nu, p[c]) / p[c];
    b += centers[c] > 0.0 ? t : -t;
  }
  return vol * b;
}

/// Shifts u by a constant so that the balance vanishes (bisection on the
/// shift over [min u, max u], where the balance goes from +1 to -1).
std::vector<double> balance(GridFunction const &u, ExponentField const &field)
{
  Grid const &g = *u.grid();
  auto const centers = center_values(u).data;
  auto const p = field.cell_p();
  double const vol = g.cell_volume();
  auto const values = u.values();
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  std::vector<double> shifted(centers.size());
  auto at = [&](double c) {
    for (std::size_t k = 0; k < centers.size(); ++k)
      shifted[k] = centers[k] - c;
    return balance_of(shifted, p, vol);
  };
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(std::abs(lo), std::abs(hi)); ++it)
  {
    double const mid = 0.5 * (lo + hi);
    (at(mid) > 0.0 ? lo : hi) = mid;
  }
  double const c = 0.5 * (lo + hi);
  std::vector<double> out(values.begin(), values.end());
  for (double &v : out)
    v -= c;
  return out;
}

/// Nodal gradient of the balance functional at a normalized u.
std::vector<double> balance_gradient(GridFunction const &u, ExponentField const &field,
                                     std::vector<double> const &dk)
{
  Grid const &g = *u.grid();
  auto const centers = center_values(u).data;
  auto const p = field.cell_p();
  double const vol = g.cell_volume();
  std::vector<double> scalar(centers.size());
  double signed_plain = 0.0;
  for (std::size_t c = 0; c < centers.size(); ++c)
  {
    double const a = std::abs(centers[c]);
    scalar[c] = vol * std::pow(a, p[c] - 1.0);
    double const t = vol * std::pow(a, p[c]);
    signed_plain += centers[c] > 0.0 ? t : -t;
  }
  std::vector<double> out(g.node_count());
  kp::gather(g, scalar, {}, out);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] -= signed_plain * dk[i];
  return out;
}

struct Problem
{
  ExponentField const &field;
  Boundary bc;
  Constraint constraint;
  std::vector<double> mass;
};

/// Puts raw nodal values on the constraint set: symmetrize or balance, then
/// normalize to k = 1.
GridFunction retract(Problem const &pb, std::vector<double> values)
{
  GridPtr const &grid = pb.field.grid();
  if (pb.constraint == Constraint::odd)
    make_odd(*grid, values);
  GridFunction u(grid, std::move(values), pb.bc);
  if (pb.constraint == Constraint::balanced)
    u = GridFunction(grid, balance(u, pb.field), pb.bc);
  return project_to_sphere(u, pb.field);
}

struct Step
{
  NodalDerivatives nd;
  std::vector<double> g; // projected gradient of the quotient
  double residual = 0.0;
};

Step evaluate(Problem const &pb, GridFunction const &u)
{
  Grid const &grid = *u.grid();
  Step s{nodal_derivatives(u, pb.field), {}, 0.0};
  double const q = s.nd.quotient();
  s.g.resize(grid.node_count());
  for (std::size_t i = 0; i < s.g.size(); ++i)
    s.g[i] = (pb.bc == Boundary::dirichlet_zero && grid.on_boundary(i))
                 ? 0.0
                 : s.nd.dK[i] - q * s.nd.dk[i];
  if (pb.constraint == Constraint::odd)
    make_odd(grid, s.g);
  if (pb.constraint == Constraint::balanced)
  {
    // remove the multiple of the constraint gradient that best explains g
    auto const b = balance_gradient(u, pb.field, s.nd.dk);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i)
    {
      num += s.g[i] * b[i] / pb.mass[i];
      den += b[i] * b[i] / pb.mass[i];
    }
    if (den > 0.0)
      for (std::size_t i = 0; i < b.size(); ++i)
        s.g[i] -= num / den * b[i];
  }
  for (std::size_t i = 0; i < s.g.size(); ++i)
    s.residual = std::max(s.residual, std::abs(s.g[i]) / pb.mass[i]);
  return s;
}

EigenpairResult descend(Problem const &pb, std::vector<double> initial, SolverOptions const &opts)
{
  GridFunction u = retract(pb, std::move(initial));
  Step step = evaluate(pb, u);
  double q = step.nd.quotient();
  EigenpairResult r{q, u, step.residual, 0, false, pb.bc, {q}, false};
  int stalled = 0;

  for (int it = 0; it < opts.max_iter; ++it)
  {
    if (step.residual < opts.tol)
    {
      r.converged = true;
      break;
    }
    double const K = step.nd.K;
    double const shift = pb.bc == Boundary::free ? 0.1 * q * q + 1e-3 : 0.0;
    Preconditioner const P(u, pb.field, K, shift);
    auto d = P.apply(step.g);

    // scale so that for p = 2 a unit step is one inverse-iteration update
    auto const grad = gradient(u);
    double const plain = modular(grad, K, pb.field, Weighting::plain);
    for (double &v : d)
      v *= -K * plain;
    if (pb.constraint == Constraint::odd)
      make_odd(*u.grid(), d);
    if (pb.constraint == Constraint::balanced)
    {
      double const m = mass_mean(d, pb.mass);
      for (double &v : d)
        v -= m;
    }
    double const slope = kp::dot(step.g, d);
    if (!(slope < 0.0))
      break;

    double alpha = 1.0;
    std::optional<GridFunction> accepted;
    double q_new = q;
    auto const base = u.values();
    for (int bt = 0; bt < max_backtracks; ++bt, alpha *= 0.5)
    {
      std::vector<double> trial(base.begin(), base.end());
      for (std::size_t i = 0; i < trial.size(); ++i)
        trial[i] += alpha * d[i];
      if (std::all_of(trial.begin(), trial.end(), [](double v) { return v == 0.0; }))
        continue;
      GridFunction cand = retract(pb, std::move(trial));
      double const qc = rayleigh(cand, pb.field).quotient;
      if (qc <= q + armijo_c * alpha * slope)
      {
        accepted = std::move(cand);
        q_new = qc;
        break;
      }
    }
    if (!accepted)
      break;
    // steps that no longer move the quotient beyond rounding mean the
    // residual has hit its floor
    stalled = q_new > q * (1.0 - 1e-14) ? stalled + 1 : 0;
    u = std::move(*accepted);
    q = q_new;
    r.trace.push_back(q);
    r.iterations = it + 1;
    step = evaluate(pb, u);
    if (stalled >= max_stalled)
      break;
  }

  if (!r.converged && step.residual < opts.tol)
    r.converged = true;
  r.u = u;
  r.lambda = step.nd.K; // k(u) = 1
  r.residual = step.residual;
  return r;
}

bool check_single_signed(GridFunction &u)
{
  auto v = u.values();
  double sum = 0.0;
  for (double x : v)
    sum += x;
  if (sum < 0.0)
    for (double &x : v)
      x = -x;
  double const tiny = 1e-12 * u.max_abs();
  Grid const &g = *u.grid();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!g.on_boundary(i) && v[i] < -tiny)
      return false;
  return true;
}

/// Normalized coordinate of node k along each axis, in [0, 1].
std::array<double, 2> unit_coords(Grid const &g, std::size_t k)
{
  auto const at = g.node(k);
  Domain const &d = g.domain();
  double const s = (at[0] - d.lower()[0]) / d.length(0);
  double const t = g.dimension() == 1 ? 0.5 : (at[1] - d.lower()[1]) / d.length(1);
  return {s, t};
}

std::vector<double> initial_guess(Grid const &g, Boundary bc, Constraint constraint, int restart,
                                  std::uint64_t seed)
{
  std::vector<double> v(g.node_count());
  for (std::size_t k = 0; k < v.size(); ++k)
  {
    auto const [s, t] = unit_coords(g, k);
    if (bc == Boundary::dirichlet_zero)
      v[k] = g.on_boundary(k) ? 0.0
                              : s * (1 - s) * (g.dimension() == 2 ? 4 * t * (1 - t) : 1.0) * 4;
    else
      v[k] = s - 0.5;
  }
  if (restart > 0)
  {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(restart));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double &x : v)
      x *= 1.0 + 0.5 * uni(rng);
  }
  (void)constraint;
  return v;
}

EigenpairResult solve(Problem const &pb, SolverOptions const &opts)
{
  Grid const &g = *pb.field.grid();
  int const restarts = std::max(1, opts.restarts);
  std::vector<std::optional<EigenpairResult>> results(static_cast<std::size_t>(restarts));
  std::exception_ptr failure;
  std::mutex failure_lock;

#pragma omp parallel for schedule(dynamic) if (restarts > 1)
  for (int r = 0; r < restarts; ++r)
  {
    try
    {
      results[static_cast<std::size_t>(r)] =
          descend(pb, initial_guess(g, pb.bc, pb.constraint, r, opts.seed), opts);
    }
    catch (...)
    {
      std::lock_guard<std::mutex> lock(failure_lock);
      if (!failure)
        failure = std::current_exception();
    }
  }
  if (failure)
    std::rethrow_exception(failure);

  // lowest level among converged runs, else lowest overall; ties by index
  std::size_t best = 0;
  auto better = [](EigenpairResult const &a, EigenpairResult const &b) {
    if (a.converged != b.converged)
      return a.converged;
    return a.lambda < b.lambda;
  };
  for (std::size_t r = 1; r < results.size(); ++r)
    if (better(*results[r], *results[best]))
      best = r;
  EigenpairResult out = std::move(*results[best]);
  if (pb.bc == Boundary::dirichlet_zero)
  {
    out.single_signed = check_single_signed(out.u);
    auto v = out.u.values();
    double sum = 0.0;
    for (double x : v)
      sum += x;
    if (sum < 0.0)
      out.u = out.u.scaled(-1.0);
  }
  return out;
}

} // namespace

EigenpairResult first_eigenpair(ExponentField const &field, Boundary bc, SolverOptions const &opts)
{
  GridPtr const &grid = field.grid();
  require_resolution(*grid);
  if (!(opts.tol > 0.0) || opts.max_iter < 0)
    throw std::invalid_argument("solver options need tol > 0 and max_iter >= 0");

  if (bc == Boundary::free && !opts.odd_symmetry)
  {
    auto const one = GridFunction(grid, std::vector<double>(grid->node_count(), 1.0), bc);
    auto u = project_to_sphere(one, field);
    return EigenpairResult{0.0, std::move(u), 0.0, 0, true, bc, {0.0}, true};
  }
  Problem const pb{field, bc,
                   bc == Boundary::free ? Constraint::odd : Constraint::none,
                   hat_masses(*grid)};
  return solve(pb, opts);
}

EigenpairResult neumann_first_nontrivial(ExponentField const &field, SolverOptions const &opts)
{
  GridPtr const &grid = field.grid();
  require_resolution(*grid);
  if (!(opts.tol > 0.0) || opts.max_iter < 0)
    throw std::invalid_argument("solver options need tol > 0 and max_iter >= 0");
  Problem const pb{field, Boundary::free, Constraint::balanced, hat_masses(*grid)};
  return solve(pb, opts);
}

namespace
{

struct PieceSolver
{
  ExponentField const &field;
  SolverOptions opts;
  std::map<std::pair<std::size_t, std::size_t>, EigenpairResult> cache;

  EigenpairResult const &operator()(std::size_t first, std::size_t last)
  {
    auto const key = std::make_pair(first, last);
    auto it = cache.find(key);
    if (it != cache.end())
      return it->second;
    Grid const &g = *field.grid();
    auto sub = Grid::make(Domain::interval(g.x(first), g.x(last)), last - first + 1);
    auto const sub_field = ExponentField(sub, std::vector<double>(field.nodes().begin() + first,
                                                                  field.nodes().begin() + last + 1));
    // pieces may be coarser than the public 17-node floor
    Problem const pb{sub_field, Boundary::dirichlet_zero, Constraint::none, hat_masses(*sub)};
    auto result = solve(pb, opts);
    return cache.emplace(key, std::move(result)).first->second;
  }
};

constexpr std::size_t min_piece_nodes = 8;

/// Integer bisection for breakpoint m between breaks[m-1] and breaks[m+1]:
/// the node where the left and right sub-values cross.
bool adjust_breakpoint(PieceSolver &solve, std::vector<std::size_t> &breaks, std::size_t m)
{
  std::size_t lo = breaks[m - 1] + min_piece_nodes - 1;
  std::size_t hi = breaks[m + 1] - (min_piece_nodes - 1);
  auto gap = [&](std::size_t b) {
    return solve(breaks[m - 1], b).lambda - solve(b, breaks[m + 1]).lambda;
  };
  // left value decreases and right value increases as b moves right
  if (gap(lo) <= 0.0)
    hi = lo;
  else if (gap(hi) >= 0.0)
    lo = hi;
  else
    while (hi - lo > 1)
    {
      std::size_t const mid = lo + (hi - lo) / 2;
      (gap(mid) > 0.0 ? lo : hi) = mid;
    }
  // pick the node among lo, hi that minimizes the larger sub-value
  auto worst = [&](std::size_t b) {
    return std::max(solve(breaks[m - 1], b).lambda, solve(b, breaks[m + 1]).lambda);
  };
  std::size_t const pick = worst(lo) <= worst(hi) ? lo : hi;
  if (pick == breaks[m] || !(worst(pick) < worst(breaks[m])))
    return false;
  breaks[m] = pick;
  return true;
}

} // namespace

NodalMode nodal_mode_1d(ExponentField const &field, int j, SolverOptions const &opts)
{
  GridPtr const &grid = field.grid();
  if (grid->dimension() != 1)
    throw std::invalid_argument("nodal modes need a 1D domain");
  if (j < 1)
    throw std::invalid_argument("nodal modes need j >= 1");
  std::size_t const cells = grid->cells_x();
  auto const uj = static_cast<std::size_t>(j);
  if (cells < uj * (min_piece_nodes - 1))
    throw std::invalid_argument("mode " + std::to_string(j) + " needs at least " +
                                std::to_string(min_piece_nodes) + " nodes per subinterval");

  SolverOptions sub = opts;
  sub.restarts = 1;
  PieceSolver solve{field, sub, {}};

  std::vector<std::size_t> breaks(uj + 1);
  for (std::size_t m = 0; m <= uj; ++m)
    breaks[m] = (m * cells) / uj;

  for (int sweep = 0; sweep < 50 && j > 1; ++sweep)
  {
    bool changed = false;
    for (std::size_t m = 1; m < uj; ++m)
      changed = adjust_breakpoint(solve, breaks, m) || changed;
    if (!changed)
      break;
  }

  // glue with alternating signs
  std::vector<double> values(grid->node_count(), 0.0);
  std::vector<double> piece_values;
  for (std::size_t m = 0; m < uj; ++m)
  {
    auto const &res = solve(breaks[m], breaks[m + 1]);
    piece_values.push_back(res.lambda);
    double const sign = m % 2 == 0 ? 1.0 : -1.0;
    auto const v = res.u.values();
    for (std::size_t i = 0; i < v.size(); ++i)
      values[breaks[m] + i] = sign * v[i];
  }
  auto const glued = project_to_sphere(GridFunction(grid, std::move(values), Boundary::dirichlet_zero), field);
  double const value = rayleigh(glued, field).quotient;
  return NodalMode{j, std::move(breaks), std::move(piece_values), std::move(glued), value};
}

Spectrum nodal_modes_1d(ExponentField const &field, int j_max, SolverOptions const &opts)
{
  if (j_max < 1)
    throw std::invalid_argument("nodal modes need j_max >= 1");
  Spectrum s;
  s.boundary = Boundary::dirichlet_zero;
  std::vector<double> values(static_cast<std::size_t>(j_max));
  std::exception_ptr failure;
  std::mutex failure_lock;
#pragma omp parallel for schedule(dynamic)
  for (int j = 1; j <= j_max; ++j)
  {
    try
    {
      values[static_cast<std::size_t>(j - 1)] = nodal_mode_1d(field, j, opts).value;
    }
    catch (...)
    {
      std::lock_guard<std::mutex> lock(failure_lock);
      if (!failure)
        failure = std::current_exception();
    }
  }
  if (failure)
    std::rethrow_exception(failure);
  for (int j = 1; j <= j_max; ++j)
    s.values.push_back({j, values[static_cast<std::size_t>(j - 1)], ValueKind::nodal_upper});
  return s;
}

} // namespace pxlap
