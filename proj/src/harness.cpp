#include <pxlap/harness.hpp>
#include <pxlap/oracle.hpp>
#include <pxlap/rayleigh.hpp>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace pxlap
{

using nlohmann::ordered_json;

namespace
{

struct CommandName
{
  Command command;
  char const *name;
};

constexpr CommandName command_names[] = {
    {Command::norm, "norm"},       {Command::eig, "eig"},       {Command::spectrum, "spectrum"},
    {Command::count, "count"},     {Command::verify, "verify"}, {Command::lambda_star, "lambda-star"},
};

std::string trim(std::string_view s)
{
  auto const first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  auto const last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class T> T parse_number(std::string_view key, std::string_view text)
{
  std::string const s = trim(text);
  T value{};
  auto const [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    throw ConfigError("config key '" + std::string(key) + "': cannot read '" + s + "'");
  return value;
}

std::string format_unsigned(std::uint64_t v)
{
  return std::to_string(v);
}

/// One config key: how to read it, how to print it.
struct Key
{
  char const *name;
  std::function<void(ExperimentConfig &, std::string_view)> set;
  std::function<std::string(ExperimentConfig const &)> get;
};

template <class T> Key number_key(char const *name, T ExperimentConfig::*member)
{
  return Key{name,
             [name, member](ExperimentConfig &c, std::string_view v) {
               c.*member = parse_number<T>(name, v);
             },
             [member](ExperimentConfig const &c) {
               if constexpr (std::is_floating_point_v<T>)
                 return format_number(c.*member);
               else
                 return std::to_string(c.*member);
             }};
}

Key string_key(char const *name, std::string ExperimentConfig::*member)
{
  return Key{name, [member](ExperimentConfig &c, std::string_view v) { c.*member = trim(v); },
             [member](ExperimentConfig const &c) { return c.*member; }};
}

std::vector<Key> const &keys()
{
  static std::vector<Key> const table = {
      string_key("domain", &ExperimentConfig::domain),
      number_key("nodes", &ExperimentConfig::nodes),
      number_key("nodes_y", &ExperimentConfig::nodes_y),
      string_key("exponent", &ExperimentConfig::exponent),
      string_key("exponent_file", &ExperimentConfig::exponent_file),
      string_key("boundary", &ExperimentConfig::boundary),
      string_key("constraint", &ExperimentConfig::constraint),
      number_key("max_iter", &ExperimentConfig::max_iter),
      number_key("tol", &ExperimentConfig::tol),
      Key{"seed",
          [](ExperimentConfig &c, std::string_view v) {
            c.seed = parse_number<std::uint64_t>("seed", v);
          },
          [](ExperimentConfig const &c) { return format_unsigned(c.seed); }},
      number_key("restarts", &ExperimentConfig::restarts),
      string_key("function", &ExperimentConfig::function),
      string_key("source", &ExperimentConfig::source),
      number_key("j_max", &ExperimentConfig::j_max),
      number_key("lambda_min", &ExperimentConfig::lambda_min),
      number_key("lambda_max", &ExperimentConfig::lambda_max),
      number_key("lambda_count", &ExperimentConfig::lambda_count),
      number_key("anchor", &ExperimentConfig::anchor),
      number_key("cube_epsilon", &ExperimentConfig::cube_epsilon),
      number_key("verify_cases", &ExperimentConfig::verify_cases),
      number_key("t_max", &ExperimentConfig::t_max),
      number_key("t_min", &ExperimentConfig::t_min),
      number_key("t_count", &ExperimentConfig::t_count),
      number_key("bump_x", &ExperimentConfig::bump_x),
      number_key("bump_y", &ExperimentConfig::bump_y),
      number_key("bump_plateau", &ExperimentConfig::bump_plateau),
      number_key("bump_ramp", &ExperimentConfig::bump_ramp),
      string_key("out", &ExperimentConfig::out),
      Key{"format",
          [](ExperimentConfig &c, std::string_view v) {
            auto const s = trim(v);
            if (s == "csv")
              c.format = OutputFormat::csv;
            else if (s == "json")
              c.format = OutputFormat::json;
            else
              throw ConfigError("config key 'format': expected csv or json, got '" + s + "'");
          },
          [](ExperimentConfig const &c) {
            return std::string(c.format == OutputFormat::csv ? "csv" : "json");
          }},
  };
  return table;
}

} // namespace

char const *to_string(Command command)
{
  for (auto const &c : command_names)
    if (c.command == command)
      return c.name;
  return "?";
}

Command parse_command(std::string_view name)
{
  for (auto const &c : command_names)
    if (name == c.name)
      return c.command;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

void set_config_value(ExperimentConfig &config, std::string_view key, std::string_view value)
{
  std::string const k = trim(key);
  for (auto const &entry : keys())
    if (k == entry.name)
    {
      entry.set(config, value);
      return;
    }
  throw ConfigError("unknown config key '" + k + "'");
}

void parse_config_text(ExperimentConfig &config, std::string_view text)
{
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line))
  {
    ++number;
    if (auto const hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    if (trim(line).empty())
      continue;
    auto const eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    set_config_value(config, std::string_view(line).substr(0, eq),
                     std::string_view(line).substr(eq + 1));
  }
}

void load_config_file(ExperimentConfig &config, std::string const &path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  parse_config_text(config, text.str());
}

std::string config_to_text(ExperimentConfig const &config)
{
  std::string out;
  for (auto const &entry : keys())
    out += std::string(entry.name) + " = " + entry.get(config) + "\n";
  return out;
}

namespace
{

Domain parse_domain(std::string const &spec)
{
  std::istringstream in(spec);
  std::string kind;
  in >> kind;
  std::vector<double> v;
  std::string word;
  while (in >> word)
    v.push_back(parse_number<double>("domain", word));
  if (kind == "interval" && v.size() == 2)
    return Domain::interval(v[0], v[1]);
  if (kind == "box" && v.size() == 4)
    return Domain::box(v[0], v[1], v[2], v[3]);
  throw ConfigError("config key 'domain': expected 'interval a b' or 'box x0 x1 y0 y1', got '" +
                    spec + "'");
}

} // namespace

void validate(ExperimentConfig const &c)
{
  Domain const d = [&] {
    try
    {
      return parse_domain(c.domain);
    }
    catch (std::invalid_argument const &e)
    {
      throw ConfigError(std::string("config key 'domain': ") + e.what());
    }
  }();
  if (c.nodes < 17 || (d.dimension() == 2 && c.nodes_y != 0 && c.nodes_y < 17))
    throw ConfigError("grid resolution must be at least 17 nodes per axis");
  if (!(c.tol > 0.0))
    throw ConfigError("config key 'tol' must be positive");
  if (c.max_iter < 1 || c.restarts < 1)
    throw ConfigError("max_iter and restarts must be at least 1");
  if (!c.exponent_file.empty() && !std::filesystem::exists(c.exponent_file))
    throw ConfigError("exponent file '" + c.exponent_file + "' does not exist");
  if (c.boundary != "dirichlet" && c.boundary != "free")
    throw ConfigError("config key 'boundary': expected dirichlet or free");
  if (c.constraint != "balanced" && c.constraint != "odd" && c.constraint != "none")
    throw ConfigError("config key 'constraint': expected balanced, odd or none");
  if (c.source != "auto" && c.source != "oracle" && c.source != "nodal")
    throw ConfigError("config key 'source': expected auto, oracle or nodal");
  if (c.j_max < 1)
    throw ConfigError("config key 'j_max' must be at least 1");
  if (!(c.lambda_min > 0.0) || !(c.lambda_max >= c.lambda_min) || c.lambda_count < 1)
    throw ConfigError("lambda grid needs 0 < lambda_min <= lambda_max and lambda_count >= 1");
  if (c.anchor < 0.0)
    throw ConfigError("config key 'anchor' must be nonnegative");
  if (!(c.cube_epsilon > 0.0))
    throw ConfigError("config key 'cube_epsilon' must be positive");
  if (!(c.t_min > 0.0) || !(c.t_max >= c.t_min) || c.t_count < 1)
    throw ConfigError("t grid needs 0 < t_min <= t_max and t_count >= 1");
  if (c.verify_cases < 1)
    throw ConfigError("config key 'verify_cases' must be at least 1");
}

std::string format_number(double x)
{
  char buf[64];
  auto const [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

std::string to_csv(Table const &table)
{
  std::string out;
  for (std::size_t k = 0; k < table.columns.size(); ++k)
    out += (k ? "," : "") + table.columns[k];
  out += "\n";
  for (auto const &row : table.rows)
  {
    for (std::size_t k = 0; k < row.size(); ++k)
      out += (k ? "," : "") + row[k];
    out += "\n";
  }
  return out;
}

namespace
{

double fitted_or_nan(CountingReport const &r)
{
  try
  {
    return fit_growth_exponent(r);
  }
  catch (std::invalid_argument const &)
  {
    return std::nan("");
  }
}

ordered_json stats_json(ExponentStats const &s)
{
  ordered_json j;
  j["dimension"] = s.dimension;
  j["measure"] = s.measure;
  j["p_minus"] = s.p_minus;
  j["p_plus"] = s.p_plus;
  j["sigma"] = s.sigma;
  j["tau"] = s.tau;
  j["kappa"] = std::isfinite(s.kappa) ? ordered_json(s.kappa) : ordered_json(nullptr);
  j["warnings"] = s.warning_messages();
  return j;
}

ordered_json maybe_number(double x)
{
  return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}

ordered_json counting_summary(CountingReport const &r)
{
  ordered_json j;
  j["anchor_lambda"] = r.anchor_lambda;
  j["anchor_N"] = r.anchor_N;
  j["C1"] = r.C1;
  j["C2"] = r.C2;
  j["fitted_exponent"] = maybe_number(fitted_or_nan(r));
  double const n = r.stats.dimension;
  j["exponent_window"] = {n / (1.0 + r.stats.sigma), n / (1.0 - r.stats.sigma)};
  j["violations"] = r.violations;
  j["stats"] = stats_json(r.stats);
  return j;
}

} // namespace

Table counting_table(CountingReport const &r)
{
  Table t{{"lambda", "N", "lower", "upper", "fitted_exponent"}, {}};
  std::string const slope = format_number(fitted_or_nan(r));
  for (std::size_t k = 0; k < r.lambda.size(); ++k)
    t.rows.push_back({format_number(r.lambda[k]), std::to_string(r.N[k]), format_number(r.lower[k]),
                      format_number(r.upper[k]), slope});
  return t;
}

std::string counting_json(CountingReport const &r)
{
  ordered_json j = counting_summary(r);
  j["lambda"] = r.lambda;
  j["N"] = r.N;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  return j.dump(2);
}

namespace
{

/// Exit code 2: a checked inequality failed.
class InvariantViolation : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Setup
{
  GridPtr grid;
  ExponentField field;
  Boundary bc;
  ExponentStats stats;
};

Setup make_setup(ExperimentConfig const &c)
{
  Domain const d = parse_domain(c.domain);
  GridPtr grid = d.dimension() == 1
                     ? Grid::make(d, c.nodes)
                     : Grid::make(d, c.nodes, c.nodes_y == 0 ? c.nodes : c.nodes_y);
  ExponentField field = c.exponent_file.empty()
                            ? build_exponent_field(grid, Expression::parse(c.exponent))
                            : build_exponent_field(grid, read_exponent_csv(c.exponent_file));
  Boundary const bc = c.boundary == "free" ? Boundary::free : Boundary::dirichlet_zero;
  ExponentStats stats = exponent_stats(field, d);
  return Setup{grid, std::move(field), bc, stats};
}

SolverOptions solver_options(ExperimentConfig const &c)
{
  SolverOptions o;
  o.max_iter = c.max_iter;
  o.tol = c.tol;
  o.seed = c.seed;
  o.restarts = c.restarts;
  return o;
}

/// A command's output: a table plus summary fields.
struct Report
{
  Table table;
  ordered_json summary;
};

ordered_json cell_json(std::string const &cell)
{
  long long n = 0;
  if (auto const [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), n);
      ec == std::errc() && end == cell.data() + cell.size())
    return n;
  double v = 0.0;
  auto const [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec == std::errc() && end == cell.data() + cell.size())
    return v;
  return cell;
}

ordered_json document(Command command, ExperimentConfig const &c, Report const &r)
{
  ordered_json doc;
  doc["command"] = to_string(command);
  ordered_json cfg;
  // the output location is not part of the experiment
  for (auto const &entry : keys())
    if (std::string_view(entry.name) != "out")
      cfg[entry.name] = entry.get(c);
  doc["config"] = cfg;
  doc["summary"] = r.summary;
  doc["columns"] = r.table.columns;
  ordered_json rows = ordered_json::array();
  for (auto const &row : r.table.rows)
  {
    ordered_json jr = ordered_json::array();
    for (auto const &cell : row)
      jr.push_back(cell_json(cell));
    rows.push_back(std::move(jr));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

void emit(Command command, ExperimentConfig const &c, Report const &r, std::ostream &out,
          std::ostream &err)
{
  bool const csv = c.format == OutputFormat::csv;
  std::string const body = csv ? to_csv(r.table) : document(command, c, r).dump(2) + "\n";
  if (c.out.empty())
  {
    out << body;
    if (csv)
      err << r.summary.dump() << "\n";
    return;
  }
  std::filesystem::create_directories(c.out);
  auto const path = std::filesystem::path(c.out) / (std::string(to_string(command)) + (csv ? ".csv" : ".json"));
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw ConfigError("cannot write '" + path.string() + "'");
  file << body;
  out << r.summary.dump(2) << "\n";
}

std::string describe(double lhs, char const *op, double rhs)
{
  return format_number(lhs) + " " + op + " " + format_number(rhs);
}

Report run_norm(ExperimentConfig const &c, Setup const &s)
{
  auto const f = Expression::parse(c.function);
  auto const u = GridFunction::sample(s.grid, [&f](double x, double y) { return f(x, y); }, s.bc);
  if (u.is_zero())
    throw ConfigError("config key 'function' samples to zero on the grid");
  double const nu = luxemburg_norm(u, s.field);
  auto const grad = gradient(u);
  double const grad_norm = luxemburg_norm(grad, s.field);

  Report r;
  r.table.columns = {"quantity", "value"};
  auto row = [&r](char const *name, double v) { r.table.rows.push_back({name, format_number(v)}); };
  row("norm", nu);
  row("modular_at_norm", modular(u, nu, s.field));
  row("gradient_norm", grad_norm);
  row("quotient", grad_norm / nu);
  r.summary["norm"] = nu;
  r.summary["gradient_norm"] = grad_norm;
  r.summary["quotient"] = grad_norm / nu;
  r.summary["stats"] = stats_json(s.stats);

  if (s.stats.bounds_available())
  {
    auto const sw = check_norm_sandwich(u, s.field, s.stats);
    row("sandwich_lower", sw.lower);
    row("sandwich_upper", sw.upper);
    r.summary["sandwich"] = {{"lower", sw.lower}, {"mid", sw.mid}, {"upper", sw.upper},
                             {"holds", sw.holds}};
    if (!sw.holds)
      throw InvariantViolation("norm sandwich fails: " + describe(sw.lower, "<=", sw.mid) +
                               " <= " + format_number(sw.upper));
  }
  return r;
}

Table function_table(GridFunction const &u)
{
  Grid const &g = *u.grid();
  Table t;
  t.columns = g.dimension() == 1 ? std::vector<std::string>{"x", "u"}
                                 : std::vector<std::string>{"x", "y", "u"};
  for (std::size_t k = 0; k < u.size(); ++k)
  {
    auto const at = g.node(k);
    if (g.dimension() == 1)
      t.rows.push_back({format_number(at[0]), format_number(u[k])});
    else
      t.rows.push_back({format_number(at[0]), format_number(at[1]), format_number(u[k])});
  }
  return t;
}

Report run_eig(ExperimentConfig const &c, Setup const &s)
{
  auto opts = solver_options(c);
  EigenpairResult const res = [&] {
    if (s.bc == Boundary::dirichlet_zero || c.constraint == "none")
      return first_eigenpair(s.field, s.bc, opts);
    if (c.constraint == "odd")
    {
      opts.odd_symmetry = true;
      return first_eigenpair(s.field, s.bc, opts);
    }
    return neumann_first_nontrivial(s.field, opts);
  }();

  Report r;
  r.table = function_table(res.u);
  r.summary["lambda"] = res.lambda;
  r.summary["residual"] = res.residual;
  r.summary["iterations"] = res.iterations;
  r.summary["converged"] = res.converged;
  r.summary["single_signed"] = res.single_signed;
  r.summary["boundary"] = to_string(res.boundary);
  r.summary["seed"] = c.seed;

  auto const state = rayleigh(res.u, s.field);
  if (std::abs(state.k - 1.0) > 1e-10)
    throw InvariantViolation("eigenfunction off the unit sphere: |k(u) - 1| = " +
                             format_number(std::abs(state.k - 1.0)) + " > 1e-10");
  if (std::abs(state.K - res.lambda) > 1e-10 * std::max(1.0, res.lambda))
    throw InvariantViolation("critical value mismatch: |K(u) - lambda| = " +
                             format_number(std::abs(state.K - res.lambda)) + " > 1e-10");
  if (res.boundary == Boundary::dirichlet_zero && res.converged && !res.single_signed)
    throw InvariantViolation("converged first dirichlet eigenfunction changes sign");
  return r;
}

/// First Dirichlet value of the unit cube for the constant exponent p.
double unit_cube_value(int dimension, double p, ExperimentConfig const &c)
{
  if (dimension == 1)
    return varpi_p(p);
  if (p == 2.0)
    return std::numbers::pi * std::sqrt(2.0);
  auto const g = Grid::make(Domain::box(0, 1, 0, 1), 65, 65);
  return first_eigenpair(constant_exponent(g, p), Boundary::dirichlet_zero, solver_options(c))
      .lambda;
}

struct SpectrumChoice
{
  Spectrum spectrum;
  std::string source;
};

/// Oracle values when the field allows it, nodal upper values otherwise.
/// `lambda_needed` > 0 asks for every value below it.
SpectrumChoice build_spectrum(ExperimentConfig const &c, Setup const &s, double lambda_needed)
{
  Domain const &d = s.grid->domain();
  bool const constant = s.field.is_constant();
  std::string source = c.source;
  if (source == "auto")
    source = constant ? "oracle" : "nodal";

  if (source == "oracle")
  {
    if (!constant)
      throw ConfigError("oracle spectra need a constant exponent");
    double const p = s.field.p_minus();
    if (d.dimension() == 1)
    {
      int j = c.j_max;
      if (lambda_needed > 0.0)
        j = std::max(j, static_cast<int>(std::ceil(lambda_needed * d.length(0) / varpi_p(p))) + 2);
      return {exact_spectrum_constant_p(p, d.length(0), s.bc, j), source};
    }
    if (p != 2.0)
      throw ConfigError("2D oracle spectra exist only for p = 2");
    double top = lambda_needed > 0.0 ? lambda_needed * 1.01 : 8.0 / std::min(d.length(0), d.length(1));
    auto sp = box_laplacian_spectrum(d.length(0), d.length(1), s.bc, top);
    while (lambda_needed <= 0.0 && sp.values.size() < static_cast<std::size_t>(c.j_max))
    {
      top *= 2.0;
      sp = box_laplacian_spectrum(d.length(0), d.length(1), s.bc, top);
    }
    if (lambda_needed <= 0.0)
      sp.values.resize(static_cast<std::size_t>(c.j_max));
    return {std::move(sp), source};
  }

  if (d.dimension() != 1)
    throw ConfigError("nodal spectra are 1D only");
  if (s.bc != Boundary::dirichlet_zero)
    throw ConfigError("nodal spectra need boundary = dirichlet");
  if (static_cast<std::size_t>(c.j_max) * 7 > s.grid->cells_x())
    throw ConfigError("j_max " + std::to_string(c.j_max) + " needs at least " +
                      std::to_string(7 * c.j_max + 1) + " nodes");
  auto sp = nodal_modes_1d(s.field, c.j_max, solver_options(c));
  if (lambda_needed > 0.0 && sp.values.back().value < lambda_needed)
    throw ConfigError("lambda_max " + format_number(lambda_needed) +
                      " exceeds the largest nodal value " + format_number(sp.values.back().value) +
                      "; raise j_max or lower lambda_max");
  return {std::move(sp), source};
}

Report run_spectrum(ExperimentConfig const &c, Setup const &s)
{
  auto const choice = build_spectrum(c, s, 0.0);
  Report r;
  r.table.columns = {"j", "value", "kind"};
  for (auto const &v : choice.spectrum.values)
    r.table.rows.push_back({std::to_string(v.index), format_number(v.value), to_string(v.kind)});
  r.summary["source"] = choice.source;
  r.summary["boundary"] = to_string(choice.spectrum.boundary);
  r.summary["count"] = choice.spectrum.values.size();
  r.summary["values"] = choice.spectrum.numbers();
  if (!choice.spectrum.nondecreasing())
    throw InvariantViolation("spectrum values decrease in j");
  return r;
}

Report run_count(ExperimentConfig const &c, Setup const &s)
{
  require_bounds(s.stats);
  auto const choice = build_spectrum(c, s, c.lambda_max);
  auto const grid = geometric_grid(c.lambda_min, c.lambda_max, c.lambda_count);
  double const anchor = c.anchor > 0.0 ? c.anchor : c.lambda_min;
  auto const report = counting_report(choice.spectrum, s.stats, grid, anchor);

  Report r;
  r.table = counting_table(report);
  r.summary = counting_summary(report);
  r.summary["source"] = choice.source;

  Domain const &d = s.grid->domain();
  double const lambda0 = unit_cube_value(d.dimension(), s.stats.p_minus, c);
  if (c.lambda_max > lambda0)
  {
    auto const cover = cube_cover(d, c.cube_epsilon);
    auto const e = cube_count_bounds(s.stats, cover.inner, c.lambda_max, c.lambda_max * (1 + 1e-3),
                                     lambda0);
    r.summary["cubes"] = {{"lambda0", e.lambda0},       {"lambda", e.lambda},
                          {"lambda_prime", e.lambda_prime}, {"side", cover.side},
                          {"a_side", e.a_side},         {"b_side", e.b_side},
                          {"lower_count", e.lower_count}, {"upper_count", e.upper_count}};
  }
  if (!report.violations.empty())
  {
    std::size_t const k = report.violations.front();
    throw InvariantViolation("counting bound fails at lambda = " + format_number(grid[k]) + ": " +
                             describe(report.lower[k], "<=", report.N[k]) +
                             " <= " + format_number(report.upper[k]));
  }
  return r;
}

/// Worst signed margin of a family of inequalities lhs <= rhs.
struct Check
{
  explicit Check(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t cases = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::string failure;

  void record(double lhs, double rhs, std::string const &what)
  {
    ++cases;
    double const margin = lhs - rhs;
    if (margin > worst)
      worst = margin;
    if (margin > 0.0 && failure.empty())
      failure = name + " fails: " + what + " (" + describe(lhs, "<=", rhs) + ")";
  }
  bool passed() const { return failure.empty(); }
};

GridFunction random_nodes(GridPtr const &grid, Boundary bc, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> v(grid->node_count());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = bc == Boundary::dirichlet_zero && grid->on_boundary(k) ? 0.0 : uni(rng);
  return GridFunction(grid, std::move(v), bc);
}

/// The two halves of the grid split at the middle x node.
std::pair<GridPtr, GridPtr> split_grid(Grid const &g)
{
  std::size_t const m = (g.nx() - 1) / 2;
  double const xm = g.x(m);
  Domain const &d = g.domain();
  if (g.dimension() == 1)
    return {Grid::make(Domain::interval(d.lower()[0], xm), m + 1),
            Grid::make(Domain::interval(xm, d.upper()[0]), g.nx() - m)};
  return {Grid::make(Domain::box(d.lower()[0], xm, d.lower()[1], d.upper()[1]), m + 1, g.ny()),
          Grid::make(Domain::box(xm, d.upper()[0], d.lower()[1], d.upper()[1]), g.nx() - m, g.ny())};
}

Report run_verify(ExperimentConfig const &c, Setup const &s)
{
  require_bounds(s.stats);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double const pm = s.stats.p_minus;
  double const pp = s.stats.p_plus;

  Check sandwich{"norm sandwich"}, euler_K{"euler identity K"}, euler_k{"euler identity k"};
  Check duality{"dual norm bound"}, homothety{"homothety identities"}, join{"join bound"};
  Check mix{"mix factor"};

  auto const [g1, g2] = split_grid(*s.grid);
  for (std::size_t n = 0; n < c.verify_cases; ++n)
  {
    auto const u = random_nodes(s.grid, s.bc, rng);
    auto const v = random_nodes(s.grid, s.bc, rng);
    std::string const label = "case " + std::to_string(n);

    auto const sw = check_norm_sandwich(u, s.field, s.stats);
    sandwich.record(sw.lower, sw.mid * (1 + 1e-9), label + " lower");
    sandwich.record(sw.mid, sw.upper * (1 + 1e-9), label + " upper");

    auto const st = rayleigh(u, s.field);
    euler_K.record(std::abs(pairing_K_prime(u, u, s.field) - st.K), 1e-9 * st.K, label);
    euler_k.record(std::abs(pairing_k_prime(u, u, s.field) - st.k), 1e-9 * st.k, label);
    duality.record(std::abs(pairing_k_prime(u, v, s.field)), luxemburg_norm(v, s.field) + 1e-9,
                   label);

    double const delta = 0.1 + 0.8 * uni(rng);
    auto const h = homothety_transport(u, delta, pm, pp);
    homothety.record(std::abs(h.observed_plus_minus() / h.expected_plus_minus - 1.0), 1e-8, label);
    homothety.record(std::abs(h.observed_minus_plus() / h.expected_minus_plus - 1.0), 1e-8, label);

    auto unit = [pm](GridFunction const &w) {
      return w.scaled(1.0 / lp_norm(w, pm, Weighting::weighted));
    };
    double const t = static_cast<double>(n % 99 + 1) / 100.0;
    auto const jr = join_normalized(unit(random_nodes(g1, Boundary::dirichlet_zero, rng)),
                                    unit(random_nodes(g2, Boundary::dirichlet_zero, rng)), t, pp, pm);
    join.record(jr.K_hat, std::max(jr.K_hat_1, jr.K_hat_2) * jr.mix + 1e-9, label);
  }
  for (int k = 1; k <= 99; ++k)
  {
    double const t = k / 100.0;
    mix.record(mix_factor(t, pp, pm), 1.0, "t = " + format_number(t));
    mix.record(mix_factor_monotonicity(t, {pm, 0.5 * (pm + pp), pp, 2.0 * pp}) ? 0.0 : 1.0, 0.0,
               "nonincreasing in p at t = " + format_number(t));
  }

  Report r;
  r.table.columns = {"check", "cases", "worst_margin", "passed"};
  std::string first_failure;
  for (auto const *ch : {&sandwich, &euler_K, &euler_k, &duality, &homothety, &join, &mix})
  {
    r.table.rows.push_back({ch->name, std::to_string(ch->cases), format_number(ch->worst),
                            ch->passed() ? "true" : "false"});
    r.summary[ch->name] = ch->passed();
    if (first_failure.empty())
      first_failure = ch->failure;
  }
  r.summary["stats"] = stats_json(s.stats);
  if (!first_failure.empty())
    throw InvariantViolation(first_failure);
  return r;
}

Report run_lambda_star(ExperimentConfig const &c, Setup const &s)
{
  auto t = geometric_grid(c.t_min, c.t_max, c.t_count);
  std::reverse(t.begin(), t.end());
  BumpGeometry const bump{{c.bump_x, c.bump_y}, c.bump_plateau, c.bump_ramp};
  ExplorerResult res = [&] {
    try
    {
      return bump_family_explorer(s.field, bump, t);
    }
    catch (std::invalid_argument const &e)
    {
      throw ConfigError(e.what());
    }
  }();

  Report r;
  r.table.columns = {"t", "quotient"};
  for (auto const &q : res.samples)
  {
    if (!(q.quotient >= 0.0) || !std::isfinite(q.quotient))
      throw InvariantViolation("quotient " + format_number(q.quotient) + " is not finite and >= 0");
    r.table.rows.push_back({format_number(q.t), format_number(q.quotient)});
  }
  r.summary["plateau_p_min"] = res.plateau_p_min;
  r.summary["ramp_p_min"] = res.ramp_p_min;
  r.summary["ramp_excess"] = res.ramp_excess();
  r.summary["plateau_contains_min"] = res.plateau_contains_min;
  r.summary["decreasing_below_tenth"] = res.decreasing_below_tenth;
  r.summary["final_over_initial"] = res.samples.back().quotient / res.samples.front().quotient;
  return r;
}

} // namespace

int run(Command command, ExperimentConfig const &config, std::ostream &out, std::ostream &err)
{
  try
  {
    validate(config);
    Setup const s = make_setup(config);
    Report r;
    switch (command)
    {
    case Command::norm: r = run_norm(config, s); break;
    case Command::eig: r = run_eig(config, s); break;
    case Command::spectrum: r = run_spectrum(config, s); break;
    case Command::count: r = run_count(config, s); break;
    case Command::verify: r = run_verify(config, s); break;
    case Command::lambda_star: r = run_lambda_star(config, s); break;
    }
    emit(command, config, r, out, err);
    return 0;
  }
  catch (InvariantViolation const &e)
  {
    err << "invariant violated: " << e.what() << "\n";
    return 2;
  }
  catch (BoundsUnavailable const &e)
  {
    err << e.what() << "\n";
    return 1;
  }
  catch (std::exception const &e)
  {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace pxlap
