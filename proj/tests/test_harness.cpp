#include <doctest.h>

#include <pxlap/harness.hpp>
#include <pxlap/oracle.hpp>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace pxlap;

namespace
{

struct Outcome
{
  int code;
  std::string out;
  std::string err;
};

Outcome run_with(Command command, ExperimentConfig const &c)
{
  std::ostringstream out, err;
  int const code = run(command, c, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(std::string const &text)
{
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    out.push_back(line);
  return out;
}

std::string slurp(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(std::string const &name)
{
  auto const dir = std::filesystem::temp_directory_path() / ("pxlap_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

} // namespace

TEST_CASE("config text")
{
  ExperimentConfig c;
  parse_config_text(c, "# comment\n\nnodes = 65   # trailing\n  exponent = 1.5 + x\n"
                       "domain=box 0 1 0 2\nseed = 18446744073709551615\nformat = json\n");
  CHECK(c.nodes == 65);
  CHECK(c.exponent == "1.5 + x");
  CHECK(c.domain == "box 0 1 0 2");
  CHECK(c.seed == 18446744073709551615ull);
  CHECK(c.format == OutputFormat::json);

  CHECK_THROWS_AS(parse_config_text(c, "nodes 65\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(c, "colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(c, "nodes = 6x5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(c, "tol = \n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(c, "format = xml\n"), ConfigError);
  CHECK_THROWS_AS(load_config_file(c, "/nonexistent/pxlap.cfg"), ConfigError);
}

TEST_CASE("printed config reads back")
{
  ExperimentConfig c;
  c.tol = 3.3e-7;
  c.lambda_max = 1234.5;
  c.exponent = "2 + sin(pi*x)/3";
  c.seed = 77;
  auto const text = config_to_text(c);
  CHECK(text.find("tol = 3.3e-07\n") != std::string::npos);
  ExperimentConfig d;
  parse_config_text(d, text);
  CHECK(config_to_text(d) == text);
  CHECK(d.tol == c.tol);
  CHECK(d.seed == 77);
}

TEST_CASE("config validation")
{
  ExperimentConfig c;
  CHECK_NOTHROW(validate(c));
  auto bad = [](auto edit) {
    ExperimentConfig c;
    edit(c);
    return c;
  };
  CHECK_THROWS_AS(validate(bad([](auto &c) { c.nodes = 16; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto &c) { c.tol = 0; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto &c) { c.exponent_file = "/nonexistent.csv"; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto &c) { c.domain = "disk 0 0 1"; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto &c) { c.domain = "interval 1 0"; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto &c) { c.boundary = "robin"; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto &c) { c.lambda_min = 0; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto &c) { c.t_count = 0; })), ConfigError);
}

TEST_CASE("commands and names")
{
  for (auto cmd : {Command::norm, Command::eig, Command::spectrum, Command::count, Command::verify,
                   Command::lambda_star})
    CHECK(parse_command(to_string(cmd)) == cmd);
  CHECK(std::string(to_string(Command::lambda_star)) == "lambda-star");
  CHECK_THROWS_AS(parse_command("solve"), ConfigError);
}

TEST_CASE("csv and number formatting")
{
  for (double x : {0.1, 1.0 / 3, 1e-300, 6.02214076e23, -2.5})
    CHECK(std::stod(format_number(x)) == x);
  CHECK(format_number(10) == "10");
  Table t{{"a", "b"}, {{"1", "2"}, {"3", "4"}}};
  CHECK(to_csv(t) == "a,b\n1,2\n3,4\n");

  auto const sp = exact_spectrum_constant_p(2, 1, Boundary::dirichlet_zero, 50);
  auto const r = counting_report(sp, exponent_stats(2, 2, 1, 1.0), {10, 20, 40, 80, 120}, 10);
  auto const table = counting_table(r);
  CHECK(table.columns == std::vector<std::string>{"lambda", "N", "lower", "upper", "fitted_exponent"});
  CHECK(table.rows.size() == 5);
  CHECK(table.rows[0][1] == "3");
  auto const j = nlohmann::json::parse(counting_json(r));
  CHECK(j["N"].size() == 5);
  CHECK(j["C1"].get<double>() == doctest::Approx(0.2));
}

TEST_CASE("eig reports the first eigenvalue")
{
  ExperimentConfig c;
  c.format = OutputFormat::json;
  auto const o = run_with(Command::eig, c);
  REQUIRE(o.code == 0);
  auto const j = nlohmann::json::parse(o.out);
  CHECK(j["summary"]["lambda"].get<double>() == doctest::Approx(3.1416).epsilon(1e-4));
  CHECK(j["summary"]["converged"].get<bool>());
  CHECK(j["rows"].size() == 257);
}

TEST_CASE("count reports the growth exponent")
{
  ExperimentConfig c;
  c.lambda_count = 25;
  auto const o = run_with(Command::count, c);
  REQUIRE(o.code == 0);
  auto const rows = lines(o.out);
  REQUIRE(rows.size() == 26);
  CHECK(rows[0] == "lambda,N,lower,upper,fitted_exponent");
  auto const last = rows.back();
  double const slope = std::stod(last.substr(last.rfind(',') + 1));
  CHECK(std::abs(slope - 1) <= 0.05);
}

TEST_CASE("theorem bounds gate")
{
  ExperimentConfig c;
  c.domain = "interval 0 2";
  c.exponent = "1.1 + 4.45*x";
  for (auto cmd : {Command::verify, Command::count})
  {
    auto const o = run_with(cmd, c);
    CHECK(o.code == 1);
    CHECK(o.err.find("theorem bounds unavailable: τ ≥ 1") != std::string::npos);
  }
}

TEST_CASE("usage errors exit with 1")
{
  ExperimentConfig c;
  c.nodes = 9;
  CHECK(run_with(Command::eig, c).code == 1);
  c.nodes = 65;
  c.exponent = "1 - x";
  auto const o = run_with(Command::norm, c);
  CHECK(o.code == 1);
  CHECK(o.err.find("node 0") != std::string::npos);
  c.exponent = "2 +";
  CHECK(run_with(Command::norm, c).code == 1);
  c.exponent = "1.5 + x";
  c.j_max = 20;
  CHECK(run_with(Command::spectrum, c).code == 1);
  c.j_max = 4;
  c.lambda_max = 1000;
  CHECK(run_with(Command::count, c).code == 1);
  c.bump_plateau = 0.6;
  CHECK(run_with(Command::lambda_star, c).code == 1);
}

TEST_CASE("verify, norm, spectrum and lambda-star succeed on a variable exponent")
{
  ExperimentConfig c;
  c.exponent = "1.5 + x";
  c.nodes = 97;
  c.verify_cases = 30;
  auto const v = run_with(Command::verify, c);
  CHECK(v.code == 0);
  CHECK(lines(v.out).size() == 8);
  CHECK(v.out.find("false") == std::string::npos);

  CHECK(run_with(Command::norm, c).code == 0);

  c.j_max = 3;
  auto const s = run_with(Command::spectrum, c);
  CHECK(s.code == 0);
  CHECK(lines(s.out).size() == 4);
  CHECK(s.out.find("nodal-upper") != std::string::npos);

  c.exponent = "2 + 3*abs(x - 0.5)";
  c.nodes = 1001;
  c.t_count = 6;
  auto const l = run_with(Command::lambda_star, c);
  CHECK(l.code == 0);
  CHECK(lines(l.out).size() == 7);
  auto value = [](std::string const &row) { return std::stod(row.substr(row.find(',') + 1)); };
  CHECK(value(lines(l.out)[6]) / value(lines(l.out)[1]) < 1e-2);
}

TEST_CASE("runs are reproducible byte for byte")
{
  for (auto format : {OutputFormat::csv, OutputFormat::json})
    for (auto cmd : {Command::eig, Command::verify, Command::count})
    {
      ExperimentConfig c;
      c.exponent = "1.5 + x";
      c.nodes = 97;
      c.verify_cases = 20;
      c.j_max = 10;
      c.lambda_min = 4;
      c.lambda_max = 30;
      c.seed = 5;
      c.format = format;
      auto const a = scratch("a"), b = scratch("b");
      c.out = a.string();
      REQUIRE(run_with(cmd, c).code == 0);
      c.out = b.string();
      REQUIRE(run_with(cmd, c).code == 0);
      std::string const name = std::string(to_string(cmd)) + (format == OutputFormat::csv ? ".csv" : ".json");
      CHECK(slurp(a / name) == slurp(b / name));
      CHECK(!slurp(a / name).empty());
      std::filesystem::remove_all(a);
      std::filesystem::remove_all(b);
    }
}
