#include <pxlap/harness.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <utility>

int main(int argc, char **argv)
{
  using namespace pxlap;

  CLI::App app{"pxlap: p(x)-Laplacian numerical laboratory"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t nodes = 0;
  std::string out_dir;
  std::string format;
  std::vector<std::string> sets;
  bool show_config = false;

  app.add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
  auto *seed_opt = app.add_option("--seed", seed, "random seed");
  auto *nodes_opt = app.add_option("--nodes", nodes, "grid nodes per axis (>= 17)");
  app.add_option("--out", out_dir, "directory for report files (default: stdout)");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--set", sets, "override a config key: key=value (repeatable)");
  app.add_flag("--show-config", show_config, "print the effective configuration and exit");

  std::pair<char const *, char const *> const commands[] = {
      {"norm", "Luxemburg norm and modular of `function`"},
      {"eig", "first eigenpair of the Rayleigh quotient"},
      {"spectrum", "eigenvalue list from the oracle or nodal gluing"},
      {"count", "counting function against the two-sided bounds"},
      {"verify", "randomized checks of the norm and join inequalities"},
      {"lambda-star", "modular quotient along a shrinking bump family"},
  };
  for (auto [name, help] : commands)
    app.add_subcommand(name, help)->fallthrough();

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  ExperimentConfig config;
  try
  {
    if (!config_path.empty())
      load_config_file(config, config_path);
    for (auto const &kv : sets)
    {
      auto const eq = kv.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + kv + "'");
      set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (*seed_opt)
      config.seed = seed;
    if (*nodes_opt)
      config.nodes = nodes;
    if (!out_dir.empty())
      config.out = out_dir;
    if (!format.empty())
      set_config_value(config, "format", format);
  }
  catch (ConfigError const &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (show_config)
  {
    std::cout << config_to_text(config);
    return 0;
  }
  auto const subs = app.get_subcommands();
  if (subs.empty())
  {
    std::cerr << app.help();
    return 1;
  }
  return run(parse_command(subs.front()->get_name()), config, std::cout, std::cerr);
}
