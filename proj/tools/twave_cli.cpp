#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "twave/commands.hpp"
#include "twave/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stabilized fixed-point solvers for solitary-wave profiles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string recipe;
  std::string out;
  bool list_recipes = false;

  for (const char* name : {"solve", "spectrum", "continue", "orbital"}) {
    CLI::App* sub = app.add_subcommand(name);
    auto* config_opt = sub->add_option("--config", config_path, "JSON run configuration");
    auto* recipe_opt = sub->add_option("--recipe", recipe, "built-in recipe name");
    config_opt->excludes(recipe_opt);
    sub->add_option("--out", out, "output directory (default: the configured one)");
  }
  app.add_flag("--list-recipes", list_recipes, "print the built-in recipe names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (list_recipes) {
      for (const auto& [name, text] : twave::builtin_recipes()) std::cout << name << '\n';
      return twave::kExitSuccess;
    }
    app.exit(e);
    return twave::kExitConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto load = [&]() -> twave::RunConfig {
    if (!config_path.empty()) return twave::load_run_config(config_path);
    if (!recipe.empty()) return twave::recipe_config(recipe);
    throw twave::ConfigError("one of --config or --recipe is required");
  };
  return twave::run_command(command, load, out, std::cout, std::cerr);
}
