#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "natmodes/commands.hpp"
#include "natmodes/csv.hpp"

using namespace natmodes;

int main(int argc, char** argv) {
  CLI::App app{"Natural-mode frequencies of layered media"};
  app.set_version_flag("--version", std::string("natmodes ") + tool_version());
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "contour jitter seed (overrides the config)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    const CommandOutcome outcome = run_command(command, cfg, out_dir);
    for (const auto& path : outcome.written) std::printf("wrote %s\n", path.string().c_str());
    if (!outcome.message.empty()) std::fprintf(stderr, "%s\n", outcome.message.c_str());
    return outcome.exit_code;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}
