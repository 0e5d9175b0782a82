#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ctrack/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Point tracking by marker insertion and video regeneration"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  for (const char* name : {"track", "evaluate", "synthesize", "diagnose"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out, "output directory (overrides the config's output)");
  }
  app.get_subcommand("track")->description("regenerate each query video with a marker and track it");
  app.get_subcommand("evaluate")->description("score predicted tracks against ground truth");
  app.get_subcommand("synthesize")->description("write a synthetic suite with exact ground truth");
  app.get_subcommand("diagnose")->description("sampler moment checks and guidance sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ctrack::kExitBadInput;
  }

  ctrack::CommandOptions options;
  options.config = config;
  if (!out.empty()) options.out = out;
  return ctrack::run_command(app.get_subcommands().front()->get_name(), options, std::cout, std::cerr);
}
