#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "holab/commands.hpp"
#include "holab/report.hpp"
#include "holab/scenario.hpp"

namespace {

struct SubArgs {
  std::string scenario_path;
  std::string out_path;
  holab::CommandOptions opts;
};

void add_common(CLI::App* sub, SubArgs& args, bool with_object) {
  sub->add_option("scenario", args.scenario_path, "scenario JSON file")
      ->required();
  if (with_object) {
    sub->add_option("--object", args.opts.object,
                    "path or simplex id (default: first)");
    sub->add_option("--method", args.opts.method,
                    "evaluation method for the object");
  }
  sub->add_option("--out", args.out_path, "also write the report to a file");
  sub->add_flag("--timings", args.opts.timings,
                "include wall-clock phase timings in the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical checks for graded local systems and their gluing data"};
  app.require_subcommand(1);

  SubArgs validate_args, holonomy_args, compare_args, check_args;
  CLI::App* validate =
      app.add_subcommand("validate", "flatness, cocycle and curvature checks");
  add_common(validate, validate_args, false);
  CLI::App* holonomy =
      app.add_subcommand("holonomy", "transport along one path or simplex");
  add_common(holonomy, holonomy_args, true);
  CLI::App* compare =
      app.add_subcommand("compare", "cross-method surface transport agreement");
  add_common(compare, compare_args, true);
  CLI::App* check =
      app.add_subcommand("check", "randomized algebraic identity suite");
  add_common(check, check_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    // CLI11 returns 0 for --help/--version; anything else is a usage error.
    return code == 0 ? 0 : 2;
  }

  const SubArgs* args = nullptr;
  holab::Report (*run)(const holab::Scenario&, const holab::CommandOptions&) =
      nullptr;
  if (validate->parsed()) {
    args = &validate_args;
    run = holab::cmd_validate;
  } else if (holonomy->parsed()) {
    args = &holonomy_args;
    run = holab::cmd_holonomy;
  } else if (compare->parsed()) {
    args = &compare_args;
    run = holab::cmd_compare;
  } else {
    args = &check_args;
    run = holab::cmd_check;
  }

  try {
    holab::Scenario sc = holab::load_scenario_file(args->scenario_path);
    holab::Report report = run(sc, args->opts);
    std::string text = holab::report_to_text(report);
    std::fputs(text.c_str(), stdout);
    if (!args->out_path.empty()) holab::write_report_file(report, args->out_path);
    return report.pass() ? 0 : 1;
  } catch (const holab::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const holab::StructuralError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const holab::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const holab::PreconditionError& e) {
    std::fprintf(stderr, "check failed: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
