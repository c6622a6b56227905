#include <cstdlib>
#include <ostream>

#include "CLI11.hpp"
#include "liftlim/cli.hpp"
#include "liftlim/errors.hpp"

namespace liftlim {

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverse limits of coverings: coherence, classification, fibres, pi1, pi0, deck groups, density, "
               "meets, lifts and cofinal restriction."};
  app.name("liftlim");
  std::string command, specfile, target, report = "text";
  std::optional<std::size_t> horizon, budget;
  CommandOptions options;
  app.add_option("command", command, "analysis to run")->required()->check(CLI::IsMember(command_names()));
  app.add_option("specfile", specfile, "tower specification file")->required();
  app.add_option("--horizon", horizon, "stages to examine before falling back to HorizonLimited");
  app.add_option("--word", options.word, "word for pi1, comma-separated generators for thread-from");
  app.add_option("--target", target, "second spec file for meet and lift");
  app.add_option("--indices", options.indices, "cofinal index list for restrict, e.g. 0,2:3");
  app.add_option("--report", report, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  app.add_flag("--require-certified", options.require_certified, "exit 5 unless the verdict is certified");
  app.add_option("--budget", budget, "coset budget for fp stages");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  options.format = report == "structured" ? ReportFormat::Structured : ReportFormat::Text;

  SpecDocument doc, other;
  try {
    doc = load_spec(specfile, budget);
    if (!target.empty()) {
      other = load_spec(target, budget);
      options.target = &other;
    }
    options.horizon = resolve_horizon(horizon, doc, std::getenv("LIFTLIM_DEFAULT_HORIZON"));
  } catch (const std::exception& e) {
    err << "liftlim: " << e.what() << "\n";
    const int code = exit_code_for(e);
    return code == 1 ? 2 : code;  // unreadable files and bad settings count as usage errors
  }
  const CommandOutcome result = run_command(doc, command, options);
  out << result.report;
  err << result.diagnostics;
  return result.exit_code;
}

}  // namespace liftlim
