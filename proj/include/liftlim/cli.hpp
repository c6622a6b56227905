#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liftlim/spec_format.hpp"

namespace liftlim {

enum class ReportFormat { Text, Structured };

inline constexpr std::size_t kDefaultHorizon = 16;
inline constexpr const char* kReportSchema = "liftlim-report/1";

struct CommandOptions {
  std::size_t horizon = kDefaultHorizon;
  std::optional<std::string> word;     // pi1: one word; thread-from: comma-separated generators
  const SpecDocument* target = nullptr;  // meet, lift
  std::optional<std::string> indices;  // restrict
  ReportFormat format = ReportFormat::Text;
  bool require_certified = false;
};

/// Exit codes: 0 verdict, 1 unsupported request, 2 parse/reference/usage error,
/// 3 coherence violation, 4 budget exceeded, 5 verdict not certified under --require-certified.
struct CommandOutcome {
  int exit_code = 0;
  std::string report;       // stdout
  std::string diagnostics;  // stderr
};

const std::vector<std::string>& command_names();

CommandOutcome run_command(const SpecDocument& doc, const std::string& command, const CommandOptions& options);

/// --horizon, else the spec file's horizon, else LIFTLIM_DEFAULT_HORIZON, else 16.
/// Throws Error on a malformed value.
std::size_t resolve_horizon(std::optional<std::size_t> flag, const SpecDocument& doc, const char* env_value);

/// Exit code for an exception escaping parsing or analysis.
int exit_code_for(const std::exception& e);

}  // namespace liftlim

#include <iosfwd>

namespace liftlim {

/// The whole `liftlim` program: argument parsing, spec loading, dispatch. Returns the exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace liftlim
