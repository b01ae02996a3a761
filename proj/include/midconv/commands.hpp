#pragma once

// Command layer shared by the C API and the command-line tool.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "midconv/error.hpp"
#include "midconv/serialization.hpp"

namespace midconv {

enum class Verb { Defect, Transform, Run, Classify, Verify, Higgs };

std::string_view verb_name(Verb verb);
Verb parse_verb(std::string_view name);

struct CommandOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> max_steps;
  std::optional<BetaVPolicy> beta_v;
};

enum class Outcome { Success = 0, InputError = 1, Negative = 2, InternalError = 3 };

struct CommandResult {
  Outcome outcome = Outcome::Success;
  json document;
  std::string text;
};

json error_document(ErrorCode code, const std::string& message);

/// Never throws; failures are reported through the outcome and an error document.
CommandResult run_command(Verb verb, const json& document, const CommandOptions& options);

}  // namespace midconv
