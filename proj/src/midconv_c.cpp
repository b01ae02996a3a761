#include "midconv.h"

#include <new>
#include <string>

#include "midconv/commands.hpp"

struct mc_problem {
  midconv::json document;
};

struct mc_result {
  mc_status status;
  std::string json;
  std::string text;
};

namespace {

thread_local std::string last_error;

void set_error(std::string message) { last_error = std::move(message); }

mc_status to_status(midconv::Outcome outcome) {
  switch (outcome) {
    case midconv::Outcome::Success: return MC_OK;
    case midconv::Outcome::InputError: return MC_INPUT_ERROR;
    case midconv::Outcome::Negative: return MC_NEGATIVE;
    case midconv::Outcome::InternalError: return MC_INTERNAL_ERROR;
  }
  return MC_INTERNAL_ERROR;
}

constexpr midconv::Verb verbs[] = {midconv::Verb::Defect,   midconv::Verb::Transform, midconv::Verb::Run,
                                   midconv::Verb::Classify, midconv::Verb::Verify,    midconv::Verb::Higgs};

}  // namespace

extern "C" {

void mc_options_init(mc_options* options) {
  if (!options) return;
  options->has_seed = 0;
  options->seed = 0;
  options->tol = 0.0;
  options->max_steps = 0;
  options->beta_v = MC_BETA_V_DOCUMENT;
}

mc_status mc_problem_parse(const char* json, size_t length, mc_problem** out) {
  if (!out) {
    set_error("output pointer is NULL");
    return MC_INPUT_ERROR;
  }
  *out = nullptr;
  if (!json) {
    set_error("input text is NULL");
    return MC_INPUT_ERROR;
  }
  try {
    auto doc = midconv::json::parse(json, json + length);
    if (!doc.is_object()) {
      set_error("ParseError: at /: expected a JSON object");
      return MC_INPUT_ERROR;
    }
    *out = new mc_problem{std::move(doc)};
    return MC_OK;
  } catch (const midconv::json::parse_error& e) {
    set_error(std::string("ParseError: ") + e.what());
    return MC_INPUT_ERROR;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return MC_INTERNAL_ERROR;
  }
}

void mc_problem_destroy(mc_problem* problem) { delete problem; }

mc_status mc_verb_from_name(const char* name, mc_verb* out) {
  if (!name || !out) {
    set_error("NULL argument");
    return MC_INPUT_ERROR;
  }
  for (int i = 0; i < 6; ++i) {
    if (midconv::verb_name(verbs[i]) == name) {
      *out = static_cast<mc_verb>(i);
      return MC_OK;
    }
  }
  set_error(std::string("unknown command '") + name + "'");
  return MC_INPUT_ERROR;
}

const char* mc_verb_name(mc_verb verb) {
  const int i = static_cast<int>(verb);
  if (i < 0 || i >= 6) return "unknown";
  return midconv::verb_name(verbs[i]).data();
}

mc_status mc_run(const mc_problem* problem, mc_verb verb, const mc_options* options, mc_result** out) {
  if (!out) {
    set_error("output pointer is NULL");
    return MC_INPUT_ERROR;
  }
  *out = nullptr;
  if (!problem) {
    set_error("problem is NULL");
    return MC_INPUT_ERROR;
  }
  const int vi = static_cast<int>(verb);
  if (vi < 0 || vi >= 6) {
    set_error("unknown command");
    return MC_INPUT_ERROR;
  }
  midconv::CommandOptions opts;
  if (options) {
    if (options->has_seed) opts.seed = options->seed;
    if (options->tol > 0) opts.tol = options->tol;
    if (options->max_steps > 0) opts.max_steps = options->max_steps;
    switch (options->beta_v) {
      case MC_BETA_V_SAME: opts.beta_v = midconv::BetaVPolicy::SameAsH; break;
      case MC_BETA_V_FRESH: opts.beta_v = midconv::BetaVPolicy::Fresh; break;
      case MC_BETA_V_EXPLICIT: opts.beta_v = midconv::BetaVPolicy::Explicit; break;
      default: break;
    }
  }
  try {
    midconv::CommandResult res = midconv::run_command(verbs[vi], problem->document, opts);
    auto* result = new mc_result{to_status(res.outcome), res.document.dump(2), res.text};
    if (result->status == MC_INPUT_ERROR || result->status == MC_INTERNAL_ERROR) {
      set_error(res.text.empty() ? result->json : res.text.substr(0, res.text.find_last_not_of('\n') + 1));
    }
    *out = result;
    return result->status;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return MC_INTERNAL_ERROR;
  }
}

mc_status mc_result_status(const mc_result* result) { return result ? result->status : MC_INPUT_ERROR; }

const char* mc_result_json(const mc_result* result) { return result ? result->json.c_str() : nullptr; }

const char* mc_result_text(const mc_result* result) { return result ? result->text.c_str() : nullptr; }

void mc_result_destroy(mc_result* result) { delete result; }

const char* mc_last_error(void) { return last_error.c_str(); }

const char* mc_version(void) { return "1.0.0"; }

}  // extern "C"
