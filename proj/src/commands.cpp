#include "midconv/commands.hpp"

#include <sstream>

#include "midconv/error.hpp"

namespace midconv {

std::string_view verb_name(Verb verb) {
  switch (verb) {
    case Verb::Defect: return "defect";
    case Verb::Transform: return "transform";
    case Verb::Run: return "run";
    case Verb::Classify: return "classify";
    case Verb::Verify: return "verify";
    case Verb::Higgs: return "higgs";
  }
  return "unknown";
}

Verb parse_verb(std::string_view name) {
  for (auto v : {Verb::Defect, Verb::Transform, Verb::Run, Verb::Classify, Verb::Verify, Verb::Higgs}) {
    if (verb_name(v) == name) return v;
  }
  throw Error(ErrorCode::ParseError, "unknown command '" + std::string(name) + "'");
}

json error_document(ErrorCode code, const std::string& message) {
  return json{{"error", {{"code", std::string(error_code_name(code))}, {"message", message}}}};
}

namespace {

const MonodromyVector& require_vector(const ProblemDocument& doc) {
  if (!doc.vector) throw Error(ErrorCode::InvalidInput, "at /classes: this command needs local monodromy classes");
  return *doc.vector;
}

std::string describe_vector(const std::vector<EigDivisor>& gs) {
  std::ostringstream out;
  for (std::size_t i = 0; i < gs.size(); ++i) out << "  g" << i + 1 << " = " << gs[i].to_string() << "\n";
  return out.str();
}

CommandResult cmd_defect(const ProblemDocument& doc, const CommandOptions& opts) {
  const MonodromyVector& v = require_vector(doc);
  const Convoluter beta = resolve_convoluter(doc, v, opts.beta_v);
  const long d = defect(beta, v);
  CommandResult res;
  res.document = json{{"command", "defect"},
                      {"rank", v.rank()},
                      {"points", v.points()},
                      {"defect", d},
                      {"max_multiplicity_defect", defect(v)},
                      {"new_rank", v.rank() + d},
                      {"convoluter", to_json(beta)}};
  std::ostringstream text;
  text << "defect " << d << " (rank " << v.rank() << " -> " << v.rank() + d << ")\n";
  res.text = text.str();
  return res;
}

CommandResult cmd_transform(const ProblemDocument& doc, const CommandOptions& opts) {
  const MonodromyVector& v = require_vector(doc);
  const Convoluter beta = resolve_convoluter(doc, v, opts.beta_v);
  KappaResult kr = kappa(beta, v);
  try {
    kr.conventions.one_generic = is_one_generic(v);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SearchBudgetExceeded) throw;
  }
  CommandResult res;
  res.document = to_json(kr, beta, v.rank());
  res.outcome = kr.status == KappaStatus::Effective ? Outcome::Success : Outcome::Negative;
  std::ostringstream text;
  text << "rank " << v.rank() << " -> " << kr.rank << " (defect " << kr.defect << "), "
       << kappa_status_name(kr.status) << "\n"
       << describe_vector(kr.divisors);
  if (kr.certificate) {
    text << "empty: at point " << kr.certificate->point + 1 << ", " << kr.certificate->lhs << " < "
         << kr.certificate->rhs << "\n";
  }
  res.text = text.str();
  return res;
}

CommandResult cmd_run(const ProblemDocument& doc, const CommandOptions& opts) {
  const MonodromyVector& v = require_vector(doc);
  RunOptions ro;
  if (opts.max_steps) ro.max_steps = *opts.max_steps;
  ro.beta_v = opts.beta_v.value_or(doc.convoluter ? doc.convoluter->policy : BetaVPolicy::SameAsH);
  if (ro.beta_v == BetaVPolicy::Explicit) {
    throw Error(ErrorCode::InvalidInput, "the algorithm chooses beta itself; use --beta-v same or fresh");
  }
  const AlgorithmTrace trace = run_algorithm(v, ro);
  CommandResult res;
  res.document = to_json(trace);
  res.outcome = trace.status == TerminalStatus::EmptyNoneffective || trace.status == TerminalStatus::ConventionFailure
                    ? Outcome::Negative
                    : Outcome::Success;
  std::ostringstream text;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    text << "step " << i + 1 << ": rank " << s.input.rank() << " -> " << s.output.rank() << " (defect " << s.defect
         << ")\n";
  }
  text << terminal_status_name(trace.status) << " at rank " << trace.final_vector.rank() << ", defect "
       << trace.final_defect << "\n"
       << describe_vector(trace.final_vector.divisors());
  if (trace.convention_report) text << trace.convention_report->describe_failure() << "\n";
  res.text = text.str();
  return res;
}

CommandResult cmd_classify(const ProblemDocument& doc, const CommandOptions&) {
  const MonodromyVector& v = require_vector(doc);
  const DimensionReport report = dimension_report(v);
  CommandResult res;
  res.document = json{{"report", to_json(report)}, {"family", "none"}, {"d", nullptr}};
  std::ostringstream text;
  text << "naive dimension " << report.naive_dim << ", defect " << report.defect << ", superdefect "
       << report.total_superdefect << "\n";
  try {
    if (auto match = classify_dim2(v)) {
      res.document["family"] = std::string(dim2_family_name(match->family));
      res.document["d"] = match->d;
      text << "family " << dim2_family_name(match->family) << " with d = " << match->d << "\n";
    } else {
      text << "family none\n";
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PreconditionViolation) throw;
    res.document["error"] = error_document(e.code(), e.what())["error"];
    res.outcome = Outcome::Negative;
    text << e.what() << "\n";
  }
  res.text = text.str();
  return res;
}

json assignment_json(const Assignment& a) {
  json out = json::object();
  for (const auto& [name, value] : a) out[name] = value.imag() == 0.0 ? json(value.real()) : to_json(value);
  return out;
}

CommandResult cmd_verify(const ProblemDocument& doc, const CommandOptions& opts) {
  const std::optional<double> tol = opts.tol ? opts.tol : doc.tol;
  CommandResult res;
  VerificationReport report;
  if (doc.instance) {
    NumericInstance inst = *doc.instance;
    if (tol) inst.tol = *tol;
    report = verify_instance(inst);
    res.document = json{{"report", to_json(report)}};
  } else {
    const MonodromyVector& v = require_vector(doc);
    const Convoluter beta = resolve_convoluter(doc, v, opts.beta_v);
    GenerateOptions go;
    go.seed = opts.seed.value_or(doc.seed.value_or(1));
    if (tol) go.tol = *tol;
    go.last_point = doc.instance_options.last_point;
    go.adopt_last_eigenvalue = doc.instance_options.adopt_last_eigenvalue;
    const GeneratedInstance gen = generate_instance(v, beta, doc.assignment, go);
    report = verify_generated(gen);
    json vector_doc = vector_document(gen.vector);
    vector_doc["assignment"] = assignment_json(gen.assignment);
    res.document = json{{"report", to_json(report)},
                        {"seed", go.seed},
                        {"last_point_free", gen.last_point_free},
                        {"vector", vector_doc},
                        {"convoluter", to_json(gen.beta)},
                        {"instance", to_json(gen.instance)}};
  }
  res.outcome = report.passed ? Outcome::Success : Outcome::Negative;
  std::ostringstream text;
  text << (report.passed ? "passed" : "FAILED") << ": dim H1 " << report.raw_dim << "/" << report.expected_raw_dim
       << ", dim MH1 " << report.middle_dim << "/" << report.expected_middle_dim << "\n"
       << "max deviation raw " << report.raw_deviation << ", middle " << report.middle_deviation << ", 2x2 blocks "
       << report.block_deviation << ", det " << report.det_deviation << "\n";
  if (!report.defect_agrees) text << "measured defect differs from the symbolic one\n";
  res.text = text.str();
  return res;
}

CommandResult cmd_higgs(const ProblemDocument& doc, const CommandOptions&) {
  const MonodromyVector& v = require_vector(doc);
  const HiggsData data = construct(v);
  const HiggsVerification check = verify_higgs(data, v);
  const DegreeClosedForms forms = degree_closed_forms(data);
  CommandResult res;
  res.document = to_json(data);
  json checks = json::array();
  for (const auto& c : check.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  res.document["checks"] = checks;
  res.document["closed_forms"] = json{{"direct", rational_to_string(forms.direct)},
                                      {"printed", rational_to_string(forms.printed)},
                                      {"derived", rational_to_string(forms.derived)},
                                      {"printed_matches", forms.printed_matches},
                                      {"derived_matches", forms.derived_matches}};
  const auto lines = sawtooth(data);
  res.document["sawtooth"] = lines;
  res.outcome = check.ok() ? Outcome::Success : Outcome::InternalError;
  std::ostringstream text;
  for (const auto& line : lines) text << line << "\n";
  text << "parabolic degree " << check.degree.get_str() << " (" << data.method << ")\n";
  res.text = text.str();
  return res;
}

}  // namespace

CommandResult run_command(Verb verb, const json& document, const CommandOptions& options) {
  try {
    const ProblemDocument doc = parse_problem(document);
    switch (verb) {
      case Verb::Defect: return cmd_defect(doc, options);
      case Verb::Transform: return cmd_transform(doc, options);
      case Verb::Run: return cmd_run(doc, options);
      case Verb::Classify: return cmd_classify(doc, options);
      case Verb::Verify: return cmd_verify(doc, options);
      case Verb::Higgs: return cmd_higgs(doc, options);
    }
    throw Error(ErrorCode::InternalError, "unhandled command");
  } catch (const Error& e) {
    CommandResult res;
    res.document = error_document(e.code(), e.what());
    res.text = std::string(error_code_name(e.code())) + ": " + e.what() + "\n";
    if (is_principled_negative(e.code())) {
      res.outcome = Outcome::Negative;
    } else if (e.code() == ErrorCode::InternalError) {
      res.outcome = Outcome::InternalError;
    } else {
      res.outcome = Outcome::InputError;
    }
    return res;
  } catch (const std::exception& e) {
    CommandResult res;
    res.document = error_document(ErrorCode::InternalError, e.what());
    res.text = std::string("InternalError: ") + e.what() + "\n";
    res.outcome = Outcome::InternalError;
    return res;
  }
}

}  // namespace midconv
