#pragma once

// JSON documents. Rationals are written as "p/q" strings; complex numbers in
// numeric instances as [re, im] pairs. Parse errors carry a JSON pointer.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "midconv/higgs.hpp"
#include "midconv/homology.hpp"
#include "midconv/katz.hpp"
#include "midconv/moduli.hpp"

namespace midconv {

using json = nlohmann::ordered_json;

json to_json(const Rational& q);
json to_json(const ScalarExpr& x);
json to_json(const EigDivisor& g);
json to_json(const Convoluter& beta);
json to_json(const ConventionReport& report);
json to_json(const EmptinessCertificate& cert);
json to_json(const DimensionReport& report);
json to_json(const Dim2Match& match);
json to_json(const Arrangement& arr);
json to_json(const HiggsData& data);
json to_json(const NumericInstance& inst);
json to_json(const VerificationReport& report);
json to_json(cd z);

/// Problem document for a vector: mode, points, generators, classes.
json vector_document(const MonodromyVector& v);
json to_json(const KappaResult& result, const Convoluter& beta, long input_rank);
json to_json(const AlgorithmTrace& trace);

Rational parse_rational_json(const json& j, const std::string& path);
ScalarExpr parse_scalar(const json& j, const std::string& path);
GroupElement parse_element(const json& j, GroupMode mode, const std::string& path);
EigDivisor parse_divisor(const json& j, GroupMode mode, const std::string& path);
/// Formal tuple of divisors (effectiveness not required).
std::vector<EigDivisor> parse_classes(const json& j, GroupMode mode, const std::string& path);
MonodromyVector parse_vector_document(const json& j);
Convoluter parse_convoluter(const json& j, const std::string& path = "");
ConventionReport parse_convention_report(const json& j, GroupMode mode, const std::string& path = "");
EmptinessCertificate parse_certificate(const json& j, const std::string& path = "");
DimensionReport parse_dimension_report(const json& j, const std::string& path = "");
Dim2Match parse_dim2_match(const json& j, const std::string& path = "");
Arrangement parse_arrangement(const json& j, const std::string& path = "");
HiggsData parse_higgs(const json& j, const std::string& path = "");
NumericInstance parse_instance(const json& j, const std::string& path = "");
VerificationReport parse_verification(const json& j, const std::string& path = "");
cd parse_complex(const json& j, const std::string& path);

struct ParsedKappa {
  KappaResult result;
  Convoluter beta;
  long input_rank = 0;
};
ParsedKappa parse_kappa(const json& j);
AlgorithmTrace parse_trace(const json& j);

struct ConvoluterSpec {
  /// Empty means: use the max-multiplicity choice.
  std::optional<std::vector<GroupElement>> h;
  std::optional<std::vector<GroupElement>> v;
  BetaVPolicy policy = BetaVPolicy::SameAsH;
};

struct InstanceOptions {
  GenerateOptions::LastPoint last_point = GenerateOptions::LastPoint::Auto;
  bool adopt_last_eigenvalue = false;
};

struct ProblemDocument {
  GroupMode mode = GroupMode::Multiplicative;
  std::vector<std::string> generators;
  std::optional<MonodromyVector> vector;
  std::optional<ConvoluterSpec> convoluter;
  Assignment assignment;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<NumericInstance> instance;
  InstanceOptions instance_options;
};

ProblemDocument parse_problem(const json& j);

/// Builds the convoluter for `v`; an explicit policy requires a v list.
Convoluter resolve_convoluter(const ProblemDocument& doc, const MonodromyVector& v,
                              std::optional<BetaVPolicy> override_policy);

}  // namespace midconv
