#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "midconv/error.hpp"
#include "midconv/higgs.hpp"
#include "midconv/homology.hpp"
#include "midconv/moduli.hpp"
#include "midconv/serialization.hpp"
#include "random_data.hpp"

using namespace midconv;

namespace {

std::string parse_failure(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("scalars") {
  auto x = parse_scalar(json::parse(R"({"const": "1/2", "exps": {"s": "-3/4"}})"), "");
  CHECK(x == ScalarExpr(Rational(1, 2), {{"s", Rational(-3, 4)}}));
  CHECK(parse_scalar(to_json(x), "") == x);
  CHECK(parse_scalar(json("2/3"), "") == ScalarExpr(Rational(2, 3)));
  CHECK(parse_scalar(json(5), "") == ScalarExpr(Rational(5)));
  CHECK(parse_failure([] { parse_scalar(json(0.5), "/v"); }).find("/v") != std::string::npos);
  CHECK_THROWS_AS(parse_scalar(json::parse(R"({"const": "1", "extra": 1})"), ""), Error);
}

TEST_CASE("error messages carry the position") {
  auto msg = parse_failure([] {
    parse_problem(json::parse(R"({"mode": "additive", "classes": [[{"value": "1/2", "mult": "x"}]]})"));
  });
  CHECK(msg.find("/classes/0/0/mult") != std::string::npos);
  auto undeclared = parse_failure([] {
    parse_problem(json::parse(
        R"({"generators": ["a"], "classes": [[{"value": {"exps": {"b": "1"}}, "mult": 1}],
            [{"value": "0", "mult": 1}], [{"value": "0", "mult": 1}]]})"));
  });
  CHECK(undeclared.find("b") != std::string::npos);
}

TEST_CASE("vector documents round trip") {
  fixtures::Primed ref{GroupMode::Multiplicative, false};
  auto v = ref.vector();
  CHECK(parse_vector_document(vector_document(v)) == v);
}

TEST_CASE("transform and trace documents round trip") {
  std::mt19937_64 rng(5);
  testdata::NameSource names("e");
  for (int trial = 0; trial < 20; ++trial) {
    GroupMode mode = trial % 2 ? GroupMode::Additive : GroupMode::Multiplicative;
    auto v = testdata::random_generic_vector(mode, testdata::uniform(rng, 1, 4), 3 + trial % 3, rng, names);
    auto beta = testdata::random_convoluter(v, rng, names);
    CHECK(parse_convoluter(to_json(beta)) == beta);
    auto kr = kappa(beta, v, {.check_conventions = false});
    json doc = to_json(kr, beta, v.rank());
    auto back = parse_kappa(doc);
    CHECK(back.beta == beta);
    CHECK(back.result.divisors == kr.divisors);
    CHECK(back.result.conventions == kr.conventions);
    CHECK(back.result.certificate == kr.certificate);
    CHECK(to_json(back.result, back.beta, back.input_rank) == doc);

    if (mode == GroupMode::Multiplicative) {
      auto trace = run_algorithm(v);
      json tj = to_json(trace);
      CHECK(to_json(parse_trace(tj)) == tj);
    }
  }
}

TEST_CASE("reports round trip") {
  auto g = [](const char* s) { return GroupElement::generator(GroupMode::Multiplicative, s); };
  using GM = GroupMode;
  MonodromyVector v({EigDivisor(GM::Multiplicative, {{g("a"), 1}, {g("b"), 1}, {g("c"), 1}}),
                     EigDivisor(GM::Multiplicative, {{g("d"), 1}, {g("e"), 1}, {g("f"), 1}}),
                     EigDivisor(GM::Multiplicative, {{g("h"), 1}, {g("i"), 1}, {g("j"), 1}})});
  auto rep = dimension_report(v);
  CHECK(parse_dimension_report(to_json(rep)) == rep);
  Dim2Match m{Dim2Family::TriDDD, 1};
  CHECK(parse_dim2_match(to_json(m)) == m);
  EmptinessCertificate cert{2, 1, 3, -1};
  CHECK(parse_certificate(to_json(cert)) == cert);
}

TEST_CASE("higgs documents round trip") {
  auto w = [](const char* s) { return GroupElement::constant(GroupMode::Circle, parse_rational(s)); };
  EigDivisor g(GroupMode::Circle, {{w("1/4"), 1}, {w("3/4"), 1}});
  auto data = construct(MonodromyVector({g, g, g, g, g}));
  json j = to_json(data);
  auto back = parse_higgs(j);
  CHECK(back.arrangements == data.arrangements);
  CHECK(back.k == data.k);
  CHECK(back.z == data.z);
  CHECK(back.tau == data.tau);
  CHECK(back.method == data.method);
  CHECK(j["degree_check"] == "0");
  CHECK(parse_arrangement(to_json(data.arrangements[0])) == data.arrangements[0]);
}

TEST_CASE("numeric documents round trip") {
  NumericInstance inst;
  inst.M = {Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(2, 2)};
  inst.M[0](0, 1) = cd(0.25, -1.5);
  inst.b = {cd(0, 1), cd(-1, 0), cd(0, 1)};
  inst.w = inst.b;
  inst.chi = cd(-1, 0);
  auto back = parse_instance(to_json(inst));
  CHECK(back.M.size() == 3);
  CHECK((back.M[0] - inst.M[0]).norm() == 0.0);
  CHECK(back.b == inst.b);
  CHECK(back.chi == inst.chi);
  CHECK(to_json(back) == to_json(inst));

  VerificationReport rep;
  rep.n = 3;
  rep.r = 2;
  rep.raw_points.push_back({{cd(1, 0)}, {cd(1, 1e-12)}, 1e-12});
  rep.symbolic_defect = -1;
  rep.passed = true;
  CHECK(to_json(parse_verification(to_json(rep))) == to_json(rep));
}

TEST_CASE("problem documents") {
  auto doc = parse_problem(json::parse(R"({
    "mode": "multiplicative",
    "classes": [[{"value": "1/2", "mult": 1}, {"value": "0", "mult": 1}],
                [{"value": "1/3", "mult": 2}],
                [{"value": "1/5", "mult": 1}, {"value": "3/5", "mult": 1}]],
    "convoluter": {"h": "max-multiplicity", "v": "fresh"},
    "seed": 4, "tol": 1e-8
  })"));
  REQUIRE(doc.vector);
  CHECK(doc.seed == 4u);
  CHECK(doc.tol == 1e-8);
  auto beta = resolve_convoluter(doc, *doc.vector, std::nullopt);
  CHECK(beta.relations_hold());
  CHECK(beta.v != beta.h);
  auto same = resolve_convoluter(doc, *doc.vector, BetaVPolicy::SameAsH);
  CHECK(same.v == same.h);
  CHECK_THROWS_AS(resolve_convoluter(doc, *doc.vector, BetaVPolicy::Explicit), Error);
  CHECK_THROWS_AS(parse_problem(json::parse(R"({"points": 2, "classes": [[{"value": "0", "mult": 1}],
      [{"value": "0", "mult": 1}], [{"value": "0", "mult": 1}]]})")),
                  Error);
}
