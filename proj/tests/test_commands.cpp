#include <fstream>

#include "doctest.h"
#include "midconv/commands.hpp"

using namespace midconv;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(MIDCONV_TEST_DATA) + "/" + name);
  return json::parse(in);
}

}  // namespace

TEST_CASE("verbs") {
  for (auto v : {Verb::Defect, Verb::Transform, Verb::Run, Verb::Classify, Verb::Verify, Verb::Higgs}) {
    CHECK(parse_verb(verb_name(v)) == v);
  }
  CHECK_THROWS_AS(parse_verb("frobnicate"), Error);
}

TEST_CASE("transform primed document") {
  auto res = run_command(Verb::Transform, load("primed.json"), {});
  CHECK(res.outcome == Outcome::Success);
  CHECK(res.document["transform"]["rank"] == 3);
  CHECK(res.document["classes"].size() == 3);
  CHECK(res.text.rfind("rank 2 -> 3", 0) == 0);
}

TEST_CASE("outcomes") {
  CHECK(run_command(Verb::Classify, load("tri_ddd.json"), {}).document["family"] == "Tri_ddd_x3");
  auto neg = run_command(Verb::Classify, load("negative_defect.json"), {});
  CHECK(neg.outcome == Outcome::Negative);
  CHECK(neg.document["error"]["code"] == "PreconditionViolation");
  CHECK(neg.document.contains("report"));

  CHECK(run_command(Verb::Transform, load("convention_failure.json"), {}).outcome == Outcome::Negative);
  CHECK(run_command(Verb::Transform, load("noneffective.json"), {}).outcome == Outcome::Negative);
  CHECK(run_command(Verb::Higgs, load("higgs_dim2.json"), {}).outcome == Outcome::Negative);
  CHECK(run_command(Verb::Transform, load("float_value.json"), {}).outcome == Outcome::InputError);
  CHECK(run_command(Verb::Higgs, load("primed.json"), {}).outcome == Outcome::InputError);

  CommandOptions explicit_v;
  explicit_v.beta_v = BetaVPolicy::Explicit;
  CHECK(run_command(Verb::Run, load("hypergeometric.json"), explicit_v).outcome == Outcome::InputError);
  CommandOptions zero_steps;
  zero_steps.max_steps = 0;
  auto stopped = run_command(Verb::Run, load("hypergeometric.json"), zero_steps);
  CHECK(stopped.document["error"]["code"] == "MaxStepsExceeded");
}

TEST_CASE("runs and defects") {
  auto run = run_command(Verb::Run, load("hypergeometric.json"), {});
  CHECK(run.outcome == Outcome::Success);
  CHECK(run.document["status"] == "AllDiagonal");
  CHECK(run.document["steps"].size() == 1);
  CHECK(run.document["final_rank"] == 1);
  auto def = run_command(Verb::Defect, load("primed.json"), {});
  CHECK(def.document["defect"] == 1);
  CHECK(def.document["new_rank"] == 3);
}

TEST_CASE("verification is deterministic") {
  CommandOptions opts;
  opts.seed = 7;
  auto a = run_command(Verb::Verify, load("verify_r3n4.json"), opts);
  auto b = run_command(Verb::Verify, load("verify_r3n4.json"), opts);
  CHECK(a.outcome == Outcome::Success);
  CHECK(a.document.dump() == b.document.dump());
  CHECK(a.document["report"]["passed"] == true);
  auto inst = run_command(Verb::Verify, load("instance_r1.json"), {});
  CHECK(inst.outcome == Outcome::Success);
}

TEST_CASE("higgs command") {
  auto res = run_command(Verb::Higgs, load("higgs_n5.json"), {});
  CHECK(res.outcome == Outcome::Success);
  CHECK(res.document["degree_check"] == "0");
  CHECK(res.document["closed_forms"]["derived_matches"] == true);
}
