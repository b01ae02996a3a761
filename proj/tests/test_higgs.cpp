#include <algorithm>

#include "doctest.h"
#include "midconv/error.hpp"
#include "midconv/higgs.hpp"

using namespace midconv;

namespace {

const GroupMode C = GroupMode::Circle;

EigDivisor circle(std::initializer_list<std::pair<const char*, long>> entries) {
  EigDivisor g(C);
  for (const auto& [w, m] : entries) g.add(GroupElement::constant(C, parse_rational(w)), m);
  return g;
}

std::vector<Rational> q(std::initializer_list<const char*> xs) {
  std::vector<Rational> out;
  for (const char* x : xs) out.push_back(parse_rational(x));
  return out;
}

ErrorCode construct_error(const MonodromyVector& v) {
  try {
    construct(v);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("construction unexpectedly succeeded");
  return ErrorCode::InternalError;
}

MonodromyVector zero_defect_example() {
  return MonodromyVector({circle({{"0", 2}, {"1/2", 1}}), circle({{"1/4", 2}, {"0", 1}}),
                          circle({{"0", 1}, {"1/3", 1}, {"2/3", 1}}), circle({{"1/6", 1}, {"1/2", 1}, {"1/3", 1}})});
}

}  // namespace

TEST_CASE("good arrangements") {
  auto a = good_arrangement(circle({{"1/4", 2}, {"3/4", 1}}));
  CHECK(a.weights == q({"1/4", "3/4", "1/4"}));
  CHECK(a.descents() == std::vector<long>{2, 3});
  CHECK(a.parts() == std::vector<std::vector<Rational>>{q({"1/4", "3/4"}), q({"1/4"})});

  auto b = good_arrangement(circle({{"0", 1}, {"1/2", 1}}));
  CHECK(b.weights == q({"0", "1/2"}));
  CHECK(b.descents() == std::vector<long>{2});

  auto c = good_arrangement(circle({{"1/3", 3}}));
  CHECK(c.descent_count() == 3);
  CHECK(c.divisor() == circle({{"1/3", 3}}));
}

TEST_CASE("small brute force of descent minimality") {
  auto g = circle({{"0", 2}, {"1/5", 1}, {"1/2", 2}});
  auto best = good_arrangement(g);
  auto w = best.weights;
  std::sort(w.begin(), w.end());
  long minimum = 100;
  do {
    Arrangement arr{0, w};
    minimum = std::min(minimum, arr.descent_count());
  } while (std::next_permutation(w.begin(), w.end()));
  CHECK(minimum == best.descent_count());
  CHECK(minimum == 2);
}

TEST_CASE("taus") {
  std::vector<Arrangement> arrs(5, good_arrangement(circle({{"0", 1}, {"1/2", 1}})));
  CHECK(taus(arrs) == std::vector<long>{0, 5});
}

TEST_CASE("derive k") {
  auto k = derive_k({1, 1}, {0, 0}, 3, 3);
  CHECK(k == std::vector<long>{3, 3});
  auto k2 = derive_k({0, 5}, {1, 0}, 0, 5);
  CHECK(k2 == std::vector<long>{0, -2});
  try {
    derive_k({0, 5}, {0, 0}, 0, 5);
    FAIL("expected a closure violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CyclicClosureViolation);
  }
}

TEST_CASE("partial moves") {
  auto asc = ascending_arrangement(circle({{"1/4", 2}, {"3/4", 1}}));
  CHECK(asc.weights == q({"1/4", "1/4", "3/4"}));
  CHECK(asc.descents() == std::vector<long>{1, 3});
  REQUIRE(movable_eigenvalue(asc));
  CHECK(*movable_eigenvalue(asc) == Rational(3, 4));
  auto moved = partial_move(asc, Rational(3, 4));
  CHECK(moved.weights == q({"1/4", "3/4", "1/4"}));
  CHECK(moved.descents() == std::vector<long>{2, 3});
  CHECK(moved.descent_weight() == asc.descent_weight() - 1);
  CHECK(moved.divisor() == asc.divisor());

  auto uniform = good_arrangement(circle({{"0", 2}, {"1/2", 2}}));
  CHECK_FALSE(movable_eigenvalue(uniform));
  try {
    partial_move(uniform, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoMovableEigenvalue);
  }
}

TEST_CASE("each move lowers the degree by one") {
  auto v = zero_defect_example();
  HiggsData data;
  for (std::size_t i = 0; i < v.points(); ++i) data.arrangements.push_back(ascending_arrangement(v[i], i));
  data.z.assign(3, 0);
  data.tau = taus(data.arrangements);
  data.k = derive_k(data.tau, data.z, 0, 4);
  Rational before = parabolic_degree(data);
  int moves = 0;
  for (auto& arr : data.arrangements) {
    while (auto alpha = movable_eigenvalue(arr)) {
      arr = partial_move(arr, *alpha);
      data.tau = taus(data.arrangements);
      data.k = derive_k(data.tau, data.z, 0, 4);
      Rational after = parabolic_degree(data);
      CHECK(after == before - 1);
      before = after;
      ++moves;
    }
  }
  CHECK(moves > 0);
}

TEST_CASE("degree shifts by r when k_1 moves") {
  HiggsData data;
  data.arrangements.assign(3, good_arrangement(circle({{"0", 1}, {"1/3", 1}, {"2/3", 1}})));
  data.z.assign(3, 0);
  data.tau = taus(data.arrangements);
  data.k = derive_k(data.tau, data.z, 0, 3);
  Rational d0 = parabolic_degree(data);
  data.k = derive_k(data.tau, data.z, 1, 3);
  CHECK(parabolic_degree(data) == d0 + 3);

  HiggsData zero;
  zero.arrangements.assign(3, good_arrangement(circle({{"0", 2}})));
  zero.k = {0, 0};
  CHECK(parabolic_degree(zero) == 0);
}

TEST_CASE("construction examples") {
  auto g = circle({{"1/4", 1}, {"3/4", 1}});
  CHECK(construct_error(MonodromyVector({g, g, g, g})) == ErrorCode::PreconditionDim2);
  auto t = circle({{"0", 1}, {"1/3", 1}, {"2/3", 1}});
  CHECK(construct_error(MonodromyVector({t, t, t})) == ErrorCode::PreconditionDim2);

  MonodromyVector five({g, g, g, g, g});
  auto data = construct(five);
  CHECK(parabolic_degree(data) == 0);
  CHECK(data.z[0] + data.z[1] == 1);
  CHECK(data.method == "extra-zeros");
  auto check = verify_higgs(data, five);
  CHECK(check.ok());
  auto forms = degree_closed_forms(data);
  CHECK(forms.derived_matches);

  auto zd = zero_defect_example();
  auto d0 = construct(zd);
  CHECK(parabolic_degree(d0) == 0);
  CHECK(verify_higgs(d0, zd).ok());

  auto h = circle({{"1/4", 1}, {"1/2", 1}});
  CHECK(construct_error(MonodromyVector({g, g, g, g, h})) == ErrorCode::DegreeNotIntegral);
  auto s = circle({{"0", 2}});
  CHECK(construct_error(MonodromyVector({s, g, s})) == ErrorCode::PreconditionDefectNegative);
}

TEST_CASE("verification catches tampering") {
  auto g = circle({{"1/4", 1}, {"3/4", 1}});
  MonodromyVector five({g, g, g, g, g});
  auto data = construct(five);

  auto shifted = data;
  shifted.k = derive_k(shifted.tau, shifted.z, shifted.k[0] + 1, 5);
  auto rep = verify_higgs(shifted, five);
  CHECK_FALSE(rep.ok());
  REQUIRE(rep.find("degree"));
  CHECK_FALSE(rep.find("degree")->ok);
  CHECK(rep.degree == 2);

  auto negative = data;
  negative.z[0] = -1;
  auto rep2 = verify_higgs(negative, five);
  REQUIRE(rep2.find("theta-exists"));
  CHECK_FALSE(rep2.find("theta-exists")->ok);
}

TEST_CASE("sawtooth rendering") {
  auto g = circle({{"1/4", 1}, {"3/4", 1}});
  MonodromyVector five({g, g, g, g, g});
  auto lines = sawtooth(construct(five));
  REQUIRE(lines.size() == 5 + 2);
  CHECK(lines[0].rfind("q1:", 0) == 0);
  CHECK(lines[5].rfind("E^1 = [", 0) == 0);
}

TEST_CASE("circle mode required") {
  auto x = GroupElement::generator(GroupMode::Multiplicative, "x");
  EigDivisor g(GroupMode::Multiplicative, {{x, 2}});
  CHECK(construct_error(MonodromyVector({g, g, g})) == ErrorCode::ModeMismatch);
}
