#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "midconv/error.hpp"
#include "midconv/homology.hpp"
#include "random_numeric.hpp"

using namespace midconv;

namespace {

using testdata::random_unitary_instance;

MonodromyVector hyper_vector(GroupMode mode) {
  auto g = [&](const char* s) { return GroupElement::generator(mode, s); };
  auto c2 = fixtures::sym(mode, {{"a1", -1}, {"a2", -1}, {"b1", -1}, {"b2", -1}, {"c1", -1}});
  return MonodromyVector({EigDivisor(mode, {{g("a1"), 1}, {g("a2"), 1}}),
                          EigDivisor(mode, {{g("b1"), 1}, {g("b2"), 1}}), EigDivisor(mode, {{g("c1"), 1}, {c2, 1}})});
}

}  // namespace

TEST_CASE("word expansion") {
  auto inst = random_unitary_instance(2, 3, 1);
  Eigen::VectorXcd v(2);
  v << cd(1, 0.5), cd(-0.25, 2);
  Eigen::VectorXcd e = expand_word(inst, {2}, v);
  CHECK(e.segment(0, 2).norm() < 1e-14);
  CHECK((e.segment(2, 2) - v).norm() < 1e-14);
  CHECK(e.segment(4, 2).norm() < 1e-14);
  CHECK(expand_word(inst, {3, -3}, v).norm() < 1e-14);

  Eigen::MatrixXcd d = boundary_matrix(inst);
  for (std::size_t k = 0; k < 3; ++k) {
    Eigen::VectorXcd bd = d * expand_word(inst, delta_word(3, k), v);
    CHECK((bd - (inst.chi - 1.0) * v).norm() < 1e-12);
  }
}

TEST_CASE("braid action fixes the other generators") {
  auto inst = random_unitary_instance(2, 4, 2);
  for (std::size_t k = 0; k < 4; ++k) {
    Eigen::MatrixXcd U = braid_action(inst, k);
    for (std::size_t i = 0; i < 4; ++i) {
      if (i == k) continue;
      CHECK((U.middleCols(2 * i, 2) - Eigen::MatrixXcd::Identity(8, 8).middleCols(2 * i, 2)).norm() < 1e-14);
    }
  }
}

TEST_CASE("two by two block formula") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto inst = random_unitary_instance(1 + static_cast<long>(seed % 3), 3 + seed % 2, seed);
    for (std::size_t k = 0; k < inst.n(); ++k) {
      for (const auto& blk : block_matrix_check(inst, k)) {
        CHECK(blk.deviation < 1e-9);
        CHECK(blk.invariance_residual < 1e-9);
        CHECK(blk.eigenvalue_deviation < 1e-9);
        cd lam = inst.chi * inst.b[k] * blk.eigenvalue;
        CHECK(std::abs(blk.measured.determinant() - lam) < 1e-9);
        CHECK(std::abs(blk.measured.trace() - (1.0 + lam)) < 1e-9);
      }
    }
  }
}

TEST_CASE("raw convolution spectra") {
  auto inst = random_unitary_instance(3, 4, 5);
  auto raw = raw_convolution_rep(inst);
  CHECK(raw.dim == 9);
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<cd> predicted;
    for (cd lam : eigenvalues(inst.M[k])) predicted.push_back(inst.w[k] * inst.chi * inst.b[k] * lam);
    for (int j = 0; j < 2 * 3; ++j) predicted.push_back(inst.w[k]);
    CHECK(multiset_deviation(predicted, eigenvalues(raw.matrices[k])) < 1e-9);
  }
}

TEST_CASE("rank one with three points") {
  NumericInstance inst;
  for (double a : {0.1, 0.35}) inst.M.push_back(Eigen::MatrixXcd::Constant(1, 1, testdata::unit_complex(a)));
  inst.M.push_back(Eigen::MatrixXcd::Constant(1, 1, testdata::unit_complex(-0.45)));
  inst.b = {testdata::unit_complex(0.2), testdata::unit_complex(0.15), testdata::unit_complex(0.3)};
  inst.w = inst.b;
  inst.chi = testdata::unit_complex(-0.65);
  auto raw = raw_convolution_rep(inst);
  CHECK(raw.dim == 2);
  auto rep = verify_instance(inst);
  CHECK(rep.passed);
}

TEST_CASE("similarity invariance") {
  auto inst = random_unitary_instance(2, 3, 9);
  auto conj = inst;
  Eigen::MatrixXcd P = random_unitary(2, 77);
  P(0, 1) += 0.5;
  for (auto& m : conj.M) m = P * m * P.inverse();
  auto a = raw_convolution_rep(inst);
  auto b = raw_convolution_rep(conj);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(multiset_deviation(eigenvalues(a.matrices[k]), eigenvalues(b.matrices[k])) < 1e-9);
  }
}

TEST_CASE("no fixed vectors means middle equals raw") {
  auto inst = random_unitary_instance(2, 4, 3);
  auto raw = raw_convolution_rep(inst);
  auto mid = middle_convolution_rep(inst);
  CHECK(mid.dim == raw.dim);
  for (long f : mid.fixed_dims) CHECK(f == 0);
}

TEST_CASE("trivial beta^T is rejected numerically") {
  auto inst = random_unitary_instance(2, 3, 4);
  inst.b = {1.0, 1.0, 1.0};
  inst.w = inst.b;
  inst.chi = 1.0;
  try {
    middle_convolution_rep(inst);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConventionViolationNumeric);
  }
}

TEST_CASE("hypergeometric instance with the primed convoluter") {
  const GroupMode M = GroupMode::Multiplicative;
  auto v = hyper_vector(M);
  auto z = fixtures::sym(M, {{"a1", 1}, {"a2", 1}, {"b1", 1}, {"b2", 1}, {"c1", 1}});
  auto beta = Convoluter::same_as_h({GroupElement::generator(M, "x"), GroupElement::generator(M, "y"), z});
  Assignment asg{{"a1", 0.11}, {"a2", 0.52}, {"b1", 0.23}, {"b2", 0.71}, {"c1", 0.37}, {"x", 0.61}, {"y", 0.33}};
  GenerateOptions opts;
  opts.seed = 3;
  opts.last_point = GenerateOptions::LastPoint::Prescribed;
  auto gen = generate_instance(v, beta, asg, opts);
  CHECK_FALSE(gen.last_point_free);
  auto rep = verify_generated(gen);
  CHECK(rep.middle_dim == 3);
  CHECK(rep.expected_middle_dim == 3);
  CHECK(rep.middle_deviation < 1e-8);
  CHECK(rep.passed);
}

TEST_CASE("generated rank three instance with four points") {
  const GroupMode M = GroupMode::Multiplicative;
  auto g = [&](const char* s) { return GroupElement::generator(M, s); };
  MonodromyVector v({EigDivisor(M, {{g("a1"), 2}, {g("a2"), 1}}), EigDivisor(M, {{g("b1"), 1}, {g("b2"), 1}, {g("b3"), 1}}),
                     EigDivisor(M, {{g("c1"), 2}, {g("c2"), 1}}), EigDivisor(M, {{g("d1"), 1}, {g("d2"), 1}, {g("d3"), 1}})});
  auto beta = max_multiplicity_convoluter(v, BetaVPolicy::SameAsH);
  Assignment asg{{"a1", 0.13}, {"a2", 0.58}, {"b1", 0.21}, {"b2", 0.44}, {"b3", 0.87},
                 {"c1", 0.33}, {"c2", 0.71}, {"d1", 0.05}, {"d2", 0.5}, {"d3", 0.91}};
  GenerateOptions opts;
  opts.seed = 8;
  auto gen = generate_instance(v, beta, asg, opts);
  CHECK(gen.last_point_free);
  auto rep = verify_generated(gen);
  CHECK(rep.raw_dim == 9);
  CHECK(rep.middle_dim == rep.expected_middle_dim);
  CHECK(rep.defect_agrees);
  CHECK(rep.passed);
}

TEST_CASE("multiset deviation and semisimplicity") {
  CHECK(multiset_deviation({1.0, cd(0, 1)}, {cd(0, 1), 1.0}) < 1e-15);
  CHECK(std::isinf(multiset_deviation({1.0}, {1.0, 2.0})));
  CHECK(multiset_deviation({1.0, 1.0}, {1.0, 1.1}) == doctest::Approx(0.1));
  Eigen::MatrixXcd jordan(2, 2);
  jordan << 1.0, 1.0, 0.0, 1.0;
  CHECK_FALSE(is_semisimple(jordan, 1e-8));
  CHECK(is_semisimple(Eigen::MatrixXcd::Identity(3, 3), 1e-8));
  Eigen::MatrixXcd U = random_unitary(4, 12);
  CHECK((U.adjoint() * U - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-12);
}
