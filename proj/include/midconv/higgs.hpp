#pragma once

// Rank-r cyclotomic parabolic Higgs bundles of parabolic degree zero built
// from circle-valued local monodromy data with nonnegative defect.
//
// E = E^1 + ... + E^r with E^j = [k_j; a_{1,j}, ..., a_{n,j}] and theta
// mapping E^j to E^{j+1} (cyclically) with z_j extra zeros.

#include <optional>
#include <string>
#include <vector>

#include "midconv/divisors.hpp"

namespace midconv {

struct Arrangement {
  std::size_t point = 0;
  std::vector<Rational> weights;

  long size() const { return static_cast<long>(weights.size()); }
  /// 1-based positions t with a_t >= a_{t+1}, where a_{r+1} = a_1.
  std::vector<long> descents() const;
  long descent_count() const { return static_cast<long>(descents().size()); }
  /// Runs between consecutive descents; the first part may wrap around.
  std::vector<std::vector<Rational>> parts() const;
  /// sum over descents of (r - t)
  long descent_weight() const;
  EigDivisor divisor() const;

  friend bool operator==(const Arrangement&, const Arrangement&) = default;
};

/// Greedy arrangement: parts {alpha : m(alpha) >= j} for j = 1..p, each increasing.
Arrangement good_arrangement(const EigDivisor& g, std::size_t point = 0);
/// Same parts in the opposite order, smallest first.
Arrangement ascending_arrangement(const EigDivisor& g, std::size_t point = 0);
/// Cyclic left rotation by `steps`; descent count is unchanged.
Arrangement rotated(const Arrangement& arr, long steps);

/// Moves alpha from a part into the preceding part when the latter lacks it.
/// The descent ending the preceding part moves right by one. Only parts
/// that do not wrap are used. Throws NoMovableEigenvalue.
Arrangement partial_move(const Arrangement& arr, const Rational& alpha);
/// Smallest eigenvalue admitting partial_move, if any.
std::optional<Rational> movable_eigenvalue(const Arrangement& arr);

std::vector<long> taus(const std::vector<Arrangement>& arrangements);

/// k_{j+1} = k_j + z_j + tau_j + 2 - n. Throws CyclicClosureViolation unless
/// the recursion closes up (k_{r+1} = k_1).
std::vector<long> derive_k(const std::vector<long>& tau, const std::vector<long>& z, long k1, long n);

struct HiggsData {
  std::vector<Arrangement> arrangements;
  std::vector<long> k;
  std::vector<long> z;
  std::vector<long> tau;
  /// How the degree was brought to zero.
  std::string method;

  long points() const { return static_cast<long>(arrangements.size()); }
  long rank() const { return static_cast<long>(k.size()); }
};

/// sum_j k_j + sum_{i,j} a_{i,j}
Rational parabolic_degree(const HiggsData& data);

struct DegreeClosedForms {
  Rational direct;
  /// P = sum m alpha + sum_j j (r - j)(2 - n)
  Rational printed;
  /// P = sum m alpha + (2 - n) r (r - 1) / 2
  Rational derived;
  bool printed_matches = false;
  bool derived_matches = false;
};

/// Evaluates P + k_1 r + sum_{i,j} (r - t_{i,j}) + sum_j (r - j) z_j with both
/// candidate constants P and compares with the direct sum.
DegreeClosedForms degree_closed_forms(const HiggsData& data);

/// Requires circle mode, integral total weight, defect >= 0 and, when the
/// defect vanishes, positive superdefect.
HiggsData construct(const MonodromyVector& v);

struct HiggsCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct HiggsVerification {
  std::vector<HiggsCheck> checks;
  Rational degree;

  bool ok() const;
  const HiggsCheck* find(const std::string& name) const;
};

HiggsVerification verify_higgs(const HiggsData& data, const MonodromyVector& v);

/// One line per point with parts separated by '|', then one line per summand.
std::vector<std::string> sawtooth(const HiggsData& data);

}  // namespace midconv
