#pragma once

// Divisors over the eigenvalue group: finite multiplicity maps standing for
// semisimple conjugacy classes, and n-tuples of them (local monodromy vectors).

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "midconv/scalars.hpp"

namespace midconv {

class EigDivisor {
 public:
  using Entries = std::map<GroupElement, long>;

  explicit EigDivisor(GroupMode mode = GroupMode::Multiplicative) : mode_(mode) {}
  EigDivisor(GroupMode mode, std::initializer_list<std::pair<GroupElement, long>> entries);

  GroupMode mode() const { return mode_; }
  const Entries& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  /// Adds m to the multiplicity of alpha; zero entries are removed.
  void add(const GroupElement& alpha, long m);
  long multiplicity(const GroupElement& alpha) const;
  long degree() const;
  bool is_effective() const;

  /// Multiplicities sorted descending.
  std::vector<long> partition() const;

  EigDivisor operator+(const EigDivisor& other) const;
  /// Every point alpha moved to alpha * shift.
  EigDivisor translated(const GroupElement& shift) const;

  std::string to_string() const;

  friend bool operator==(const EigDivisor&, const EigDivisor&) = default;

 private:
  GroupMode mode_;
  Entries entries_;
};

struct MaxMultiplicity {
  GroupElement eigenvalue;
  long multiplicity = 0;
};

/// Largest multiplicity; ties go to the smallest eigenvalue in the element order.
MaxMultiplicity max_multiplicity(const EigDivisor& g);
GroupElement determinant(const EigDivisor& g);

using PMV = std::vector<std::vector<long>>;

class MonodromyVector {
 public:
  /// Validates n >= 3, effectiveness, equal degree r >= 1 and a common mode.
  explicit MonodromyVector(std::vector<EigDivisor> divisors);

  std::size_t points() const { return divisors_.size(); }
  long rank() const { return rank_; }
  GroupMode mode() const { return mode_; }
  const std::vector<EigDivisor>& divisors() const { return divisors_; }
  const EigDivisor& operator[](std::size_t i) const { return divisors_[i]; }

  /// Names of all generators used by any eigenvalue.
  std::set<std::string> generators() const;

  friend bool operator==(const MonodromyVector&, const MonodromyVector&) = default;

 private:
  std::vector<EigDivisor> divisors_;
  long rank_ = 0;
  GroupMode mode_ = GroupMode::Multiplicative;
};

GroupElement total_determinant(const MonodromyVector& v);
PMV pmv(const MonodromyVector& v);
long pmv_gcd(const MonodromyVector& v);
bool is_all_diagonal(const MonodromyVector& v);

}  // namespace midconv
