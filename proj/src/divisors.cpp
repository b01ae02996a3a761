#include "midconv/divisors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "midconv/error.hpp"

namespace midconv {

EigDivisor::EigDivisor(GroupMode mode, std::initializer_list<std::pair<GroupElement, long>> entries)
    : mode_(mode) {
  for (const auto& [alpha, m] : entries) add(alpha, m);
}

void EigDivisor::add(const GroupElement& alpha, long m) {
  if (alpha.mode() != mode_) {
    throw Error(ErrorCode::ModeMismatch, "eigenvalue mode does not match divisor mode");
  }
  if (m == 0) return;
  long& slot = entries_[alpha];
  slot += m;
  if (slot == 0) entries_.erase(alpha);
}

long EigDivisor::multiplicity(const GroupElement& alpha) const {
  auto it = entries_.find(alpha);
  return it == entries_.end() ? 0 : it->second;
}

long EigDivisor::degree() const {
  long total = 0;
  for (const auto& [alpha, m] : entries_) total += m;
  return total;
}

bool EigDivisor::is_effective() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.second > 0; });
}

std::vector<long> EigDivisor::partition() const {
  std::vector<long> parts;
  parts.reserve(entries_.size());
  for (const auto& [alpha, m] : entries_) parts.push_back(m);
  std::sort(parts.begin(), parts.end(), std::greater<>());
  return parts;
}

EigDivisor EigDivisor::operator+(const EigDivisor& other) const {
  if (other.mode_ != mode_) throw Error(ErrorCode::ModeMismatch, "cannot add divisors of different modes");
  EigDivisor out = *this;
  for (const auto& [alpha, m] : other.entries_) out.add(alpha, m);
  return out;
}

EigDivisor EigDivisor::translated(const GroupElement& shift) const {
  EigDivisor out(mode_);
  for (const auto& [alpha, m] : entries_) out.add(combine(alpha, shift), m);
  return out;
}

std::string EigDivisor::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [alpha, m] : entries_) {
    if (!first) out << " + ";
    first = false;
    if (m != 1) out << m;
    out << "[" << alpha.to_string() << "]";
  }
  if (first) out << "0";
  return out.str();
}

MaxMultiplicity max_multiplicity(const EigDivisor& g) {
  MaxMultiplicity best;
  best.eigenvalue = GroupElement::identity(g.mode());
  // Entries iterate in ascending element order, so strict > keeps the smallest on ties.
  for (const auto& [alpha, m] : g.entries()) {
    if (m > best.multiplicity) {
      best.eigenvalue = alpha;
      best.multiplicity = m;
    }
  }
  return best;
}

GroupElement determinant(const EigDivisor& g) {
  GroupElement acc = GroupElement::identity(g.mode());
  for (const auto& [alpha, m] : g.entries()) acc = combine(acc, power(alpha, m));
  return acc;
}

MonodromyVector::MonodromyVector(std::vector<EigDivisor> divisors) : divisors_(std::move(divisors)) {
  if (divisors_.size() < 3) {
    throw Error(ErrorCode::InvalidInput,
                "a local monodromy vector needs at least 3 points, got " + std::to_string(divisors_.size()));
  }
  mode_ = divisors_.front().mode();
  rank_ = divisors_.front().degree();
  for (std::size_t i = 0; i < divisors_.size(); ++i) {
    const auto& g = divisors_[i];
    if (g.mode() != mode_) {
      throw Error(ErrorCode::ModeMismatch, "divisor " + std::to_string(i + 1) + " has a different mode");
    }
    if (!g.is_effective()) {
      throw Error(ErrorCode::InvalidInput, "divisor " + std::to_string(i + 1) + " is not effective");
    }
    if (g.degree() != rank_) {
      throw Error(ErrorCode::InvalidInput, "divisor " + std::to_string(i + 1) + " has degree " +
                                               std::to_string(g.degree()) + ", expected " +
                                               std::to_string(rank_));
    }
  }
  if (rank_ < 1) throw Error(ErrorCode::InvalidInput, "rank must be at least 1");
}

std::set<std::string> MonodromyVector::generators() const {
  std::set<std::string> names;
  for (const auto& g : divisors_) {
    for (const auto& [alpha, m] : g.entries()) {
      for (const auto& [name, coeff] : alpha.value().exponents()) names.insert(name);
    }
  }
  return names;
}

GroupElement total_determinant(const MonodromyVector& v) {
  GroupElement acc = GroupElement::identity(v.mode());
  for (const auto& g : v.divisors()) acc = combine(acc, determinant(g));
  return acc;
}

PMV pmv(const MonodromyVector& v) {
  PMV out;
  out.reserve(v.points());
  for (const auto& g : v.divisors()) out.push_back(g.partition());
  return out;
}

long pmv_gcd(const MonodromyVector& v) {
  long d = 0;
  for (const auto& g : v.divisors()) {
    for (const auto& [alpha, m] : g.entries()) d = std::gcd(d, m);
  }
  return d;
}

bool is_all_diagonal(const MonodromyVector& v) {
  return std::all_of(v.divisors().begin(), v.divisors().end(),
                     [](const EigDivisor& g) { return g.support_size() == 1; });
}

}  // namespace midconv
