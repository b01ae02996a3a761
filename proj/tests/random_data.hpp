#pragma once

// Random generic inputs shared by the unit tests and the acceptance runner.
// Eigenvalues carry fresh symbolic generators, so accidental relations only
// come from the determinant condition.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "midconv/katz.hpp"

namespace testdata {

using namespace midconv;

inline long uniform(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline std::vector<long> random_partition(long r, std::mt19937_64& rng) {
  std::vector<long> parts;
  long left = r;
  while (left > 0) {
    long p = uniform(rng, 1, left);
    parts.push_back(p);
    left -= p;
  }
  std::sort(parts.begin(), parts.end(), std::greater<>());
  return parts;
}

class NameSource {
 public:
  explicit NameSource(std::string prefix) : prefix_(std::move(prefix)) {}
  std::string next() { return prefix_ + std::to_string(++count_); }

 private:
  std::string prefix_;
  int count_ = 0;
};

inline GroupElement random_generic(GroupMode mode, std::mt19937_64& rng, NameSource& names) {
  static const long coeffs[] = {1, 2, -1, 3};
  ScalarExpr x(Rational(uniform(rng, 0, 11), 12),
               {{names.next(), Rational(coeffs[uniform(rng, 0, 3)])}});
  return GroupElement(mode, x);
}

/// Generic vector with trivial total determinant; the last eigenvalue of the
/// last point is solved for.
inline MonodromyVector random_generic_vector(GroupMode mode, long r, std::size_t n, std::mt19937_64& rng,
                                             NameSource& names) {
  std::vector<EigDivisor> gs;
  ScalarExpr total;
  for (std::size_t i = 0; i < n; ++i) {
    auto parts = random_partition(r, rng);
    EigDivisor g(mode);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (i + 1 == n && k + 1 == parts.size()) {
        ScalarExpr last = (-total).scaled(Rational(1, parts[k]));
        g.add(GroupElement(mode, last), parts[k]);
      } else {
        GroupElement a = random_generic(mode, rng, names);
        total = total + a.value().scaled(parts[k]);
        g.add(a, parts[k]);
      }
    }
    gs.push_back(std::move(g));
  }
  return MonodromyVector(std::move(gs));
}

/// Mixes max-multiplicity, arbitrary-eigenvalue and fresh choices of beta^H,
/// and same-as-h, fresh and constant-shifted choices of beta^V.
inline Convoluter random_convoluter(const MonodromyVector& v, std::mt19937_64& rng, NameSource& names) {
  const GroupMode mode = v.mode();
  std::vector<GroupElement> h;
  for (const auto& g : v.divisors()) {
    long pick = uniform(rng, 0, 19);
    if (pick < 11) {
      h.push_back(invert(max_multiplicity(g).eigenvalue));
    } else if (pick < 17) {
      auto it = g.entries().begin();
      std::advance(it, uniform(rng, 0, static_cast<long>(g.support_size()) - 1));
      h.push_back(invert(it->first));
    } else {
      h.push_back(random_generic(mode, rng, names));
    }
  }
  switch (uniform(rng, 0, 2)) {
    case 0:
      return Convoluter::same_as_h(std::move(h));
    case 1:
      return Convoluter::fresh(std::move(h), v.generators(), names.next() + "_s");
    default: {
      std::vector<GroupElement> w;
      Rational acc = 0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        Rational c = i + 1 == h.size() ? -acc : Rational(uniform(rng, -5, 5), 7);
        acc += c;
        w.push_back(combine(h[i], GroupElement::constant(mode, c)));
      }
      return Convoluter::from_h_and_v(std::move(h), std::move(w));
    }
  }
}

}  // namespace testdata
