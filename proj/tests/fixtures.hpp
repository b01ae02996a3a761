#pragma once

// Hand-written inputs with known answers.

#include <string>
#include <vector>

#include "midconv/katz.hpp"

namespace fixtures {

using namespace midconv;

inline GroupElement sym(GroupMode mode, std::map<std::string, Rational> exps, Rational c = 0) {
  return GroupElement(mode, ScalarExpr(c, std::move(exps)));
}

/// (a', b'), (u', v'), (g', h') with beta^H = beta^V = (x, y, h'^{-1}).
/// With `related`, h' is eliminated through a'b'u'v'g'h' = 1.
struct Primed {
  GroupMode mode;
  bool related;

  std::map<std::string, Rational> hp() const {
    if (!related) return {{"h'", 1}};
    return {{"a'", -1}, {"b'", -1}, {"u'", -1}, {"v'", -1}, {"g'", -1}};
  }
  std::map<std::string, Rational> z() const {
    std::map<std::string, Rational> out;
    for (auto [k, c] : hp()) out[k] = -c;
    return out;
  }
  static std::map<std::string, Rational> sum(std::vector<std::map<std::string, Rational>> terms) {
    std::map<std::string, Rational> out;
    for (const auto& t : terms) {
      for (const auto& [k, c] : t) out[k] += c;
    }
    return out;
  }
  static std::map<std::string, Rational> neg(std::map<std::string, Rational> t) {
    for (auto& [k, c] : t) c = -c;
    return t;
  }

  MonodromyVector vector() const {
    return MonodromyVector({EigDivisor(mode, {{sym(mode, {{"a'", 1}}), 1}, {sym(mode, {{"b'", 1}}), 1}}),
                            EigDivisor(mode, {{sym(mode, {{"u'", 1}}), 1}, {sym(mode, {{"v'", 1}}), 1}}),
                            EigDivisor(mode, {{sym(mode, {{"g'", 1}}), 1}, {sym(mode, hp()), 1}})});
  }
  Convoluter convoluter() const {
    return Convoluter::same_as_h({sym(mode, {{"x", 1}}), sym(mode, {{"y", 1}}), sym(mode, z())});
  }
  /// The transformed classes as displayed for the example.
  std::vector<EigDivisor> expected() const {
    std::map<std::string, Rational> x{{"x", 1}}, y{{"y", 1}};
    auto e = [&](std::vector<std::map<std::string, Rational>> t) { return sym(mode, sum(std::move(t))); };
    return {EigDivisor(mode, {{e({{{"a'", 1}}, x, neg(y), neg(z())}), 1},
                              {e({{{"b'", 1}}, x, neg(y), neg(z())}), 1},
                              {e({x}), 1}}),
            EigDivisor(mode, {{e({{{"u'", 1}}, y, neg(x), neg(z())}), 1},
                              {e({{{"v'", 1}}, y, neg(x), neg(z())}), 1},
                              {e({y}), 1}}),
            EigDivisor(mode, {{e({{{"g'", 1}}, z(), neg(x), neg(y)}), 1}, {e({z()}), 2}})};
  }
};

}  // namespace fixtures
