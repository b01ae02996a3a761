#pragma once

// Exact eigenvalue arithmetic.
//
// An eigenvalue is an element of an abelian group written as a rational
// linear form  q0 + sum_i q_i * gen_i  over named symbolic generators.
// Generators are treated as Q-linearly independent of 1 and of each other,
// which makes every "is trivial" / "is an integer" test decidable.
//
//   Multiplicative  value e stands for exp(2 pi i e); constant reduced mod 1.
//   Additive        value is the residue itself; no reduction.
//   Circle          parabolic weight in [0,1); no generators allowed.

#include <complex>
#include <map>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace midconv {

using Rational = mpq_class;
using Assignment = std::map<std::string, std::complex<double>>;

Rational parse_rational(std::string_view text);
std::string rational_to_string(const Rational& q);
/// Representative of q modulo 1 in [0, 1).
Rational fractional_part(const Rational& q);
bool is_integral(const Rational& q);

class ScalarExpr {
 public:
  ScalarExpr() = default;
  explicit ScalarExpr(Rational constant);
  ScalarExpr(Rational constant, std::map<std::string, Rational> exponents);

  static ScalarExpr generator(const std::string& name, const Rational& coeff = 1);

  const Rational& constant() const { return constant_; }
  const std::map<std::string, Rational>& exponents() const { return exponents_; }
  bool has_generators() const { return !exponents_.empty(); }

  ScalarExpr operator+(const ScalarExpr& other) const;
  ScalarExpr operator-(const ScalarExpr& other) const;
  ScalarExpr operator-() const;
  ScalarExpr scaled(const Rational& factor) const;
  /// Same generator part, constant replaced by its fractional part.
  ScalarExpr reduced_mod_one() const;

  std::complex<double> evaluate(const Assignment& assignment) const;
  std::string to_string() const;

  /// Total order: constant first, then the sorted (name, coefficient) list.
  friend int compare(const ScalarExpr& a, const ScalarExpr& b);
  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
    return compare(a, b) == 0;
  }
  friend bool operator<(const ScalarExpr& a, const ScalarExpr& b) {
    return compare(a, b) < 0;
  }

 private:
  void drop_zeros();

  Rational constant_ = 0;
  std::map<std::string, Rational> exponents_;
};

enum class GroupMode { Multiplicative, Additive, Circle };

std::string_view mode_name(GroupMode mode);
GroupMode parse_mode(std::string_view name);

class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(GroupMode mode, ScalarExpr value);

  static GroupElement identity(GroupMode mode) { return GroupElement(mode, ScalarExpr{}); }
  static GroupElement constant(GroupMode mode, const Rational& value) {
    return GroupElement(mode, ScalarExpr(value));
  }
  static GroupElement generator(GroupMode mode, const std::string& name, const Rational& coeff = 1) {
    return GroupElement(mode, ScalarExpr::generator(name, coeff));
  }

  GroupMode mode() const { return mode_; }
  const ScalarExpr& value() const { return value_; }

  std::string to_string() const;

  friend int compare(const GroupElement& a, const GroupElement& b);
  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.mode_ == b.mode_ && a.value_ == b.value_;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    return compare(a, b) < 0;
  }

 private:
  GroupMode mode_ = GroupMode::Multiplicative;
  ScalarExpr value_;
};

GroupElement combine(const GroupElement& a, const GroupElement& b);
GroupElement invert(const GroupElement& a);
/// a combined with itself k times (k may be negative).
GroupElement power(const GroupElement& a, long k);
bool is_identity(const GroupElement& a);
/// Additive mode only: no generator part and an integral constant.
bool is_integer_additive(const GroupElement& a);
std::complex<double> to_complex(const GroupElement& a, const Assignment& assignment);

}  // namespace midconv
