#include "midconv/scalars.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "midconv/error.hpp"

namespace midconv {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::MissingGenerator: return "MissingGenerator";
    case ErrorCode::ConventionViolation: return "ConventionViolation";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::NoFixedVectorFreePoint: return "NoFixedVectorFreePoint";
    case ErrorCode::BoundaryNotSurjective: return "BoundaryNotSurjective";
    case ErrorCode::ConventionViolationNumeric: return "ConventionViolationNumeric";
    case ErrorCode::QuotientRankMismatch: return "QuotientRankMismatch";
    case ErrorCode::CyclicClosureViolation: return "CyclicClosureViolation";
    case ErrorCode::NoMovableEigenvalue: return "NoMovableEigenvalue";
    case ErrorCode::PreconditionDefectNegative: return "PreconditionDefectNegative";
    case ErrorCode::PreconditionDim2: return "PreconditionDim2";
    case ErrorCode::DegreeNotIntegral: return "DegreeNotIntegral";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "Unknown";
}

bool is_principled_negative(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConventionViolation:
    case ErrorCode::ConventionViolationNumeric:
    case ErrorCode::PreconditionDefectNegative:
    case ErrorCode::PreconditionDim2:
    case ErrorCode::DegreeNotIntegral:
    case ErrorCode::NoFixedVectorFreePoint:
      return true;
    default:
      return false;
  }
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) {
    throw Error(ErrorCode::ParseError, "empty rational");
  }
  s = s.substr(first, last - first + 1);
  if (s.front() == '+') s.erase(0, 1);
  auto slash = s.find('/');
  auto digits_ok = [](std::string_view part, bool allow_sign) {
    if (part.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && part[0] == '-') i = 1;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') return false;
    }
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) {
    throw Error(ErrorCode::ParseError, "malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(num, 10);
  mpz_class d(den, 10);
  if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Rational fractional_part(const Rational& q) {
  mpz_class floor_value;
  mpz_fdiv_q(floor_value.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  Rational result = q - Rational(floor_value);
  result.canonicalize();
  return result;
}

bool is_integral(const Rational& q) { return q.get_den() == 1; }

ScalarExpr::ScalarExpr(Rational constant) : constant_(std::move(constant)) {
  constant_.canonicalize();
}

ScalarExpr::ScalarExpr(Rational constant, std::map<std::string, Rational> exponents)
    : constant_(std::move(constant)), exponents_(std::move(exponents)) {
  constant_.canonicalize();
  for (auto& [name, coeff] : exponents_) coeff.canonicalize();
  drop_zeros();
}

ScalarExpr ScalarExpr::generator(const std::string& name, const Rational& coeff) {
  if (name.empty()) throw Error(ErrorCode::InvalidInput, "generator name must be non-empty");
  return ScalarExpr(Rational(0), {{name, coeff}});
}

void ScalarExpr::drop_zeros() {
  for (auto it = exponents_.begin(); it != exponents_.end();) {
    if (it->second == 0) {
      it = exponents_.erase(it);
    } else {
      ++it;
    }
  }
}

ScalarExpr ScalarExpr::operator+(const ScalarExpr& other) const {
  ScalarExpr out = *this;
  out.constant_ += other.constant_;
  for (const auto& [name, coeff] : other.exponents_) out.exponents_[name] += coeff;
  out.drop_zeros();
  return out;
}

ScalarExpr ScalarExpr::operator-() const { return scaled(-1); }

ScalarExpr ScalarExpr::operator-(const ScalarExpr& other) const { return *this + (-other); }

ScalarExpr ScalarExpr::scaled(const Rational& factor) const {
  ScalarExpr out;
  out.constant_ = constant_ * factor;
  for (const auto& [name, coeff] : exponents_) out.exponents_[name] = coeff * factor;
  out.drop_zeros();
  return out;
}

ScalarExpr ScalarExpr::reduced_mod_one() const {
  ScalarExpr out = *this;
  out.constant_ = fractional_part(constant_);
  return out;
}

std::complex<double> ScalarExpr::evaluate(const Assignment& assignment) const {
  std::complex<double> total = constant_.get_d();
  for (const auto& [name, coeff] : exponents_) {
    auto it = assignment.find(name);
    if (it == assignment.end()) {
      throw Error(ErrorCode::MissingGenerator, "no numeric value assigned to generator '" + name + "'");
    }
    total += coeff.get_d() * it->second;
  }
  return total;
}

std::string ScalarExpr::to_string() const {
  std::ostringstream out;
  bool first = true;
  if (constant_ != 0 || exponents_.empty()) {
    out << constant_.get_str();
    first = false;
  }
  for (const auto& [name, coeff] : exponents_) {
    Rational magnitude = abs(coeff);
    if (first) {
      if (coeff < 0) out << "-";
    } else {
      out << (coeff < 0 ? " - " : " + ");
    }
    if (magnitude != 1) out << magnitude.get_str() << "*";
    out << name;
    first = false;
  }
  return out.str();
}

int compare(const ScalarExpr& a, const ScalarExpr& b) {
  int c = cmp(a.constant_, b.constant_);
  if (c != 0) return c < 0 ? -1 : 1;
  auto ia = a.exponents_.begin();
  auto ib = b.exponents_.begin();
  for (; ia != a.exponents_.end() && ib != b.exponents_.end(); ++ia, ++ib) {
    int n = ia->first.compare(ib->first);
    if (n != 0) return n < 0 ? -1 : 1;
    int q = cmp(ia->second, ib->second);
    if (q != 0) return q < 0 ? -1 : 1;
  }
  if (ia == a.exponents_.end() && ib == b.exponents_.end()) return 0;
  return ia == a.exponents_.end() ? -1 : 1;
}

std::string_view mode_name(GroupMode mode) {
  switch (mode) {
    case GroupMode::Multiplicative: return "multiplicative";
    case GroupMode::Additive: return "additive";
    case GroupMode::Circle: return "circle";
  }
  return "unknown";
}

GroupMode parse_mode(std::string_view name) {
  if (name == "multiplicative") return GroupMode::Multiplicative;
  if (name == "additive") return GroupMode::Additive;
  if (name == "circle") return GroupMode::Circle;
  throw Error(ErrorCode::ParseError, "unknown group mode '" + std::string(name) + "'");
}

GroupElement::GroupElement(GroupMode mode, ScalarExpr value) : mode_(mode), value_(std::move(value)) {
  switch (mode_) {
    case GroupMode::Additive:
      break;
    case GroupMode::Circle:
      if (value_.has_generators()) {
        throw Error(ErrorCode::InvalidInput,
                    "circle-mode weights must be rational constants, got '" + value_.to_string() + "'");
      }
      [[fallthrough]];
    case GroupMode::Multiplicative:
      value_ = value_.reduced_mod_one();
      break;
  }
}

std::string GroupElement::to_string() const { return value_.to_string(); }

int compare(const GroupElement& a, const GroupElement& b) {
  if (a.mode_ != b.mode_) return a.mode_ < b.mode_ ? -1 : 1;
  return compare(a.value_, b.value_);
}

namespace {

void require_same_mode(const GroupElement& a, const GroupElement& b) {
  if (a.mode() != b.mode()) {
    throw Error(ErrorCode::ModeMismatch, "cannot combine " + std::string(mode_name(a.mode())) + " and " +
                                             std::string(mode_name(b.mode())) + " elements");
  }
}

}  // namespace

GroupElement combine(const GroupElement& a, const GroupElement& b) {
  require_same_mode(a, b);
  return GroupElement(a.mode(), a.value() + b.value());
}

GroupElement invert(const GroupElement& a) { return GroupElement(a.mode(), -a.value()); }

GroupElement power(const GroupElement& a, long k) { return GroupElement(a.mode(), a.value().scaled(k)); }

bool is_identity(const GroupElement& a) {
  return !a.value().has_generators() && a.value().constant() == 0;
}

bool is_integer_additive(const GroupElement& a) {
  if (a.mode() != GroupMode::Additive) {
    throw Error(ErrorCode::ModeMismatch, "integrality test is only defined in additive mode");
  }
  return !a.value().has_generators() && is_integral(a.value().constant());
}

std::complex<double> to_complex(const GroupElement& a, const Assignment& assignment) {
  std::complex<double> x = a.value().evaluate(assignment);
  if (a.mode() == GroupMode::Additive) return x;
  return std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi) * x);
}

}  // namespace midconv
