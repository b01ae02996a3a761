#pragma once

// Katz transformation on semisimple local monodromy data.
//
// A convoluter carries the rank-one twisting datum (beta^H_i, beta^V_i,
// beta^T, beta^U_i) subject to
//     beta^T * prod_i beta^H_i = 1,  beta^T * prod_i beta^V_i = 1,
//     beta^U_i = beta^T * beta^H_i * beta^V_i.
// Group laws are written multiplicatively here; in additive mode read
// "product" as "sum" and "1" as "0".

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "midconv/divisors.hpp"

namespace midconv {

enum class BetaVPolicy { SameAsH, Fresh, Explicit };

std::string_view beta_v_policy_name(BetaVPolicy policy);
BetaVPolicy parse_beta_v_policy(std::string_view name);

struct Convoluter {
  GroupMode mode = GroupMode::Multiplicative;
  std::vector<GroupElement> h;
  std::vector<GroupElement> v;
  GroupElement t;
  std::vector<GroupElement> u;

  std::size_t points() const { return h.size(); }

  /// Derives beta^T from h and beta^U from (h, v, t); validates the v relation.
  static Convoluter from_h_and_v(std::vector<GroupElement> h, std::vector<GroupElement> v);
  static Convoluter same_as_h(std::vector<GroupElement> h);
  /// beta^V_i = beta^H_i * s_i with fresh generators s_1..s_{n-1} and
  /// s_n = (s_1 ... s_{n-1})^{-1}. Names avoid everything in `taken`.
  static Convoluter fresh(std::vector<GroupElement> h, const std::set<std::string>& taken,
                          const std::string& prefix = "s");

  bool relations_hold() const;

  friend bool operator==(const Convoluter&, const Convoluter&) = default;
};

/// Convoluter whose beta^{H_i,-1} is the max-multiplicity eigenvalue of g_i
/// (ties broken by element order).
Convoluter max_multiplicity_convoluter(const MonodromyVector& v, BetaVPolicy policy,
                                       const std::string& fresh_prefix = "s");

/// (n-2) r - sum_i m_i(beta^{H_i,-1}).
long defect(const Convoluter& beta, std::span<const EigDivisor> g);
long defect(const Convoluter& beta, const MonodromyVector& v);
/// Defect with the max-multiplicity choice: (n-2) r - sum_i nu(g_i).
long defect(const MonodromyVector& v);

struct PointCheck {
  std::size_t point = 0;
  bool ok = true;
  std::vector<GroupElement> offending;

  friend bool operator==(const PointCheck&, const PointCheck&) = default;
};

struct ConventionReport {
  bool chi_nontrivial = true;
  std::vector<PointCheck> chirhobeta;
  bool de_rham = false;
  bool diag_res_not_integer = true;
  std::vector<PointCheck> alphabetabeta;
  std::optional<bool> one_generic;

  bool chirhobeta_ok() const;
  bool alphabetabeta_ok() const;
  bool ok() const;
  /// Human-readable name of the first failing convention with its witness.
  std::string describe_failure() const;

  friend bool operator==(const ConventionReport&, const ConventionReport&) = default;
};

/// Betti conventions: beta^T != 1 and beta^T beta^H_i a != 1 for every
/// eigenvalue a of g_i. With de_rham (additive mode only) additionally
/// beta^T not integral, a + beta^H_i + beta^T not integral and
/// a + beta^H_i not a nonzero integer.
ConventionReport check_conventions(const Convoluter& beta, std::span<const EigDivisor> g, bool de_rham);
ConventionReport check_conventions(const Convoluter& beta, const MonodromyVector& v, bool de_rham);

struct EmptinessCertificate {
  std::size_t point = 0;
  /// sum_{j != i} (r - m_j(beta^{H_j,-1}))
  long lhs = 0;
  /// r
  long rhs = 0;
  /// m_i(beta^{H_i,-1}) + defect, the negative multiplicity of [beta^V_i].
  long coefficient = 0;

  friend bool operator==(const EmptinessCertificate&, const EmptinessCertificate&) = default;
};

enum class KappaStatus { Effective, Noneffective, DegenerateRank };
std::string_view kappa_status_name(KappaStatus status);

struct KappaResult {
  std::vector<EigDivisor> divisors;
  long rank = 0;
  long defect = 0;
  KappaStatus status = KappaStatus::Effective;
  std::optional<EmptinessCertificate> certificate;
  /// Multiplicity of the new eigenvalue beta^V_i at each point.
  std::vector<long> new_eigenvalue_dims;
  ConventionReport conventions;

  MonodromyVector vector() const;
};

struct KappaOptions {
  /// Reject inputs failing the conventions with ConventionViolation.
  bool check_conventions = true;
};

EigDivisor kappa_local(const Convoluter& beta, std::span<const EigDivisor> g, std::size_t i);

/// Conventions are Betti in multiplicative mode and de Rham in additive mode.
KappaResult kappa(const Convoluter& beta, const MonodromyVector& v, KappaOptions options = {});
/// Same transform on a formal tuple of divisors (effectiveness not required).
KappaResult kappa_formal(const Convoluter& beta, std::span<const EigDivisor> g, KappaOptions options = {});
/// Additive mode with the de Rham conventions; also checks that the
/// new-eigenvalue multiplicity equals (n-2) r - sum_{j != i} m_j(-beta^H_j).
KappaResult kappa_de_rham(const Convoluter& beta, const MonodromyVector& v, KappaOptions options = {});

/// The involutive partner: H <-> V swapped and everything inverted.
Convoluter partner(const Convoluter& beta);

/// kappa(partner(beta), kappa(beta, g)) == g, exactly. Throws
/// ConventionViolation if either side fails its conventions.
bool check_involution(const Convoluter& beta, const MonodromyVector& v);

/// No product a_1 ... a_n = 1 with a_i in supp(g_i). In additive mode the
/// relation is "sum is an integer".
bool is_one_generic(const MonodromyVector& v, std::size_t budget = 10'000'000);

std::optional<EmptinessCertificate> detect_empty(const Convoluter& beta, const MonodromyVector& v);

struct KatzStep {
  MonodromyVector input;
  Convoluter convoluter;
  long defect = 0;
  MonodromyVector output;
};

enum class TerminalStatus { AllDiagonal, EmptyNoneffective, PositiveDefect, ConventionFailure };
std::string_view terminal_status_name(TerminalStatus status);
TerminalStatus parse_terminal_status(std::string_view name);

struct AlgorithmTrace {
  std::vector<KatzStep> steps;
  TerminalStatus status = TerminalStatus::AllDiagonal;
  MonodromyVector final_vector;
  long final_defect = 0;
  /// Present for ConventionFailure / EmptyNoneffective.
  std::optional<Convoluter> terminal_convoluter;
  std::optional<ConventionReport> convention_report;
  std::optional<EmptinessCertificate> certificate;
};

struct RunOptions {
  int max_steps = 64;
  BetaVPolicy beta_v = BetaVPolicy::SameAsH;
};

AlgorithmTrace run_algorithm(const MonodromyVector& v, RunOptions options = {});

}  // namespace midconv
