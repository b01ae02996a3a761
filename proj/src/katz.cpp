#include "midconv/katz.hpp"

#include <algorithm>
#include <functional>

#include "midconv/error.hpp"

namespace midconv {

std::string_view beta_v_policy_name(BetaVPolicy policy) {
  switch (policy) {
    case BetaVPolicy::SameAsH: return "same";
    case BetaVPolicy::Fresh: return "fresh";
    case BetaVPolicy::Explicit: return "explicit";
  }
  return "unknown";
}

BetaVPolicy parse_beta_v_policy(std::string_view name) {
  if (name == "same" || name == "same-as-h") return BetaVPolicy::SameAsH;
  if (name == "fresh") return BetaVPolicy::Fresh;
  if (name == "explicit") return BetaVPolicy::Explicit;
  throw Error(ErrorCode::ParseError, "unknown beta-v policy '" + std::string(name) + "'");
}

namespace {

GroupElement product(std::span<const GroupElement> xs, GroupMode mode) {
  GroupElement acc = GroupElement::identity(mode);
  for (const auto& x : xs) acc = combine(acc, x);
  return acc;
}

void require_shape(const Convoluter& beta, std::span<const EigDivisor> g) {
  if (beta.points() != g.size()) {
    throw Error(ErrorCode::SizeMismatch, "convoluter has " + std::to_string(beta.points()) +
                                             " points but the monodromy data has " + std::to_string(g.size()));
  }
  if (g.empty()) throw Error(ErrorCode::SizeMismatch, "empty monodromy data");
  long r = g.front().degree();
  for (const auto& gi : g) {
    if (gi.mode() != beta.mode) {
      throw Error(ErrorCode::ModeMismatch, "convoluter and monodromy data use different group modes");
    }
    if (gi.degree() != r) throw Error(ErrorCode::SizeMismatch, "divisors have unequal degrees");
  }
}

std::vector<long> h_inverse_multiplicities(const Convoluter& beta, std::span<const EigDivisor> g) {
  std::vector<long> m(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) m[i] = g[i].multiplicity(invert(beta.h[i]));
  return m;
}

std::string fresh_prefix(const std::string& prefix, std::size_t count, const std::set<std::string>& taken) {
  std::string p = prefix;
  auto collides = [&](const std::string& candidate) {
    for (std::size_t i = 1; i <= count; ++i) {
      if (taken.count(candidate + std::to_string(i))) return true;
    }
    return false;
  };
  while (collides(p)) p = "_" + p;
  return p;
}

}  // namespace

Convoluter Convoluter::from_h_and_v(std::vector<GroupElement> h, std::vector<GroupElement> v) {
  if (h.size() != v.size()) {
    throw Error(ErrorCode::SizeMismatch, "convoluter h and v lists differ in length");
  }
  if (h.empty()) throw Error(ErrorCode::InvalidInput, "convoluter needs at least one point");
  Convoluter beta;
  beta.mode = h.front().mode();
  for (const auto& x : h) {
    if (x.mode() != beta.mode) throw Error(ErrorCode::ModeMismatch, "convoluter entries use different modes");
  }
  for (const auto& x : v) {
    if (x.mode() != beta.mode) throw Error(ErrorCode::ModeMismatch, "convoluter entries use different modes");
  }
  beta.h = std::move(h);
  beta.v = std::move(v);
  beta.t = invert(product(beta.h, beta.mode));
  if (!is_identity(combine(product(beta.v, beta.mode), beta.t))) {
    throw Error(ErrorCode::InvalidInput,
                "convoluter relation violated: prod beta^V_i must equal prod beta^H_i (difference " +
                    combine(product(beta.v, beta.mode), beta.t).to_string() + ")");
  }
  beta.u.reserve(beta.h.size());
  for (std::size_t i = 0; i < beta.h.size(); ++i) {
    beta.u.push_back(combine(combine(beta.t, beta.h[i]), beta.v[i]));
  }
  return beta;
}

Convoluter Convoluter::same_as_h(std::vector<GroupElement> h) {
  auto v = h;
  return from_h_and_v(std::move(h), std::move(v));
}

Convoluter Convoluter::fresh(std::vector<GroupElement> h, const std::set<std::string>& taken,
                             const std::string& prefix) {
  if (h.empty()) throw Error(ErrorCode::InvalidInput, "convoluter needs at least one point");
  const GroupMode mode = h.front().mode();
  const std::size_t n = h.size();
  const std::string p = fresh_prefix(prefix, n, taken);
  std::vector<GroupElement> v(n);
  GroupElement acc = GroupElement::identity(mode);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    GroupElement s = GroupElement::generator(mode, p + std::to_string(i + 1));
    acc = combine(acc, s);
    v[i] = combine(h[i], s);
  }
  v[n - 1] = combine(h[n - 1], invert(acc));
  return from_h_and_v(std::move(h), std::move(v));
}

bool Convoluter::relations_hold() const {
  if (h.size() != v.size() || h.size() != u.size()) return false;
  if (!is_identity(combine(product(h, mode), t))) return false;
  if (!is_identity(combine(product(v, mode), t))) return false;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(u[i] == combine(combine(t, h[i]), v[i]))) return false;
  }
  return true;
}

Convoluter max_multiplicity_convoluter(const MonodromyVector& v, BetaVPolicy policy,
                                       const std::string& fresh_prefix_name) {
  std::vector<GroupElement> h;
  h.reserve(v.points());
  for (const auto& g : v.divisors()) h.push_back(invert(max_multiplicity(g).eigenvalue));
  switch (policy) {
    case BetaVPolicy::SameAsH:
      return Convoluter::same_as_h(std::move(h));
    case BetaVPolicy::Fresh:
      return Convoluter::fresh(std::move(h), v.generators(), fresh_prefix_name);
    case BetaVPolicy::Explicit:
      break;
  }
  throw Error(ErrorCode::InvalidInput, "the max-multiplicity convoluter cannot use an explicit beta^V list");
}

long defect(const Convoluter& beta, std::span<const EigDivisor> g) {
  require_shape(beta, g);
  const long n = static_cast<long>(g.size());
  const long r = g.front().degree();
  long total = 0;
  for (long m : h_inverse_multiplicities(beta, g)) total += m;
  return (n - 2) * r - total;
}

long defect(const Convoluter& beta, const MonodromyVector& v) { return defect(beta, std::span(v.divisors())); }

long defect(const MonodromyVector& v) {
  long total = 0;
  for (const auto& g : v.divisors()) total += max_multiplicity(g).multiplicity;
  return (static_cast<long>(v.points()) - 2) * v.rank() - total;
}

bool ConventionReport::chirhobeta_ok() const {
  return std::all_of(chirhobeta.begin(), chirhobeta.end(), [](const PointCheck& p) { return p.ok; });
}

bool ConventionReport::alphabetabeta_ok() const {
  return std::all_of(alphabetabeta.begin(), alphabetabeta.end(), [](const PointCheck& p) { return p.ok; });
}

bool ConventionReport::ok() const {
  if (de_rham) return diag_res_not_integer && alphabetabeta_ok();
  return chi_nontrivial && chirhobeta_ok();
}

std::string ConventionReport::describe_failure() const {
  auto point_failure = [](const std::vector<PointCheck>& checks, const std::string& name,
                          const std::string& what) -> std::string {
    for (const auto& p : checks) {
      if (p.ok) continue;
      std::string out = "convention " + name + " fails at point " + std::to_string(p.point + 1) + ": " + what;
      if (!p.offending.empty()) out += " for eigenvalue " + p.offending.front().to_string();
      return out;
    }
    return {};
  };
  if (de_rham) {
    if (!diag_res_not_integer) return "convention diagresnontriv fails: beta^T is an integer";
    return point_failure(alphabetabeta, "alphabetabeta",
                         "a + beta^H_i + beta^T is an integer or a + beta^H_i is a nonzero integer");
  }
  if (!chi_nontrivial) return "convention chinontriv fails: beta^T is trivial";
  return point_failure(chirhobeta, "chirhobeta", "beta^T * beta^H_i * a is trivial");
}

ConventionReport check_conventions(const Convoluter& beta, std::span<const EigDivisor> g, bool de_rham) {
  require_shape(beta, g);
  if (de_rham && beta.mode != GroupMode::Additive) {
    throw Error(ErrorCode::ModeMismatch, "de Rham conventions require additive mode");
  }
  ConventionReport report;
  report.de_rham = de_rham;
  report.chi_nontrivial = !is_identity(beta.t);
  for (std::size_t i = 0; i < g.size(); ++i) {
    PointCheck betti{i, true, {}};
    PointCheck dr{i, true, {}};
    const GroupElement shift = combine(beta.t, beta.h[i]);
    for (const auto& [a, m] : g[i].entries()) {
      const GroupElement twisted = combine(shift, a);
      if (is_identity(twisted)) {
        betti.ok = false;
        betti.offending.push_back(a);
      }
      if (de_rham) {
        const bool first = is_integer_additive(twisted);
        const GroupElement local = combine(a, beta.h[i]);
        const bool second = is_integer_additive(local) && !is_identity(local);
        if (first || second) {
          dr.ok = false;
          dr.offending.push_back(a);
        }
      }
    }
    report.chirhobeta.push_back(std::move(betti));
    if (de_rham) report.alphabetabeta.push_back(std::move(dr));
  }
  if (de_rham) report.diag_res_not_integer = !is_integer_additive(beta.t);
  return report;
}

ConventionReport check_conventions(const Convoluter& beta, const MonodromyVector& v, bool de_rham) {
  return check_conventions(beta, std::span(v.divisors()), de_rham);
}

std::string_view kappa_status_name(KappaStatus status) {
  switch (status) {
    case KappaStatus::Effective: return "effective";
    case KappaStatus::Noneffective: return "noneffective";
    case KappaStatus::DegenerateRank: return "degenerate-rank";
  }
  return "unknown";
}

MonodromyVector KappaResult::vector() const {
  if (status != KappaStatus::Effective) {
    throw Error(ErrorCode::PreconditionViolation,
                "Katz transform is " + std::string(kappa_status_name(status)) + "; no monodromy vector");
  }
  return MonodromyVector(divisors);
}

EigDivisor kappa_local(const Convoluter& beta, std::span<const EigDivisor> g, std::size_t i) {
  const long d = defect(beta, g);
  if (i >= g.size()) throw Error(ErrorCode::SizeMismatch, "point index out of range");
  const GroupElement h_inv = invert(beta.h[i]);
  EigDivisor out(beta.mode);
  out.add(beta.v[i], g[i].multiplicity(h_inv) + d);
  for (const auto& [a, m] : g[i].entries()) {
    if (a == h_inv) continue;
    out.add(combine(a, beta.u[i]), m);
  }
  return out;
}

KappaResult kappa_formal(const Convoluter& beta, std::span<const EigDivisor> g, KappaOptions options) {
  require_shape(beta, g);
  if (beta.mode == GroupMode::Circle) {
    throw Error(ErrorCode::ModeMismatch, "the Katz transform is not defined on circle-mode weights");
  }
  KappaResult result;
  result.conventions = check_conventions(beta, g, beta.mode == GroupMode::Additive);
  if (options.check_conventions && !result.conventions.ok()) {
    throw Error(ErrorCode::ConventionViolation, result.conventions.describe_failure());
  }
  result.defect = defect(beta, g);
  const long r = g.front().degree();
  result.rank = r + result.defect;
  const auto m = h_inverse_multiplicities(beta, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    result.divisors.push_back(kappa_local(beta, g, i));
    result.new_eigenvalue_dims.push_back(m[i] + result.defect);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!result.divisors[i].is_effective()) {
      result.status = KappaStatus::Noneffective;
      long lhs = 0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (j != i) lhs += r - m[j];
      }
      result.certificate = EmptinessCertificate{i, lhs, r, m[i] + result.defect};
      break;
    }
  }
  if (result.status == KappaStatus::Effective && result.rank == 0) result.status = KappaStatus::DegenerateRank;
  return result;
}

KappaResult kappa(const Convoluter& beta, const MonodromyVector& v, KappaOptions options) {
  return kappa_formal(beta, std::span(v.divisors()), options);
}

KappaResult kappa_de_rham(const Convoluter& beta, const MonodromyVector& v, KappaOptions options) {
  if (beta.mode != GroupMode::Additive || v.mode() != GroupMode::Additive) {
    throw Error(ErrorCode::ModeMismatch, "the de Rham transform works on additive residue data");
  }
  KappaResult result = kappa(beta, v, options);
  const long n = static_cast<long>(v.points());
  const long r = v.rank();
  for (std::size_t i = 0; i < v.points(); ++i) {
    long others = 0;
    for (std::size_t j = 0; j < v.points(); ++j) {
      if (j != i) others += v[j].multiplicity(invert(beta.h[j]));
    }
    const long d_i = (n - 2) * r - others;
    if (d_i != result.new_eigenvalue_dims[i]) {
      throw Error(ErrorCode::InternalError, "new-eigenvalue block dimension mismatch at point " +
                                                std::to_string(i + 1));
    }
  }
  return result;
}

Convoluter partner(const Convoluter& beta) {
  Convoluter gamma;
  gamma.mode = beta.mode;
  gamma.t = invert(beta.t);
  for (std::size_t i = 0; i < beta.points(); ++i) {
    gamma.h.push_back(invert(beta.v[i]));
    gamma.v.push_back(invert(beta.h[i]));
    gamma.u.push_back(invert(beta.u[i]));
  }
  if (!gamma.relations_hold()) {
    throw Error(ErrorCode::InternalError, "partner convoluter violates the convoluter relations");
  }
  return gamma;
}

bool check_involution(const Convoluter& beta, const MonodromyVector& v) {
  const KappaResult forward = kappa(beta, v);
  const KappaResult back = kappa_formal(partner(beta), forward.divisors);
  return back.divisors == v.divisors();
}

bool is_one_generic(const MonodromyVector& v, std::size_t budget) {
  double combos = 1.0;
  for (const auto& g : v.divisors()) combos *= static_cast<double>(g.support_size());
  if (combos > static_cast<double>(budget)) {
    throw Error(ErrorCode::SearchBudgetExceeded,
                "1-genericity search over " + std::to_string(static_cast<long long>(combos)) +
                    " eigenvalue tuples exceeds the budget of " + std::to_string(budget));
  }
  const GroupMode mode = v.mode();
  auto is_relation = [mode](const GroupElement& x) {
    return mode == GroupMode::Additive ? is_integer_additive(x) : is_identity(x);
  };
  std::function<bool(std::size_t, const GroupElement&)> search = [&](std::size_t i, const GroupElement& acc) {
    if (i == v.points()) return is_relation(acc);
    for (const auto& [a, m] : v[i].entries()) {
      if (search(i + 1, combine(acc, a))) return true;
    }
    return false;
  };
  return !search(0, GroupElement::identity(mode));
}

std::optional<EmptinessCertificate> detect_empty(const Convoluter& beta, const MonodromyVector& v) {
  KappaResult kr = kappa(beta, v, KappaOptions{.check_conventions = false});
  const long r = v.rank();
  std::optional<EmptinessCertificate> first;
  for (std::size_t i = 0; i < v.points(); ++i) {
    long lhs = 0;
    for (std::size_t j = 0; j < v.points(); ++j) {
      if (j != i) lhs += r - v[j].multiplicity(invert(beta.h[j]));
    }
    const bool by_criterion = lhs < r;
    const bool by_kappa = !kr.divisors[i].is_effective();
    // Without the chi-rho-beta condition a shifted eigenvalue can land on
    // beta^V_i and absorb the negative coefficient, so only compare then.
    if (kr.conventions.chirhobeta[i].ok && by_criterion != by_kappa) {
      throw Error(ErrorCode::InternalError, "emptiness criterion disagrees with the Katz transform at point " +
                                                std::to_string(i + 1));
    }
    if (by_kappa && !first) first = EmptinessCertificate{i, lhs, r, kr.new_eigenvalue_dims[i]};
  }
  return first;
}

std::string_view terminal_status_name(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::AllDiagonal: return "AllDiagonal";
    case TerminalStatus::EmptyNoneffective: return "EmptyNoneffective";
    case TerminalStatus::PositiveDefect: return "PositiveDefect";
    case TerminalStatus::ConventionFailure: return "ConventionFailure";
  }
  return "unknown";
}

TerminalStatus parse_terminal_status(std::string_view name) {
  for (auto s : {TerminalStatus::AllDiagonal, TerminalStatus::EmptyNoneffective, TerminalStatus::PositiveDefect,
                 TerminalStatus::ConventionFailure}) {
    if (terminal_status_name(s) == name) return s;
  }
  throw Error(ErrorCode::ParseError, "unknown terminal status '" + std::string(name) + "'");
}

AlgorithmTrace run_algorithm(const MonodromyVector& v, RunOptions options) {
  if (v.mode() == GroupMode::Circle) {
    throw Error(ErrorCode::ModeMismatch, "the rank-reduction algorithm runs in multiplicative or additive mode");
  }
  const bool de_rham = v.mode() == GroupMode::Additive;
  AlgorithmTrace trace{.steps = {}, .status = TerminalStatus::AllDiagonal, .final_vector = v, .final_defect = 0,
                       .terminal_convoluter = {}, .convention_report = {}, .certificate = {}};
  MonodromyVector current = v;
  for (;;) {
    trace.final_defect = defect(current);
    if (is_all_diagonal(current)) {
      trace.status = TerminalStatus::AllDiagonal;
      break;
    }
    if (static_cast<int>(trace.steps.size()) >= options.max_steps) {
      throw Error(ErrorCode::MaxStepsExceeded,
                  "algorithm did not terminate within " + std::to_string(options.max_steps) + " steps");
    }
    const std::string prefix = "s" + std::to_string(trace.steps.size() + 1) + "_";
    Convoluter beta = max_multiplicity_convoluter(current, options.beta_v, prefix);
    const long d = defect(beta, current);
    if (d >= 0) {
      trace.status = TerminalStatus::PositiveDefect;
      break;
    }
    ConventionReport forward = check_conventions(beta, current, de_rham);
    if (!forward.ok()) {
      trace.status = TerminalStatus::ConventionFailure;
      trace.terminal_convoluter = beta;
      trace.convention_report = forward;
      break;
    }
    KappaResult kr = kappa(beta, current, KappaOptions{.check_conventions = false});
    ConventionReport backward = check_conventions(partner(beta), std::span(kr.divisors), de_rham);
    if (!backward.ok()) {
      trace.status = TerminalStatus::ConventionFailure;
      trace.terminal_convoluter = partner(beta);
      trace.convention_report = backward;
      break;
    }
    if (kr.status != KappaStatus::Effective) {
      trace.status = TerminalStatus::EmptyNoneffective;
      trace.terminal_convoluter = beta;
      trace.certificate = kr.certificate;
      break;
    }
    MonodromyVector next = kr.vector();
    trace.steps.push_back(KatzStep{current, beta, d, next});
    current = next;
    trace.final_vector = current;
  }
  return trace;
}

}  // namespace midconv
