#include "midconv/higgs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "midconv/error.hpp"
#include "midconv/katz.hpp"
#include "midconv/moduli.hpp"

namespace midconv {

namespace {

std::map<Rational, long> weight_multiplicities(const EigDivisor& g) {
  if (g.mode() != GroupMode::Circle) {
    throw Error(ErrorCode::ModeMismatch, "arrangements need circle-mode weights");
  }
  if (!g.is_effective() || g.empty()) throw Error(ErrorCode::InvalidInput, "divisor must be effective and nonzero");
  std::map<Rational, long> out;
  for (const auto& [alpha, m] : g.entries()) out[alpha.value().constant()] = m;
  return out;
}

// Parts {alpha : m(alpha) >= j}, j = 1..p.
std::vector<std::vector<Rational>> level_sets(const EigDivisor& g) {
  const auto mults = weight_multiplicities(g);
  long p = 0;
  for (const auto& [a, m] : mults) p = std::max(p, m);
  std::vector<std::vector<Rational>> parts(p);
  for (long j = 1; j <= p; ++j) {
    for (const auto& [a, m] : mults) {
      if (m >= j) parts[j - 1].push_back(a);
    }
  }
  return parts;
}

Arrangement from_parts(const std::vector<std::vector<Rational>>& parts, std::size_t point) {
  Arrangement arr;
  arr.point = point;
  for (const auto& part : parts) arr.weights.insert(arr.weights.end(), part.begin(), part.end());
  return arr;
}

long mod_floor(long x, long r) { return ((x % r) + r) % r; }

long to_long(const Rational& q) {
  if (!is_integral(q)) throw Error(ErrorCode::InternalError, "expected an integer, got " + q.get_str());
  return q.get_num().get_si();
}

Rational total_weight(const std::vector<Arrangement>& arrs) {
  Rational total = 0;
  for (const auto& arr : arrs) {
    for (const auto& a : arr.weights) total += a;
  }
  return total;
}

long total_descent_weight(const std::vector<Arrangement>& arrs) {
  long total = 0;
  for (const auto& arr : arrs) total += arr.descent_weight();
  return total;
}

std::string join_rationals(const std::vector<Rational>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += " ";
    out += xs[i].get_str();
  }
  return out;
}

}  // namespace

std::vector<long> Arrangement::descents() const {
  std::vector<long> out;
  const long r = size();
  for (long t = 1; t <= r; ++t) {
    const Rational& cur = weights[t - 1];
    const Rational& next = weights[t % r];
    if (cur >= next) out.push_back(t);
  }
  return out;
}

std::vector<std::vector<Rational>> Arrangement::parts() const {
  const auto d = descents();
  const long r = size();
  std::vector<std::vector<Rational>> out;
  if (d.empty()) {
    out.push_back(weights);
    return out;
  }
  std::vector<char> is_descent(r + 1, 0);
  for (long t : d) is_descent[t] = 1;
  const long start = d.back() % r;
  std::vector<Rational> part;
  for (long s = 0; s < r; ++s) {
    const long pos = (start + s) % r;
    part.push_back(weights[pos]);
    if (is_descent[pos + 1]) {
      out.push_back(std::move(part));
      part.clear();
    }
  }
  return out;
}

long Arrangement::descent_weight() const {
  long total = 0;
  for (long t : descents()) total += size() - t;
  return total;
}

EigDivisor Arrangement::divisor() const {
  EigDivisor g(GroupMode::Circle);
  for (const auto& a : weights) g.add(GroupElement::constant(GroupMode::Circle, a), 1);
  return g;
}

Arrangement good_arrangement(const EigDivisor& g, std::size_t point) {
  Arrangement arr = from_parts(level_sets(g), point);
  if (arr.descent_count() != max_multiplicity(g).multiplicity) {
    throw Error(ErrorCode::InternalError, "greedy arrangement is not good");
  }
  return arr;
}

Arrangement ascending_arrangement(const EigDivisor& g, std::size_t point) {
  auto parts = level_sets(g);
  std::reverse(parts.begin(), parts.end());
  Arrangement arr = from_parts(parts, point);
  if (arr.descent_count() != max_multiplicity(g).multiplicity) {
    throw Error(ErrorCode::InternalError, "ascending arrangement is not good");
  }
  return arr;
}

Arrangement rotated(const Arrangement& arr, long steps) {
  Arrangement out = arr;
  if (arr.weights.empty()) return out;
  const long s = mod_floor(steps, arr.size());
  std::rotate(out.weights.begin(), out.weights.begin() + s, out.weights.end());
  return out;
}

namespace {

std::optional<Arrangement> try_move(const Arrangement& arr, const Rational& alpha) {
  const auto d = arr.descents();
  if (d.empty() || d.back() != arr.size()) return std::nullopt;
  auto parts = arr.parts();
  auto contains = [&](const std::vector<Rational>& part) {
    return std::find(part.begin(), part.end(), alpha) != part.end();
  };
  for (std::size_t j = 0; j + 1 < parts.size(); ++j) {
    if (contains(parts[j]) || !contains(parts[j + 1])) continue;
    parts[j].push_back(alpha);
    std::sort(parts[j].begin(), parts[j].end());
    parts[j + 1].erase(std::find(parts[j + 1].begin(), parts[j + 1].end(), alpha));
    Arrangement out = from_parts(parts, arr.point);
    if (out.descent_count() != arr.descent_count()) {
      throw Error(ErrorCode::InternalError, "partial move changed the descent count");
    }
    return out;
  }
  return std::nullopt;
}

}  // namespace

Arrangement partial_move(const Arrangement& arr, const Rational& alpha) {
  auto out = try_move(arr, alpha);
  if (!out) {
    throw Error(ErrorCode::NoMovableEigenvalue,
                "no part containing " + alpha.get_str() + " follows a part without it at point " +
                    std::to_string(arr.point + 1));
  }
  return *out;
}

std::optional<Rational> movable_eigenvalue(const Arrangement& arr) {
  std::vector<Rational> values = arr.weights;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (const auto& a : values) {
    if (try_move(arr, a)) return a;
  }
  return std::nullopt;
}

std::vector<long> taus(const std::vector<Arrangement>& arrangements) {
  if (arrangements.empty()) return {};
  const long r = arrangements.front().size();
  std::vector<long> tau(r, 0);
  long total_parts = 0;
  for (const auto& arr : arrangements) {
    if (arr.size() != r) throw Error(ErrorCode::SizeMismatch, "arrangements have different lengths");
    for (long t : arr.descents()) ++tau[t - 1];
    total_parts += arr.descent_count();
  }
  if (std::accumulate(tau.begin(), tau.end(), 0L) != total_parts) {
    throw Error(ErrorCode::InternalError, "tau counts do not add up to the number of descents");
  }
  return tau;
}

std::vector<long> derive_k(const std::vector<long>& tau, const std::vector<long>& z, long k1, long n) {
  if (tau.size() != z.size() || tau.empty()) throw Error(ErrorCode::SizeMismatch, "tau and z must both have r entries");
  const long r = static_cast<long>(tau.size());
  long drift = r * (2 - n);
  for (long j = 0; j < r; ++j) drift += z[j] + tau[j];
  if (drift != 0) {
    throw Error(ErrorCode::CyclicClosureViolation,
                "k_{r+1} differs from k_1 by " + std::to_string(drift) + "; sum z must equal the defect");
  }
  std::vector<long> k(r);
  k[0] = k1;
  for (long j = 0; j + 1 < r; ++j) k[j + 1] = k[j] + z[j] + tau[j] + 2 - n;
  return k;
}

Rational parabolic_degree(const HiggsData& data) {
  Rational total = total_weight(data.arrangements);
  for (long kj : data.k) total += kj;
  return total;
}

DegreeClosedForms degree_closed_forms(const HiggsData& data) {
  DegreeClosedForms out;
  out.direct = parabolic_degree(data);
  const long r = data.rank();
  const long n = data.points();
  const Rational weights = total_weight(data.arrangements);
  long printed_sum = 0;
  for (long j = 1; j <= r; ++j) printed_sum += j * (r - j) * (2 - n);
  long variable = r * (data.k.empty() ? 0 : data.k.front()) + total_descent_weight(data.arrangements);
  for (long j = 1; j <= r; ++j) variable += (r - j) * data.z[j - 1];
  out.printed = weights + printed_sum + variable;
  out.derived = weights + (2 - n) * r * (r - 1) / 2 + variable;
  out.printed_matches = out.printed == out.direct;
  out.derived_matches = out.derived == out.direct;
  return out;
}

HiggsData construct(const MonodromyVector& v) {
  if (v.mode() != GroupMode::Circle) throw Error(ErrorCode::ModeMismatch, "Higgs construction needs circle-mode weights");
  const long r = v.rank();
  const long n = static_cast<long>(v.points());
  Rational weight_sum = 0;
  for (const auto& g : v.divisors()) {
    for (const auto& [alpha, m] : g.entries()) weight_sum += m * alpha.value().constant();
  }
  if (!is_integral(weight_sum)) {
    throw Error(ErrorCode::DegreeNotIntegral, "total weight " + weight_sum.get_str() + " is not an integer");
  }
  const DimensionReport dims = dimension_report(v);
  const long delta = dims.defect;
  if (delta < 0) {
    throw Error(ErrorCode::PreconditionDefectNegative, "defect " + std::to_string(delta) + " is negative");
  }
  if (delta == 0 && dims.total_superdefect == 0) {
    throw Error(ErrorCode::PreconditionDim2,
                "defect and superdefect both vanish; the moduli space has dimension two");
  }
  const long base = to_long(weight_sum) + (2 - n) * r * (r - 1) / 2;

  HiggsData data;
  data.z.assign(r, 0);
  long k1 = 0;
  if (delta > 0) {
    for (std::size_t i = 0; i < v.points(); ++i) data.arrangements.push_back(good_arrangement(v[i], i));
    const long fixed = base + total_descent_weight(data.arrangements);
    bool found = false;
    for (long jp = r; jp >= 1; --jp) {
      const long total = fixed + (r - jp);
      if (mod_floor(total, r) != 0) continue;
      if (jp == r) {
        data.z[r - 1] = delta;
      } else {
        data.z[jp - 1] = 1;
        data.z[r - 1] = delta - 1;
      }
      k1 = -total / r;
      found = true;
      break;
    }
    if (!found) throw Error(ErrorCode::InternalError, "no placement of the extra zeros reaches degree zero");
    data.method = "extra-zeros";
  } else {
    for (std::size_t i = 0; i < v.points(); ++i) data.arrangements.push_back(ascending_arrangement(v[i], i));
    long total = base + total_descent_weight(data.arrangements);
    long moves = 0;
    while (mod_floor(total, r) != 0 && moves < r - 1) {
      bool moved = false;
      for (auto& arr : data.arrangements) {
        if (auto alpha = movable_eigenvalue(arr)) {
          arr = partial_move(arr, *alpha);
          moved = true;
          break;
        }
      }
      if (!moved) break;
      --total;
      ++moves;
    }
    data.method = "partial-moves";
    if (mod_floor(total, r) != 0) {
      // Rotations shift each point's descent weight; search residues point by point.
      const std::size_t npts = data.arrangements.size();
      std::vector<std::vector<long>> choice(npts + 1, std::vector<long>(r, -1));
      std::vector<std::vector<char>> reach(npts + 1, std::vector<char>(r, 0));
      reach[0][mod_floor(total, r)] = 1;
      for (std::size_t i = 0; i < npts; ++i) {
        const long w0 = data.arrangements[i].descent_weight();
        for (long res = 0; res < r; ++res) {
          if (!reach[i][res]) continue;
          for (long s = 0; s < r; ++s) {
            const long next = mod_floor(res + rotated(data.arrangements[i], s).descent_weight() - w0, r);
            if (!reach[i + 1][next]) {
              reach[i + 1][next] = 1;
              choice[i + 1][next] = res * r + s;
            }
          }
        }
      }
      if (!reach[npts][0]) {
        throw Error(ErrorCode::InternalError,
                    "anomaly: no good arrangement found with parabolic degree divisible by the rank");
      }
      long res = 0;
      for (std::size_t i = npts; i > 0; --i) {
        const long packed = choice[i][res];
        const long s = packed % r;
        res = packed / r;
        data.arrangements[i - 1] = rotated(data.arrangements[i - 1], s);
      }
      total = base + total_descent_weight(data.arrangements);
      data.method = "partial-moves+rotations";
    }
    k1 = -total / r;
  }
  data.tau = taus(data.arrangements);
  data.k = derive_k(data.tau, data.z, k1, n);
  if (parabolic_degree(data) != 0) {
    throw Error(ErrorCode::InternalError, "constructed bundle has degree " + parabolic_degree(data).get_str());
  }
  return data;
}

bool HiggsVerification::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const HiggsCheck& c) { return c.ok; });
}

const HiggsCheck* HiggsVerification::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

HiggsVerification verify_higgs(const HiggsData& data, const MonodromyVector& v) {
  HiggsVerification out;
  const long n = static_cast<long>(v.points());
  const long r = v.rank();
  auto add = [&](std::string name, bool ok, std::string detail) {
    out.checks.push_back(HiggsCheck{std::move(name), ok, std::move(detail)});
  };
  bool shapes = data.points() == n && data.rank() == r && static_cast<long>(data.z.size()) == r &&
                static_cast<long>(data.tau.size()) == r;
  for (const auto& arr : data.arrangements) shapes = shapes && arr.size() == r;
  add("shape", shapes, shapes ? "" : "sizes of arrangements, k, z or tau do not match the vector");
  if (!shapes) {
    out.degree = parabolic_degree(data);
    return out;
  }

  bool weights_ok = true;
  bool good_ok = true;
  std::string weights_detail;
  for (long i = 0; i < n; ++i) {
    const auto& arr = data.arrangements[i];
    if (!(arr.divisor() == v[i])) {
      weights_ok = false;
      weights_detail = "point " + std::to_string(i + 1) + " weights differ from the divisor";
    }
    if (arr.descent_count() != max_multiplicity(v[i]).multiplicity) good_ok = false;
  }
  add("weights", weights_ok, weights_detail);
  add("good-arrangements", good_ok, good_ok ? "" : "descent count differs from the maximal multiplicity");

  const auto tau = taus(data.arrangements);
  add("tau", tau == data.tau, tau == data.tau ? "" : "tau does not match the arrangements");

  const bool z_nonneg = std::all_of(data.z.begin(), data.z.end(), [](long x) { return x >= 0; });
  add("theta-exists", z_nonneg, z_nonneg ? "" : "some z_j is negative, so theta^j vanishes");

  bool relation = true;
  bool bound = true;
  std::string bound_detail;
  for (long j = 0; j < r; ++j) {
    const long kn = data.k[(j + 1) % r];
    if (data.z[j] != kn - (data.tau[j] + data.k[j] + 2 - n)) relation = false;
    const long rhs = kn - data.k[j] + n - 2;
    const bool holds = tau[j] <= rhs;
    const bool equality = tau[j] == rhs;
    if (!holds || equality != (data.z[j] == 0)) {
      bound = false;
      bound_detail = "map bound fails at j = " + std::to_string(j + 1);
    }
  }
  add("z-relation", relation, relation ? "" : "z_j != k_{j+1} - (tau_j + k_j + 2 - n)");
  add("map-bounds", bound, bound_detail);

  const long delta = defect(v);
  const long zsum = std::accumulate(data.z.begin(), data.z.end(), 0L);
  add("z-sum", zsum == delta, "sum z = " + std::to_string(zsum) + ", defect = " + std::to_string(delta));

  out.degree = parabolic_degree(data);
  add("degree", out.degree == 0, out.degree.get_str());
  return out;
}

std::vector<std::string> sawtooth(const HiggsData& data) {
  std::vector<std::string> lines;
  for (const auto& arr : data.arrangements) {
    std::string line = "q" + std::to_string(arr.point + 1) + ":";
    bool first = true;
    for (const auto& part : arr.parts()) {
      line += first ? " " : " | ";
      first = false;
      line += join_rationals(part);
    }
    lines.push_back(std::move(line));
  }
  for (long j = 0; j < data.rank(); ++j) {
    std::ostringstream out;
    out << "E^" << j + 1 << " = [" << data.k[j] << ";";
    for (const auto& arr : data.arrangements) out << " " << arr.weights[j].get_str();
    out << "]";
    if (j < static_cast<long>(data.z.size())) out << "  z=" << data.z[j];
    lines.push_back(out.str());
  }
  return lines;
}

}  // namespace midconv
