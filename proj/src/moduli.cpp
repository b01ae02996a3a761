#include "midconv/moduli.hpp"

#include <algorithm>

#include "midconv/error.hpp"
#include "midconv/katz.hpp"

namespace midconv {

ClassInvariants class_invariants(const std::vector<long>& partition) {
  ClassInvariants out;
  long r = 0;
  long squares = 0;
  for (long m : partition) {
    r += m;
    squares += m * m;
    out.nu = std::max(out.nu, m);
  }
  out.dim_class = r * r - squares;
  out.superdefect = out.dim_class - r * (r - out.nu);
  return out;
}

DimensionReport dimension_report(const MonodromyVector& v) {
  DimensionReport report;
  report.r = v.rank();
  report.n = static_cast<long>(v.points());
  long class_sum = 0;
  for (const auto& g : v.divisors()) {
    ClassInvariants inv = class_invariants(g.partition());
    report.class_dims.push_back(inv.dim_class);
    report.superdefects.push_back(inv.superdefect);
    report.total_superdefect += inv.superdefect;
    class_sum += inv.dim_class;
    if (inv.superdefect < 0) throw Error(ErrorCode::InternalError, "negative superdefect");
  }
  report.defect = defect(v);
  report.naive_dim = class_sum - 2 * report.r * report.r + 2;
  const long via_defect = 2 + report.r * report.defect + report.total_superdefect;
  if (via_defect != report.naive_dim) {
    throw Error(ErrorCode::InternalError, "dimension count disagrees with 2 + r*defect + superdefect");
  }
  report.mid_h1_end = report.naive_dim;
  return report;
}

std::string_view dim2_family_name(Dim2Family family) {
  switch (family) {
    case Dim2Family::QuadDD: return "Quad_dd_x4";
    case Dim2Family::TriDDD: return "Tri_ddd_x3";
    case Dim2Family::Tri2D2D_D4_D4: return "Tri_2d2d_d4_d4";
    case Dim2Family::Tri3D3D_2D3_D6: return "Tri_3d3d_2d3_d6";
  }
  return "unknown";
}

Dim2Family parse_dim2_family(std::string_view name) {
  for (auto f : {Dim2Family::QuadDD, Dim2Family::TriDDD, Dim2Family::Tri2D2D_D4_D4, Dim2Family::Tri3D3D_2D3_D6}) {
    if (dim2_family_name(f) == name) return f;
  }
  throw Error(ErrorCode::ParseError, "unknown dimension-two family '" + std::string(name) + "'");
}

namespace {

std::vector<long> equal_parts(long count, long size) { return std::vector<long>(count, size); }

}  // namespace

std::optional<Dim2Match> match_dim2_family(const PMV& pmv) {
  std::vector<std::vector<long>> points;
  for (auto p : pmv) {
    std::sort(p.begin(), p.end(), std::greater<>());
    if (p.size() > 1) points.push_back(std::move(p));
  }
  if (points.empty()) return std::nullopt;
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a > b; });
  long r = 0;
  for (long m : points.front()) r += m;

  auto matches = [&](std::vector<std::vector<long>> shape) {
    std::sort(shape.begin(), shape.end(),
              [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a > b; });
    return shape == points;
  };
  if (points.size() == 4 && r % 2 == 0) {
    long d = r / 2;
    if (matches({equal_parts(2, d), equal_parts(2, d), equal_parts(2, d), equal_parts(2, d)})) {
      return Dim2Match{Dim2Family::QuadDD, d};
    }
  }
  if (points.size() != 3) return std::nullopt;
  if (r % 3 == 0) {
    long d = r / 3;
    if (matches({equal_parts(3, d), equal_parts(3, d), equal_parts(3, d)})) return Dim2Match{Dim2Family::TriDDD, d};
  }
  if (r % 4 == 0) {
    long d = r / 4;
    if (matches({equal_parts(2, 2 * d), equal_parts(4, d), equal_parts(4, d)})) {
      return Dim2Match{Dim2Family::Tri2D2D_D4_D4, d};
    }
  }
  if (r % 6 == 0) {
    long d = r / 6;
    if (matches({equal_parts(2, 3 * d), equal_parts(3, 2 * d), equal_parts(6, d)})) {
      return Dim2Match{Dim2Family::Tri3D3D_2D3_D6, d};
    }
  }
  return std::nullopt;
}

std::optional<Dim2Match> classify_dim2(const MonodromyVector& v) {
  const long d = defect(v);
  if (d < 0) {
    throw Error(ErrorCode::PreconditionViolation,
                "dimension-two classification needs defect >= 0, got " + std::to_string(d));
  }
  auto match = match_dim2_family(pmv(v));
  const bool is_dim2 = dimension_report(v).naive_dim == 2;
  if (match.has_value() != is_dim2) {
    throw Error(ErrorCode::InternalError, "dimension-two family match disagrees with the dimension count");
  }
  return match;
}

long middle_h1_dim(const MonodromyVector& v) {
  const GroupElement one = GroupElement::identity(v.mode());
  long cofix = 0;
  bool has_free_point = false;
  for (const auto& g : v.divisors()) {
    long m = g.multiplicity(one);
    cofix += m;
    if (m == 0) has_free_point = true;
  }
  if (!has_free_point) {
    throw Error(ErrorCode::NoFixedVectorFreePoint,
                "every point has the eigenvalue 1; the middle cohomology formula does not apply");
  }
  return v.rank() * (static_cast<long>(v.points()) - 2) - cofix;
}

}  // namespace midconv
