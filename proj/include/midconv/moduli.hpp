#pragma once

// Integer invariants of the moduli spaces of local systems with prescribed
// semisimple local monodromy.

#include <optional>
#include <string>
#include <vector>

#include "midconv/divisors.hpp"

namespace midconv {

struct ClassInvariants {
  /// r^2 - sum m^2
  long dim_class = 0;
  /// largest multiplicity
  long nu = 0;
  /// dim_class - r (r - nu)
  long superdefect = 0;
};

ClassInvariants class_invariants(const std::vector<long>& partition);

struct DimensionReport {
  long r = 0;
  long n = 0;
  std::vector<long> class_dims;
  long naive_dim = 0;
  long defect = 0;
  std::vector<long> superdefects;
  long total_superdefect = 0;
  /// Dimension of the middle H^1 of End; equals naive_dim at an irreducible point.
  long mid_h1_end = 0;
  /// The formulas describe the moduli space only when its stable locus is
  /// nonempty, which is not checked.
  bool assumes_stable_nonempty = true;

  friend bool operator==(const DimensionReport&, const DimensionReport&) = default;
};

DimensionReport dimension_report(const MonodromyVector& v);

enum class Dim2Family { QuadDD, TriDDD, Tri2D2D_D4_D4, Tri3D3D_2D3_D6 };

std::string_view dim2_family_name(Dim2Family family);
Dim2Family parse_dim2_family(std::string_view name);

struct Dim2Match {
  Dim2Family family;
  long d = 1;

  friend bool operator==(const Dim2Match&, const Dim2Match&) = default;
};

/// Matches a PMV against the four dimension-two shapes up to reordering of
/// points. Points with a single part (scalar monodromy) are ignored.
std::optional<Dim2Match> match_dim2_family(const PMV& pmv);

/// Requires defect >= 0 (PreconditionViolation otherwise).
std::optional<Dim2Match> classify_dim2(const MonodromyVector& v);

/// r (n-2) - sum_i m_i(1). Requires a point without the identity eigenvalue.
long middle_h1_dim(const MonodromyVector& v);

}  // namespace midconv
