#include "midconv/homology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "midconv/error.hpp"

namespace midconv {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

double scale_of(const MatrixXcd& m) { return std::max(1.0, m.norm()); }

void require_point(const NumericInstance& inst, std::size_t k) {
  if (k >= inst.n()) throw Error(ErrorCode::SizeMismatch, "point index out of range");
}

MatrixXcd twisted(const NumericInstance& inst, std::size_t i) { return inst.b[i] * inst.M[i]; }

Word reversed_inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& letter : out) letter = -letter;
  return out;
}

// alpha_{k+1} ... alpha_n alpha_1 ... alpha_k, i.e. delta_k^{-1}.
Word delta_inverse_word(std::size_t n, std::size_t k) {
  Word w;
  for (std::size_t i = k + 1; i < n; ++i) w.push_back(static_cast<int>(i) + 1);
  for (std::size_t i = 0; i <= k; ++i) w.push_back(static_cast<int>(i) + 1);
  return w;
}

std::vector<cd> repeated(cd value, long count) { return std::vector<cd>(std::max(0L, count), value); }

}  // namespace

void NumericInstance::validate() const {
  if (M.size() < 3) throw Error(ErrorCode::InvalidInput, "a numeric instance needs at least 3 points");
  const long rank = r();
  if (rank < 1) throw Error(ErrorCode::InvalidInput, "matrices must be at least 1x1");
  if (b.size() != M.size() || w.size() != M.size()) {
    throw Error(ErrorCode::SizeMismatch, "b and w must have one entry per point");
  }
  MatrixXcd prod = MatrixXcd::Identity(rank, rank);
  for (const auto& m : M) {
    if (m.rows() != rank || m.cols() != rank) throw Error(ErrorCode::SizeMismatch, "matrices must be r x r");
    prod = prod * m;
  }
  const double gap = (prod - MatrixXcd::Identity(rank, rank)).norm();
  if (gap > tol) {
    throw Error(ErrorCode::InvalidInput,
                "product of the monodromy matrices differs from the identity by " + std::to_string(gap));
  }
  cd prod_b = 1.0;
  cd prod_w = 1.0;
  for (std::size_t i = 0; i < M.size(); ++i) {
    prod_b *= b[i];
    prod_w *= w[i];
  }
  if (std::abs(chi * prod_b - 1.0) > tol) {
    throw Error(ErrorCode::InvalidInput, "chi * prod b_i must equal 1");
  }
  if (std::abs(prod_w - prod_b) > tol) throw Error(ErrorCode::InvalidInput, "prod w_i must equal prod b_i");
}

Word delta_word(std::size_t n, std::size_t k) { return reversed_inverse(delta_inverse_word(n, k)); }

Word braid_image_word(std::size_t n, std::size_t k) {
  Word w = delta_inverse_word(n, k);
  w.push_back(static_cast<int>(k) + 1);
  for (int letter : delta_word(n, k)) w.push_back(letter);
  return w;
}

MatrixXcd boundary_matrix(const NumericInstance& inst) {
  const long r = inst.r();
  const long n = static_cast<long>(inst.n());
  MatrixXcd d(r, n * r);
  for (long i = 0; i < n; ++i) {
    d.middleCols(i * r, r) = twisted(inst, i) - MatrixXcd::Identity(r, r);
  }
  return d;
}

VectorXcd expand_word(const NumericInstance& inst, const Word& word, const VectorXcd& v) {
  const long r = inst.r();
  VectorXcd out = VectorXcd::Zero(static_cast<long>(inst.n()) * r);
  VectorXcd cur = v;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const int letter = *it;
    if (letter == 0 || static_cast<std::size_t>(std::abs(letter)) > inst.n()) {
      throw Error(ErrorCode::InvalidInput, "word letter out of range");
    }
    const long a = std::abs(letter) - 1;
    const MatrixXcd g = twisted(inst, a);
    if (letter > 0) {
      out.segment(a * r, r) += cur;
      cur = g * cur;
    } else {
      cur = g.partialPivLu().solve(cur);
      out.segment(a * r, r) -= cur;
    }
  }
  return out;
}

MatrixXcd braid_action(const NumericInstance& inst, std::size_t k) {
  require_point(inst, k);
  const long r = inst.r();
  const long dim = static_cast<long>(inst.n()) * r;
  MatrixXcd u = MatrixXcd::Identity(dim, dim);
  const Word image = braid_image_word(inst.n(), k);
  for (long j = 0; j < r; ++j) {
    u.col(static_cast<long>(k) * r + j) = expand_word(inst, image, VectorXcd::Unit(r, j));
  }
  return u;
}

std::vector<BlockCheck> block_matrix_check(const NumericInstance& inst, std::size_t k) {
  require_point(inst, k);
  const long r = inst.r();
  const MatrixXcd u = braid_action(inst, k);
  Eigen::ComplexEigenSolver<MatrixXcd> es(inst.M[k]);
  const Word dw = delta_word(inst.n(), k);
  const cd chi = inst.chi;
  std::vector<BlockCheck> out;
  for (long j = 0; j < r; ++j) {
    BlockCheck check;
    check.point = k;
    check.eigenvalue = es.eigenvalues()(j);
    VectorXcd v = es.eigenvectors().col(j).normalized();
    MatrixXcd basis(u.rows(), 2);
    basis.col(0) = VectorXcd::Zero(u.rows());
    basis.col(0).segment(static_cast<long>(k) * r, r) = v;
    basis.col(1) = expand_word(inst, dw, v);
    const MatrixXcd image = u * basis;
    const MatrixXcd coeffs = basis.colPivHouseholderQr().solve(image);
    check.measured = coeffs;
    check.invariance_residual = (image - basis * coeffs).norm() / scale_of(basis);
    const cd br = inst.b[k] * check.eigenvalue;
    check.predicted << chi, chi - chi * chi, 1.0 - br, 1.0 + chi * (br - 1.0);
    check.deviation = (check.measured - check.predicted).cwiseAbs().maxCoeff();
    check.eigenvalue_deviation = multiset_deviation({1.0, chi * br}, eigenvalues(check.measured));
    out.push_back(check);
  }
  return out;
}

ConvolutionRep raw_convolution_rep(const NumericInstance& inst) {
  inst.validate();
  const long r = inst.r();
  const long dim = static_cast<long>(inst.n()) * r;
  const MatrixXcd d = boundary_matrix(inst);
  Eigen::JacobiSVD<MatrixXcd> svd(d, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(r - 1) <= inst.tol * std::max(1.0, sv(0))) {
    throw Error(ErrorCode::BoundaryNotSurjective,
                "boundary map has a nontrivial cokernel (smallest singular value " + std::to_string(sv(r - 1)) +
                    ")");
  }
  ConvolutionRep rep;
  rep.dim = dim - r;
  rep.basis = svd.matrixV().rightCols(rep.dim);
  for (std::size_t k = 0; k < inst.n(); ++k) {
    rep.matrices.push_back(inst.w[k] * rep.basis.adjoint() * braid_action(inst, k) * rep.basis);
  }
  return rep;
}

ConvolutionRep middle_convolution_rep(const NumericInstance& inst) {
  inst.validate();
  const long r = inst.r();
  const long n = static_cast<long>(inst.n());
  if (std::abs(inst.chi - 1.0) <= inst.tol) {
    throw Error(ErrorCode::ConventionViolationNumeric, "beta^T is numerically 1");
  }
  for (long k = 0; k < n; ++k) {
    for (cd lambda : eigenvalues(inst.M[k])) {
      if (std::abs(inst.chi * inst.b[k] * lambda - 1.0) <= inst.tol) {
        throw Error(ErrorCode::ConventionViolationNumeric,
                    "beta^T beta^H_i times an eigenvalue is numerically 1 at point " + std::to_string(k + 1));
      }
    }
  }
  const ConvolutionRep raw = raw_convolution_rep(inst);
  const double fixed_tol = 10.0 * inst.tol;

  std::vector<MatrixXcd> fixed(n);
  long fixed_total = 0;
  ConvolutionRep rep;
  for (long i = 0; i < n; ++i) {
    const MatrixXcd a = twisted(inst, i) - MatrixXcd::Identity(r, r);
    Eigen::JacobiSVD<MatrixXcd> svd(a, Eigen::ComputeFullV);
    long nullity = 0;
    for (long j = 0; j < r; ++j) {
      if (svd.singularValues()(j) <= fixed_tol * scale_of(inst.M[i])) ++nullity;
    }
    fixed[i] = svd.matrixV().rightCols(nullity);
    rep.fixed_dims.push_back(nullity);
    fixed_total += nullity;
  }
  MatrixXcd span = MatrixXcd::Zero(n * r, fixed_total);
  long col = 0;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < fixed[i].cols(); ++j) span.col(col++).segment(i * r, r) = fixed[i].col(j);
  }
  if (fixed_total > 0) {
    Eigen::JacobiSVD<MatrixXcd> check(span);
    if (check.singularValues()(fixed_total - 1) < 0.5) {
      throw Error(ErrorCode::QuotientRankMismatch, "middling cycles are linearly dependent");
    }
  }
  const MatrixXcd projected = raw.basis - span * (span.adjoint() * raw.basis);
  Eigen::JacobiSVD<MatrixXcd> svd(projected, Eigen::ComputeThinU);
  long rank = 0;
  for (long j = 0; j < svd.singularValues().size(); ++j) {
    if (svd.singularValues()(j) > 0.5) ++rank;
  }
  if (rank != raw.dim - fixed_total) {
    throw Error(ErrorCode::QuotientRankMismatch, "middling quotient has dimension " + std::to_string(rank) +
                                                     ", expected " + std::to_string(raw.dim - fixed_total));
  }
  rep.dim = rank;
  rep.basis = svd.matrixU().leftCols(rank);
  for (long k = 0; k < n; ++k) {
    rep.matrices.push_back(inst.w[k] * rep.basis.adjoint() * braid_action(inst, k) * rep.basis);
  }
  return rep;
}

std::vector<cd> eigenvalues(const MatrixXcd& m) {
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<MatrixXcd> es(m, false);
  std::vector<cd> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

double multiset_deviation(std::vector<cd> predicted, std::vector<cd> measured) {
  if (predicted.size() != measured.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  while (!predicted.empty()) {
    std::size_t bi = 0;
    std::size_t bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      for (std::size_t j = 0; j < measured.size(); ++j) {
        double d = std::abs(predicted[i] - measured[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    worst = std::max(worst, best);
    predicted.erase(predicted.begin() + static_cast<long>(bi));
    measured.erase(measured.begin() + static_cast<long>(bj));
  }
  return worst;
}

bool is_semisimple(const MatrixXcd& m, double cluster_tol) {
  const std::vector<cd> ev = eigenvalues(m);
  std::vector<std::pair<cd, long>> clusters;
  for (cd x : ev) {
    auto it = std::find_if(clusters.begin(), clusters.end(),
                           [&](const auto& c) { return std::abs(c.first - x) <= cluster_tol; });
    if (it == clusters.end()) {
      clusters.emplace_back(x, 1);
    } else {
      it->first = (it->first * static_cast<double>(it->second) + x) / static_cast<double>(it->second + 1);
      ++it->second;
    }
  }
  const long dim = m.rows();
  for (const auto& [center, mult] : clusters) {
    Eigen::JacobiSVD<MatrixXcd> svd(m - center * MatrixXcd::Identity(dim, dim));
    long nullity = 0;
    for (long j = 0; j < dim; ++j) {
      if (svd.singularValues()(j) <= cluster_tol * scale_of(m)) ++nullity;
    }
    if (nullity != mult) return false;
  }
  return true;
}

MatrixXcd random_unitary(long r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXcd z(r, r);
  for (long i = 0; i < r; ++i) {
    for (long j = 0; j < r; ++j) z(i, j) = cd(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<MatrixXcd> qr(z);
  MatrixXcd q = qr.householderQ();
  const MatrixXcd& packed = qr.matrixQR();
  for (long j = 0; j < r; ++j) {
    cd d = packed(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

namespace {

std::vector<cd> numeric_eigenvalues(const EigDivisor& g, const Assignment& assignment) {
  std::vector<cd> out;
  for (const auto& [alpha, m] : g.entries()) {
    cd value = to_complex(alpha, assignment);
    for (long j = 0; j < m; ++j) out.push_back(value);
  }
  return out;
}

MatrixXcd with_eigenvalues(const std::vector<cd>& values, const MatrixXcd& u) {
  Eigen::VectorXcd diag(static_cast<long>(values.size()));
  for (std::size_t j = 0; j < values.size(); ++j) diag(static_cast<long>(j)) = values[j];
  return u * diag.asDiagonal() * u.adjoint();
}

void collect_names(const GroupElement& x, std::set<std::string>& names) {
  for (const auto& [name, coeff] : x.value().exponents()) names.insert(name);
}

// Rank 1 or the rank-2 three-point (hypergeometric) shape; empty if the shape
// does not apply or the prescribed eigenvalues are inconsistent.
std::optional<std::vector<MatrixXcd>> prescribed_realization(const MonodromyVector& v, const Assignment& assignment,
                                                             std::mt19937_64& rng, double tol) {
  const long r = v.rank();
  const std::size_t n = v.points();
  std::vector<std::vector<cd>> values;
  for (const auto& g : v.divisors()) values.push_back(numeric_eigenvalues(g, assignment));
  std::vector<MatrixXcd> ms;
  if (r == 1) {
    for (const auto& vals : values) ms.push_back(MatrixXcd::Constant(1, 1, vals[0]));
  } else if (r == 2 && n == 3 && v[0].support_size() == 2 && v[1].support_size() == 2) {
    const cd a = values[0][0], b = values[0][1], u = values[1][0], w = values[1][1];
    const cd g = values[2][0], h = values[2][1];
    const cd c = 1.0 / g + 1.0 / h - a * u - b * w;
    MatrixXcd m1(2, 2), m2(2, 2);
    m1 << a, 1.0, 0.0, b;
    m2 << u, 0.0, c, w;
    const MatrixXcd conj = random_unitary(2, rng());
    const MatrixXcd conj_inv = conj.adjoint();
    ms.push_back(conj * m1 * conj_inv);
    ms.push_back(conj * m2 * conj_inv);
    ms.push_back(conj * (m1 * m2).inverse() * conj_inv);
  } else {
    return std::nullopt;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (multiset_deviation(values[i], eigenvalues(ms[i])) > tol) return std::nullopt;
  }
  MatrixXcd prod = MatrixXcd::Identity(r, r);
  for (const auto& m : ms) prod = prod * m;
  if ((prod - MatrixXcd::Identity(r, r)).norm() > tol) return std::nullopt;
  return ms;
}

}  // namespace

GeneratedInstance generate_instance(const MonodromyVector& v, const Convoluter& beta, Assignment assignment,
                                    const GenerateOptions& options) {
  if (v.mode() != GroupMode::Multiplicative || beta.mode != GroupMode::Multiplicative) {
    throw Error(ErrorCode::ModeMismatch, "numeric instances are built from multiplicative data");
  }
  if (beta.points() != v.points()) throw Error(ErrorCode::SizeMismatch, "convoluter and vector sizes differ");
  std::mt19937_64 rng(options.seed);
  const long r = v.rank();
  const std::size_t n = v.points();

  std::optional<std::vector<MatrixXcd>> ms;
  if (options.last_point != GenerateOptions::LastPoint::Free) {
    ms = prescribed_realization(v, assignment, rng, std::max(options.tol, 1e-12) * 1e3);
    if (!ms && options.last_point == GenerateOptions::LastPoint::Prescribed) {
      throw Error(ErrorCode::InvalidInput,
                  "cannot realize the prescribed eigenvalues at every point; only rank 1 and rank 2 with three "
                  "points are supported, and the determinant relation must hold numerically");
    }
  }

  GeneratedInstance gen{.instance = {}, .vector = v, .beta = beta, .assignment = assignment, .last_point_free = false};
  if (ms) {
    gen.instance.M = std::move(*ms);
  } else {
    gen.last_point_free = true;
    MatrixXcd prod = MatrixXcd::Identity(r, r);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      MatrixXcd m = with_eigenvalues(numeric_eigenvalues(v[i], assignment), random_unitary(r, rng()));
      prod = prod * m;
      gen.instance.M.push_back(std::move(m));
    }
    MatrixXcd last = prod.inverse();
    std::vector<cd> last_values = eigenvalues(last);
    std::sort(last_values.begin(), last_values.end(),
              [](cd a, cd b) { return std::arg(a) < std::arg(b); });
    gen.instance.M.push_back(std::move(last));

    std::set<std::string> taken = v.generators();
    for (std::size_t i = 0; i < n; ++i) {
      collect_names(beta.h[i], taken);
      collect_names(beta.v[i], taken);
    }
    for (const auto& [name, value] : assignment) taken.insert(name);
    std::string prefix = "p";
    auto collides = [&](const std::string& p) {
      for (long j = 1; j <= r; ++j) {
        if (taken.count(p + std::to_string(j))) return true;
      }
      return false;
    };
    while (collides(prefix)) prefix = "_" + prefix;

    EigDivisor free_point(GroupMode::Multiplicative);
    std::vector<GroupElement> fresh;
    for (long j = 0; j < r; ++j) {
      const std::string name = prefix + std::to_string(j + 1);
      double angle = std::arg(last_values[j]) / (2.0 * std::numbers::pi);
      if (angle < 0) angle += 1.0;
      gen.assignment[name] = angle;
      fresh.push_back(GroupElement::generator(GroupMode::Multiplicative, name));
      free_point.add(fresh.back(), 1);
    }
    std::vector<EigDivisor> divisors = v.divisors();
    divisors.back() = free_point;
    gen.vector = MonodromyVector(std::move(divisors));
    if (options.adopt_last_eigenvalue) {
      auto h = beta.h;
      auto vv = beta.v;
      const GroupElement new_h = invert(fresh.front());
      vv.back() = combine(vv.back(), combine(new_h, invert(h.back())));
      h.back() = new_h;
      gen.beta = Convoluter::from_h_and_v(std::move(h), std::move(vv));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    gen.instance.b.push_back(to_complex(gen.beta.h[i], gen.assignment));
    gen.instance.w.push_back(to_complex(gen.beta.v[i], gen.assignment));
  }
  gen.instance.chi = to_complex(gen.beta.t, gen.assignment);
  gen.instance.tol = options.tol;
  gen.instance.validate();
  return gen;
}

VerificationReport verify_instance(const NumericInstance& inst) {
  VerificationReport report;
  report.n = static_cast<long>(inst.n());
  report.r = inst.r();
  report.tol = inst.tol;
  const long n = report.n;
  const long r = report.r;
  const double threshold = 10.0 * inst.tol;

  const ConvolutionRep raw = raw_convolution_rep(inst);
  report.raw_dim = raw.dim;
  report.expected_raw_dim = (n - 1) * r;
  const ConvolutionRep mid = middle_convolution_rep(inst);
  report.middle_dim = mid.dim;
  long fixed_total = 0;
  for (long f : mid.fixed_dims) fixed_total += f;
  report.measured_defect = (n - 2) * r - fixed_total;
  report.expected_middle_dim = r + report.measured_defect;

  for (long k = 0; k < n; ++k) {
    const std::vector<cd> spectrum = eigenvalues(inst.M[k]);
    const cd shift = inst.w[k] * inst.chi * inst.b[k];
    PointComparison raw_point;
    for (cd lambda : spectrum) raw_point.predicted.push_back(shift * lambda);
    for (cd x : repeated(inst.w[k], (n - 2) * r)) raw_point.predicted.push_back(x);
    raw_point.measured = eigenvalues(raw.matrices[k]);
    raw_point.deviation = multiset_deviation(raw_point.predicted, raw_point.measured);
    report.raw_deviation = std::max(report.raw_deviation, raw_point.deviation);
    report.raw_points.push_back(std::move(raw_point));

    PointComparison mid_point;
    for (cd lambda : spectrum) {
      if (std::abs(inst.b[k] * lambda - 1.0) > threshold) mid_point.predicted.push_back(shift * lambda);
    }
    for (cd x : repeated(inst.w[k], mid.fixed_dims[k] + report.measured_defect)) mid_point.predicted.push_back(x);
    mid_point.measured = eigenvalues(mid.matrices[k]);
    mid_point.deviation = multiset_deviation(mid_point.predicted, mid_point.measured);
    report.middle_deviation = std::max(report.middle_deviation, mid_point.deviation);
    report.middle_points.push_back(std::move(mid_point));

    for (const auto& block : block_matrix_check(inst, k)) {
      report.block_deviation = std::max(
          {report.block_deviation, block.deviation, block.invariance_residual, block.eigenvalue_deviation});
    }
    report.det_product *= mid.matrices[k].rows() == 0 ? cd(1.0) : mid.matrices[k].determinant();
    report.semisimple = report.semisimple && is_semisimple(mid.matrices[k], std::max(1e-6, 1e3 * inst.tol));
  }
  report.det_deviation = std::abs(report.det_product - 1.0);
  report.passed = report.raw_dim == report.expected_raw_dim && report.middle_dim == report.expected_middle_dim &&
                  report.raw_deviation <= threshold && report.middle_deviation <= threshold &&
                  report.block_deviation <= threshold && report.det_deviation <= threshold && report.semisimple;
  return report;
}

VerificationReport verify_generated(const GeneratedInstance& gen) {
  VerificationReport report = verify_instance(gen.instance);
  const double threshold = 10.0 * gen.instance.tol;
  const KappaResult kr = kappa_formal(gen.beta, gen.vector.divisors(), KappaOptions{.check_conventions = false});
  report.symbolic_defect = kr.defect;
  report.defect_agrees = kr.defect == report.measured_defect;
  report.expected_middle_dim = report.r + kr.defect;
  const ConvolutionRep mid = middle_convolution_rep(gen.instance);
  report.middle_deviation = 0.0;
  for (std::size_t k = 0; k < gen.vector.points(); ++k) {
    auto& point = report.middle_points[k];
    point.predicted.clear();
    for (const auto& [alpha, m] : kr.divisors[k].entries()) {
      if (m < 0) {
        point.predicted.clear();
        break;
      }
      for (cd x : repeated(to_complex(alpha, gen.assignment), m)) point.predicted.push_back(x);
    }
    point.measured = eigenvalues(mid.matrices[k]);
    point.deviation = multiset_deviation(point.predicted, point.measured);
    report.middle_deviation = std::max(report.middle_deviation, point.deviation);
  }
  report.passed = report.passed && report.defect_agrees && report.middle_dim == report.expected_middle_dim &&
                  report.middle_deviation <= threshold;
  return report;
}

}  // namespace midconv
