#pragma once

// Numeric check of the Betti middle convolution through the braid action on
// the twisted first homology of the free group on alpha_1..alpha_n.
//
// Chains C_1 / d C_2 are identified with C^{nr}: block i, coordinate j is
// G[alpha_i, v_j]. The diagonal loop is eliminated as delta = (alpha_1 ... alpha_n)^{-1}.
// Point indices in this header are 0-based.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "midconv/katz.hpp"

namespace midconv {

using cd = std::complex<double>;

struct NumericInstance {
  std::vector<Eigen::MatrixXcd> M;
  /// beta^H_i
  std::vector<cd> b;
  /// beta^V_i
  std::vector<cd> w;
  /// beta^T
  cd chi{1.0, 0.0};
  double tol = 1e-9;

  std::size_t n() const { return M.size(); }
  long r() const { return M.empty() ? 0 : static_cast<long>(M.front().rows()); }
  /// Checks shapes, prod M_i = I and the convoluter relations within tol.
  void validate() const;
};

/// Letters are +-(i+1) for alpha_i^{+-1}.
using Word = std::vector<int>;

/// G[delta_k, .] with delta_k = (alpha_{k+1} ... alpha_n alpha_1 ... alpha_k)^{-1}.
Word delta_word(std::size_t n, std::size_t k);
/// Image of alpha_k under u_k: delta_k^{-1} alpha_k delta_k.
Word braid_image_word(std::size_t n, std::size_t k);

Eigen::MatrixXcd boundary_matrix(const NumericInstance& inst);
Eigen::VectorXcd expand_word(const NumericInstance& inst, const Word& word, const Eigen::VectorXcd& v);
Eigen::MatrixXcd braid_action(const NumericInstance& inst, std::size_t k);

struct BlockCheck {
  std::size_t point = 0;
  cd eigenvalue;
  Eigen::Matrix2cd measured;
  Eigen::Matrix2cd predicted;
  /// Distance of U x, U y from span{x, y}.
  double invariance_residual = 0.0;
  double deviation = 0.0;
  double eigenvalue_deviation = 0.0;
};

/// Restriction of U_k to <G[alpha_k, v], G[delta_k, v]> for each eigenvector v of M_k.
std::vector<BlockCheck> block_matrix_check(const NumericInstance& inst, std::size_t k);

struct ConvolutionRep {
  long dim = 0;
  /// Orthonormal columns spanning the representation space inside C^{nr}.
  Eigen::MatrixXcd basis;
  std::vector<Eigen::MatrixXcd> matrices;
  /// Dimension of the fixed space of b_i M_i (middle only).
  std::vector<long> fixed_dims;
};

/// Action on ker d, dimension (n-1) r. Throws BoundaryNotSurjective.
ConvolutionRep raw_convolution_rep(const NumericInstance& inst);
/// Quotient of ker d by the cycles G[alpha_i, f], f fixed by b_i M_i.
ConvolutionRep middle_convolution_rep(const NumericInstance& inst);

std::vector<cd> eigenvalues(const Eigen::MatrixXcd& m);
/// Greedy nearest pairing; infinity when sizes differ.
double multiset_deviation(std::vector<cd> predicted, std::vector<cd> measured);
/// Checks diagonalizability by comparing each eigenvalue cluster's multiplicity
/// with the nullity of (A - lambda I).
bool is_semisimple(const Eigen::MatrixXcd& m, double cluster_tol);

Eigen::MatrixXcd random_unitary(long r, std::uint64_t seed);

struct GenerateOptions {
  std::uint64_t seed = 1;
  double tol = 1e-9;
  enum class LastPoint { Auto, Prescribed, Free } last_point = LastPoint::Auto;
  /// With a free last point, move beta^{H_n} onto the inverse of its first measured eigenvalue.
  bool adopt_last_eigenvalue = false;
};

struct GeneratedInstance {
  NumericInstance instance;
  MonodromyVector vector;
  Convoluter beta;
  Assignment assignment;
  bool last_point_free = false;
};

/// Realizes a multiplicative monodromy vector with random unitary
/// conjugations. The last point is either realized with its prescribed
/// eigenvalues (rank 1, or rank 2 with three points) or set to
/// (M_1 ... M_{n-1})^{-1} and described by fresh generators.
GeneratedInstance generate_instance(const MonodromyVector& v, const Convoluter& beta, Assignment assignment,
                                    const GenerateOptions& options);

struct PointComparison {
  std::vector<cd> predicted;
  std::vector<cd> measured;
  double deviation = 0.0;
};

struct VerificationReport {
  long n = 0;
  long r = 0;
  double tol = 0.0;
  long raw_dim = 0;
  long expected_raw_dim = 0;
  long middle_dim = 0;
  long expected_middle_dim = 0;
  long measured_defect = 0;
  std::optional<long> symbolic_defect;
  bool defect_agrees = true;
  std::vector<PointComparison> raw_points;
  std::vector<PointComparison> middle_points;
  double raw_deviation = 0.0;
  double middle_deviation = 0.0;
  double block_deviation = 0.0;
  cd det_product{1.0, 0.0};
  double det_deviation = 0.0;
  bool semisimple = true;
  bool passed = false;
};

/// Compares against predictions built from the measured eigenvalues of M_i.
VerificationReport verify_instance(const NumericInstance& inst);
/// Additionally compares the middle spectra with kappa(beta, v) under the assignment.
VerificationReport verify_generated(const GeneratedInstance& gen);

}  // namespace midconv
