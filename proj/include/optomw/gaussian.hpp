#pragma once

#include <vector>

#include <Eigen/Core>

#include "optomw/spectra.hpp"

namespace optomw {

enum class Mode { microwave, optical };
enum class ModeOrder { microwave_first, optical_first };

/// Two-mode covariance matrix in block form (B C; C^T B').
struct BipartiteCM {
  Eigen::Matrix2d b = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d b_prime = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
  Mode first = Mode::microwave;
  Mode second = Mode::optical;

  Eigen::Matrix4d assembled() const;
  static BipartiteCM from_matrix(const Eigen::Matrix4d& v, Mode first, Mode second);

  friend bool operator==(const BipartiteCM&, const BipartiteCM&) = default;
};

BipartiteCM reduce_to_pair(const OutputCM& cm, ModeOrder order);

struct EntanglementResult {
  double log_neg = 0.0;  ///< E_N = max(0, -ln 2 eta)
  double eta = 0.0;      ///< smallest symplectic eigenvalue of the partial transpose
  double sigma = 0.0;    ///< det B + det B' - 2 det C
  double fopt = 0.5;     ///< (1 + e^{-E_N})^-1
};

EntanglementResult log_negativity(const BipartiteCM& pair);

/// Best teleportation fidelity reachable with a channel of entanglement E_N.
double optimal_fidelity(double log_neg);

struct PhysicalityReport {
  std::vector<double> symplectic_eigenvalues;  ///< ascending, one per mode
  double margin = 0.0;                         ///< min nu - 1/2
  bool positive_definite = false;

  bool physical(double tol = 1e-8) const { return positive_definite && margin >= -tol; }
};

/// Williamson spectrum of a 2n x 2n CM in (x1, p1, x2, p2, ...) ordering.
PhysicalityReport physicality_check(const Eigen::MatrixXd& cm);
PhysicalityReport physicality_check(const BipartiteCM& pair);

}  // namespace optomw
