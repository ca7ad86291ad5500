#include "optomw/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "optomw/errors.hpp"

namespace optomw {

Eigen::Matrix4d BipartiteCM::assembled() const {
  Eigen::Matrix4d v;
  v << b, c, c.transpose(), b_prime;
  return v;
}

BipartiteCM BipartiteCM::from_matrix(const Eigen::Matrix4d& v, Mode first, Mode second) {
  BipartiteCM pair;
  pair.b = v.topLeftCorner<2, 2>();
  pair.c = v.topRightCorner<2, 2>();
  pair.b_prime = v.bottomRightCorner<2, 2>();
  pair.first = first;
  pair.second = second;
  return pair;
}

BipartiteCM reduce_to_pair(const OutputCM& cm, ModeOrder order) {
  const Eigen::Matrix4d em = cm.matrix.bottomRightCorner<4, 4>();  // (X_w, Y_w, X_c, Y_c)
  if (order == ModeOrder::microwave_first) return BipartiteCM::from_matrix(em, Mode::microwave, Mode::optical);
  Eigen::Matrix4d swapped;
  swapped << em.bottomRightCorner<2, 2>(), em.bottomLeftCorner<2, 2>(), em.topRightCorner<2, 2>(),
      em.topLeftCorner<2, 2>();
  return BipartiteCM::from_matrix(swapped, Mode::optical, Mode::microwave);
}

double optimal_fidelity(double log_neg) { return 1.0 / (1.0 + std::exp(-log_neg)); }

EntanglementResult log_negativity(const BipartiteCM& pair) {
  EntanglementResult r;
  r.sigma = pair.b.determinant() + pair.b_prime.determinant() - 2.0 * pair.c.determinant();
  // LU pivoting depends on the row order; averaging both mode orders keeps
  // the result exactly symmetric under the swap.
  const Eigen::Matrix4d v = pair.assembled();
  Eigen::Matrix4d swapped;
  swapped << v.bottomRightCorner<2, 2>(), v.bottomLeftCorner<2, 2>(), v.topRightCorner<2, 2>(),
      v.topLeftCorner<2, 2>();
  const double det_v = 0.5 * (v.partialPivLu().determinant() + swapped.partialPivLu().determinant());

  double disc = r.sigma * r.sigma - 4.0 * det_v;
  if (disc < 0.0) {
    if (disc < -1e-10 * std::max(1.0, r.sigma * r.sigma))
      throw NumericalError("unphysical reduced CM: Sigma^2 < 4 det V");
    disc = 0.0;
  }
  // eta^2 = (Sigma - sqrt(disc)) / 2 = 2 det V / (Sigma + sqrt(disc)); the
  // second form avoids cancellation when the two eigenvalues separate.
  const double denom = r.sigma + std::sqrt(disc);
  const double eta_sq = denom > 0.0 ? std::max(0.0, 2.0 * det_v / denom) : 0.0;
  r.eta = std::sqrt(eta_sq);
  r.log_neg = std::max(0.0, -std::log(2.0 * r.eta));
  r.fopt = optimal_fidelity(r.log_neg);
  return r;
}

PhysicalityReport physicality_check(const Eigen::MatrixXd& cm) {
  const Eigen::Index n = cm.rows();
  PhysicalityReport report;
  if (cm.cols() != n || n % 2 != 0) throw ValidationError("cm", "must be a square 2n x 2n matrix");
  const Eigen::MatrixXd v = 0.5 * (cm + cm.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spd(v);
  report.positive_definite = spd.eigenvalues().minCoeff() > 0.0;

  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }

  std::vector<double> nu;
  if (report.positive_definite) {
    // V^{1/2} Omega V^{1/2} is antisymmetric with spectrum +-i nu_k; its
    // Gram matrix K^T K has every nu_k^2 twice.
    const Eigen::MatrixXd root = spd.operatorSqrt();
    const Eigen::MatrixXd k = root * omega * root;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(k.transpose() * k);
    for (Eigen::Index i = 0; i < n; i += 2) nu.push_back(std::sqrt(std::max(0.0, gram.eigenvalues()(i))));
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(omega * v, false);
    std::vector<double> mags;
    for (Eigen::Index i = 0; i < n; ++i) mags.push_back(std::abs(es.eigenvalues()(i)));
    std::sort(mags.begin(), mags.end());
    for (std::size_t i = 0; i < mags.size(); i += 2) nu.push_back(mags[i]);
  }
  std::sort(nu.begin(), nu.end());
  report.margin = nu.empty() ? 0.0 : nu.front() - 0.5;
  report.symplectic_eigenvalues = std::move(nu);
  return report;
}

PhysicalityReport physicality_check(const BipartiteCM& pair) {
  return physicality_check(Eigen::MatrixXd(pair.assembled()));
}

}  // namespace optomw
