#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

#include "optomw/gaussian.hpp"

namespace optomw {

/// Forward: optical input teleported onto the microwave output (Bell
/// measurement on the optical mode). Reversed: roles exchanged.
enum class Direction { forward, reversed };

inline constexpr double kNoCloningThreshold = 2.0 / 3.0;

/// Even cat state N (|alpha> + |-alpha>), alpha real.
class CatState {
 public:
  explicit CatState(double amplitude);
  double amplitude() const { return amplitude_; }
  /// N = (2 + 2 exp(-2 alpha^2))^{-1/2}
  double normalization() const;

 private:
  double amplitude_;
};

struct ChannelGamma {
  Eigen::Matrix2d gamma;
  double det = 0.0;
};

/// Gamma = I + Z B Z + Z C + C^T Z + B', Z = Diag(1, -1). The first mode of
/// `pair` is Bell-measured, the second is displaced.
ChannelGamma channel_gamma(const BipartiteCM& pair);

struct FidelityResult {
  double fidelity = 0.0;
  double gamma_det = 0.0;
  /// Q_i = h_i^T Gamma^-1 h_i for h_1 = (2a, 0), h_2 = (0, 2ia), h_3 = (a, ia),
  /// h_4 = (a, -ia). Q_3 and Q_4 are complex conjugates.
  std::array<std::complex<double>, 4> q_terms{};
  Direction direction = Direction::forward;
  double log_neg = 0.0;
  double fopt = 0.5;
  bool above_no_cloning = false;
};

/// Pair laid out for teleportation in `direction`: Bell-measured mode first.
BipartiteCM teleportation_pair(const OutputCM& cm, Direction direction);

/// Exchanges B <-> B' and C <-> C^T together with the mode labels.
BipartiteCM reverse_channel(const BipartiteCM& pair);

/// F = det(Gamma)^{-1/2}.
FidelityResult fidelity_coherent(const BipartiteCM& pair);

/// Eight-exponential closed form for an even cat input.
FidelityResult fidelity_cat(const BipartiteCM& pair, const CatState& cat);

}  // namespace optomw
