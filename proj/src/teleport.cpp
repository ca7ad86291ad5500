#include "optomw/teleport.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "optomw/errors.hpp"

namespace optomw {

namespace {

using Complex = std::complex<double>;

Direction direction_of(const BipartiteCM& pair) {
  return pair.first == Mode::optical ? Direction::forward : Direction::reversed;
}

void fill_entanglement(const BipartiteCM& pair, FidelityResult& r) {
  const auto ent = log_negativity(pair);
  r.log_neg = ent.log_neg;
  r.fopt = ent.fopt;
  r.direction = direction_of(pair);
  r.above_no_cloning = r.fidelity > kNoCloningThreshold;
}

}  // namespace

CatState::CatState(double amplitude) : amplitude_(amplitude) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw ValidationError("cat_alpha", "must be real and non-negative");
}

double CatState::normalization() const {
  return 1.0 / std::sqrt(2.0 + 2.0 * std::exp(-2.0 * amplitude_ * amplitude_));
}

ChannelGamma channel_gamma(const BipartiteCM& pair) {
  const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  ChannelGamma g;
  g.gamma = Eigen::Matrix2d::Identity() + z * pair.b * z + z * pair.c + pair.c.transpose() * z + pair.b_prime;
  g.det = g.gamma(0, 0) * g.gamma(1, 1) - g.gamma(0, 1) * g.gamma(1, 0);
  if (!(g.det > 0.0)) throw NumericalError("unphysical channel: det Gamma <= 0");
  return g;
}

BipartiteCM teleportation_pair(const OutputCM& cm, Direction direction) {
  const auto forward = reduce_to_pair(cm, ModeOrder::optical_first);
  return direction == Direction::forward ? forward : reverse_channel(forward);
}

BipartiteCM reverse_channel(const BipartiteCM& pair) {
  BipartiteCM r;
  r.b = pair.b_prime;
  r.b_prime = pair.b;
  r.c = pair.c.transpose();
  r.first = pair.second;
  r.second = pair.first;
  return r;
}

FidelityResult fidelity_coherent(const BipartiteCM& pair) {
  const auto g = channel_gamma(pair);
  FidelityResult r;
  r.gamma_det = g.det;
  r.fidelity = std::min(1.0, 1.0 / std::sqrt(g.det));
  fill_entanglement(pair, r);
  return r;
}

FidelityResult fidelity_cat(const BipartiteCM& pair, const CatState& cat) {
  const auto g = channel_gamma(pair);
  // Explicit 2x2 adjugate inverse.
  Eigen::Matrix2d inv;
  inv << g.gamma(1, 1), -g.gamma(0, 1), -g.gamma(1, 0), g.gamma(0, 0);
  inv /= g.det;

  const double a = cat.amplitude();
  const Complex i(0.0, 1.0);
  const std::array<Eigen::Vector2cd, 4> h = {
      Eigen::Vector2cd(2.0 * a, 0.0), Eigen::Vector2cd(0.0, 2.0 * i * a),
      Eigen::Vector2cd(a, i * a), Eigen::Vector2cd(a, -i * a)};

  FidelityResult r;
  r.gamma_det = g.det;
  const Eigen::Matrix2cd inv_c = inv.cast<Complex>();
  for (std::size_t k = 0; k < 4; ++k) r.q_terms[k] = (h[k].transpose() * inv_c * h[k])(0, 0);

  // Q_i(-a) = Q_i(a): the quadratic forms are even in a.
  const double a2 = a * a;
  const Complex brace = 2.0 * std::exp(-r.q_terms[0]) +
                        std::exp(-4.0 * a2) * 2.0 * std::exp(-r.q_terms[1]) +
                        2.0 * std::exp(-2.0 * a2) *
                            (2.0 * std::exp(-r.q_terms[2]) + 2.0 * std::exp(-r.q_terms[3])) +
                        2.0 * std::exp(-4.0 * a2) + 2.0;
  const double n = cat.normalization();
  const Complex f = std::pow(n, 4) / std::sqrt(g.det) * brace;
  if (std::abs(f.imag()) > 1e-9 * std::max(1.0, std::abs(f.real())))
    throw NumericalError("cat fidelity has a non-negligible imaginary part");
  r.fidelity = std::clamp(f.real(), 0.0, 1.0);
  fill_entanglement(pair, r);
  return r;
}

}  // namespace optomw
