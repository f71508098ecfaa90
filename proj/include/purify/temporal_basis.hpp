#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace purify {

/// Gaussian temporal amplitude envelope; sigma in units of photon temporal bandwidth.
class WavePacketConvention {
  public:
    explicit WavePacketConvention(double sigma);
    double sigma() const noexcept { return sigma_; }

  private:
    double sigma_;
};

/// Amplitude overlap of two Gaussian wave-packets displaced to tau_a and tau_b.
double overlap(double tau_a, double tau_b, const WavePacketConvention& conv);

/// Two-photon HOM visibility for a relative delay tau (squared overlap).
double hom_visibility(double tau, const WavePacketConvention& conv);

/// Width that reproduces a measured visibility at one delay.
WavePacketConvention calibrate_sigma(double anchor_tau, double anchor_visibility);

/// Convention calibrated to V = 0.74 at a delay of 0.4.
WavePacketConvention default_convention();

/// Residual norm under which a wave-packet is treated as linearly dependent.
inline constexpr double kRankTolerance = 1e-9;

struct TemporalBasis {
    std::vector<double> delays;
    Eigen::MatrixXd gram;
    // Row i expands packet i in the orthonormal basis (rank columns, lower triangular).
    Eigen::MatrixXd coeffs;
    int rank = 0;
};

/// Gram-Schmidt over the displaced wave-packets, keeping the first packet as
/// the first basis vector and dropping packets whose residual vanishes.
TemporalBasis build_temporal_basis(std::span<const double> delays, const WavePacketConvention& conv);

}  // namespace purify
