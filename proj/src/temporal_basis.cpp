#include "purify/temporal_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace purify {

WavePacketConvention::WavePacketConvention(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::domain_error("wave-packet sigma must be positive");
}

double overlap(double tau_a, double tau_b, const WavePacketConvention& conv) {
    const double d = tau_a - tau_b;
    return std::exp(-d * d / (8.0 * conv.sigma() * conv.sigma()));
}

double hom_visibility(double tau, const WavePacketConvention& conv) {
    const double o = overlap(0.0, tau, conv);
    return o * o;
}

WavePacketConvention calibrate_sigma(double anchor_tau, double anchor_visibility) {
    if (!(anchor_visibility > 0.0 && anchor_visibility < 1.0)) {
        throw std::domain_error("anchor visibility must lie strictly inside (0, 1)");
    }
    if (anchor_tau == 0.0 || !std::isfinite(anchor_tau)) throw std::domain_error("anchor delay must be non-zero");
    return WavePacketConvention{std::sqrt(anchor_tau * anchor_tau / (-4.0 * std::log(anchor_visibility)))};
}

WavePacketConvention default_convention() { return calibrate_sigma(0.4, 0.74); }

TemporalBasis build_temporal_basis(std::span<const double> delays, const WavePacketConvention& conv) {
    if (delays.empty()) throw std::invalid_argument("temporal basis needs at least one delay");
    const auto n = static_cast<Eigen::Index>(delays.size());

    TemporalBasis basis;
    basis.delays.assign(delays.begin(), delays.end());
    basis.gram.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) basis.gram(i, j) = overlap(delays[i], delays[j], conv);
    }

    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::Index> generator;  // packet that spawned each basis vector
    for (Eigen::Index i = 0; i < n; ++i) {
        double residual2 = basis.gram(i, i);
        for (std::size_t j = 0; j < generator.size(); ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const Eigen::Index p = generator[j];
            const double projected = coeffs.row(i).head(jj).dot(coeffs.row(p).head(jj));
            coeffs(i, jj) = (basis.gram(i, p) - projected) / coeffs(p, jj);
            residual2 -= coeffs(i, jj) * coeffs(i, jj);
        }
        const double residual = std::sqrt(std::max(residual2, 0.0));
        if (residual > kRankTolerance) {
            coeffs(i, static_cast<Eigen::Index>(generator.size())) = residual;
            generator.push_back(i);
        }
    }
    basis.rank = static_cast<int>(generator.size());
    basis.coeffs = coeffs.leftCols(basis.rank);
    return basis;
}

}  // namespace purify
