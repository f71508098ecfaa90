#pragma once

// Photon-number sector model of the PBS purification protocol: the fidelity
// recursion, sector propagation through a merge round, channel loss, cascades
// and the detector bandwidth <-> efficiency mapping.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace purify {

/// Raised when a cascade has lost all of its probability mass.
class NumericDegeneracy : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Unnormalized probabilities that a pair holds 0, 1 or 2 photons.
/// The sum is the cumulative success probability and may be below one.
class SectorDistribution {
  public:
    SectorDistribution() = default;
    SectorDistribution(double p0, double p1, double p2);

    double p0() const noexcept { return p0_; }
    double p1() const noexcept { return p1_; }
    double p2() const noexcept { return p2_; }
    double total() const noexcept { return p0_ + p1_ + p2_; }

    friend bool operator==(const SectorDistribution&, const SectorDistribution&) = default;

  private:
    double p0_ = 0.0;
    double p1_ = 0.0;
    double p2_ = 1.0;
};

/// Sector distribution plus the fidelity of the two-photon sector.
struct PairEnsemble {
    SectorDistribution sectors{};
    double fidelity = 1.0;

    friend bool operator==(const PairEnsemble&, const PairEnsemble&) = default;
};

/// Intensity loss per output arm.
class LossChannel {
  public:
    explicit LossChannel(double eta = 0.0);
    double eta() const noexcept { return eta_; }

    friend bool operator==(const LossChannel&, const LossChannel&) = default;

  private:
    double eta_;
};

enum class LossPlacement { BeforeRound, AfterRound };

struct CascadeConfig {
    int rounds = 1;
    double eta = 0.0;
    LossPlacement loss_placement = LossPlacement::BeforeRound;
    PairEnsemble initial{};

    friend bool operator==(const CascadeConfig&, const CascadeConfig&) = default;
};

struct CascadeRecord {
    SectorDistribution sectors;
    double fidelity;
    // Empty once every sector has vanished.
    std::optional<double> p2_norm;
};

struct CascadeTrace {
    std::vector<CascadeRecord> rounds;
    // Set when some sector mass fell below the clamp threshold and was zeroed.
    bool underflow = false;
};

/// Sector masses smaller than this are flushed to zero during a cascade.
inline constexpr double kUnderflowClamp = 1e-300;

double purify_fidelity(double f);
double iterate_fidelity(double f, int n);

PairEnsemble merge_round(const PairEnsemble& input);
SectorDistribution apply_loss(const SectorDistribution& sectors, double eta);
inline SectorDistribution apply_loss(const SectorDistribution& sectors, const LossChannel& channel) {
    return apply_loss(sectors, channel.eta());
}

CascadeTrace cascade(const CascadeConfig& config);

/// [(1-eta)^2 / 4]^(2^n - 1): two-photon probability after n rounds with loss
/// applied after every merge.
double closed_form_p2(int n, double eta);

/// P2 / (P0 + P1 + P2) of the final round. Throws NumericDegeneracy if the
/// trace has no mass left.
double normalized_two_photon_prob(const CascadeTrace& trace);

/// Final-round fidelity discounted by the normalized two-photon probability.
double effective_fidelity(const CascadeTrace& trace);

// Detector bandwidth (in units of photon bandwidth) maps onto an effective
// loss through 1 - eta = erf(omega / sqrt 2).
double bandwidth_to_efficiency(double omega);
double efficiency_to_bandwidth(double eta);

/// Either parameterization of a band-limited detector; the other is derived.
class DetectorModel {
  public:
    static DetectorModel from_bandwidth(double omega);
    static DetectorModel from_efficiency_loss(double eta);

    double omega() const noexcept { return omega_; }
    double effective_eta() const noexcept { return eta_; }
    bool bandwidth_authoritative() const noexcept { return from_omega_; }

  private:
    DetectorModel(double omega, double eta, bool from_omega)
        : omega_(omega), eta_(eta), from_omega_(from_omega) {}
    double omega_;
    double eta_;
    bool from_omega_;
};

enum class NoiseModel { BitFlipOnly, Depolarizing };

/// Number of raw pairs consumed by n nested rounds. Throws std::overflow_error
/// when the count does not fit in 64 bits.
std::uint64_t resource_count(int n, NoiseModel noise);

}  // namespace purify
