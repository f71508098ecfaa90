#include "purify/sector_model.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace purify {

namespace {

void require_probability(double value, const char* what) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in [0, 1], got " + std::to_string(value));
    }
}

// Which sectors are non-zero in exact arithmetic. Squaring a tiny mass can
// skip straight past the clamp to zero, so the value alone cannot tell.
struct Support {
    bool s0, s1, s2;

    static Support of(const SectorDistribution& s) { return {s.p0() > 0.0, s.p1() > 0.0, s.p2() > 0.0}; }

    Support merged() const { return {s1 || (s2 && s0), s1 && s2, s2}; }

    Support lossy(double eta) const {
        if (eta == 0.0) return *this;
        if (eta == 1.0) return {s0 || s1 || s2, false, false};
        return {s0 || s1 || s2, s1 || s2, s2};
    }
};

double clamp_tiny(double mass, bool supported, bool& flagged) {
    if (supported && mass < kUnderflowClamp) {
        flagged = true;
        return 0.0;
    }
    return mass;
}

}  // namespace

SectorDistribution::SectorDistribution(double p0, double p1, double p2) : p0_(p0), p1_(p1), p2_(p2) {
    if (!(p0 >= 0.0 && p1 >= 0.0 && p2 >= 0.0)) {
        throw std::domain_error("sector probabilities must be non-negative");
    }
    if (!(p0 + p1 + p2 <= 1.0 + 1e-12)) {
        throw std::domain_error("sector probabilities sum above one");
    }
}

LossChannel::LossChannel(double eta) : eta_(eta) { require_probability(eta, "loss eta"); }

double purify_fidelity(double f) {
    require_probability(f, "fidelity");
    const double good = f * f;
    const double bad = (1.0 - f) * (1.0 - f);
    return good / (good + bad);
}

double iterate_fidelity(double f, int n) {
    require_probability(f, "fidelity");
    if (n < 0) throw std::domain_error("iteration count must be non-negative");
    for (int i = 0; i < n; ++i) f = purify_fidelity(f);
    return f;
}

PairEnsemble merge_round(const PairEnsemble& input) {
    require_probability(input.fidelity, "fidelity");
    const auto& s = input.sectors;
    // Heralding probabilities per sector combination of the two identical
    // copies: (2,2) 1/4, (2,1) 1/2 -> one photon, (1,1) 1/8 and (2,0) 1/2 ->
    // vacuum. Both orderings of mixed pairs are counted.
    const double p2 = 0.25 * s.p2() * s.p2();
    const double p1 = 0.5 * s.p1() * s.p2();
    const double p0 = 0.125 * s.p1() * s.p1() + 0.5 * s.p2() * s.p0();
    return {SectorDistribution{p0, p1, p2}, purify_fidelity(input.fidelity)};
}

SectorDistribution apply_loss(const SectorDistribution& s, double eta) {
    require_probability(eta, "loss eta");
    if (eta == 0.0) return s;
    if (eta == 1.0) return {s.total(), 0.0, 0.0};
    const double keep = 1.0 - eta;
    return {s.p0() + s.p1() * eta + s.p2() * eta * eta,
            s.p2() * 2.0 * eta * keep + s.p1() * keep,
            s.p2() * keep * keep};
}

CascadeTrace cascade(const CascadeConfig& config) {
    if (config.rounds < 1) throw std::domain_error("cascade needs at least one round");
    require_probability(config.eta, "loss eta");

    CascadeTrace trace;
    trace.rounds.reserve(static_cast<std::size_t>(config.rounds));
    PairEnsemble pair = config.initial;
    for (int round = 0; round < config.rounds; ++round) {
        Support support = Support::of(pair.sectors);
        if (config.loss_placement == LossPlacement::BeforeRound) {
            pair.sectors = apply_loss(pair.sectors, config.eta);
            pair = merge_round(pair);
            support = support.lossy(config.eta).merged();
        } else {
            pair = merge_round(pair);
            pair.sectors = apply_loss(pair.sectors, config.eta);
            support = support.merged().lossy(config.eta);
        }
        const auto& s = pair.sectors;
        pair.sectors = SectorDistribution{clamp_tiny(s.p0(), support.s0, trace.underflow),
                                          clamp_tiny(s.p1(), support.s1, trace.underflow),
                                          clamp_tiny(s.p2(), support.s2, trace.underflow)};

        CascadeRecord record{pair.sectors, pair.fidelity, std::nullopt};
        const double mass = pair.sectors.total();
        if (mass > 0.0) {
            record.p2_norm = pair.sectors.p0() == 0.0 && pair.sectors.p1() == 0.0 ? 1.0 : pair.sectors.p2() / mass;
        }
        trace.rounds.push_back(record);
    }
    return trace;
}

double closed_form_p2(int n, double eta) {
    if (n < 1) throw std::domain_error("closed form needs n >= 1");
    require_probability(eta, "loss eta");
    const double per_merge = 0.25 * (1.0 - eta) * (1.0 - eta);
    return std::pow(per_merge, std::ldexp(1.0, n) - 1.0);
}

double normalized_two_photon_prob(const CascadeTrace& trace) {
    if (trace.rounds.empty()) throw std::invalid_argument("empty cascade trace");
    const auto& last = trace.rounds.back();
    if (!last.p2_norm) throw NumericDegeneracy("all success probability vanished; normalized P2 undefined");
    return *last.p2_norm;
}

double effective_fidelity(const CascadeTrace& trace) {
    const double p2_norm = normalized_two_photon_prob(trace);
    return trace.rounds.back().fidelity * p2_norm;
}

double bandwidth_to_efficiency(double omega) {
    if (!(omega > 0.0)) throw std::domain_error("detector bandwidth must be positive");
    return std::erfc(omega / std::numbers::sqrt2);
}

double efficiency_to_bandwidth(double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("effective loss must lie strictly inside (0, 1)");
    return std::numbers::sqrt2 * boost::math::erfc_inv(eta);
}

DetectorModel DetectorModel::from_bandwidth(double omega) {
    return {omega, bandwidth_to_efficiency(omega), true};
}

DetectorModel DetectorModel::from_efficiency_loss(double eta) {
    return {efficiency_to_bandwidth(eta), eta, false};
}

std::uint64_t resource_count(int n, NoiseModel noise) {
    if (n < 0) throw std::domain_error("round count must be non-negative");
    const int bits_per_round = noise == NoiseModel::Depolarizing ? 2 : 1;
    const long long shift = static_cast<long long>(n) * bits_per_round;
    if (shift >= std::numeric_limits<std::uint64_t>::digits) {
        throw std::overflow_error("resource count for " + std::to_string(n) + " rounds exceeds 64 bits");
    }
    return std::uint64_t{1} << shift;
}

}  // namespace purify
