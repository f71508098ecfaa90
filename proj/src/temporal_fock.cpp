#include "purify/temporal_fock.hpp"

#include "purify/sector_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace purify {

namespace {

using Superposition = std::vector<std::pair<ModeIndex, Amplitude>>;

// Creation operator for a photon of the given polarization whose wave-packet
// is row `packet` of the party's temporal basis.
Superposition photon(Party party, Path path, Pol pol, const TemporalBasis& basis, Eigen::Index packet) {
    Superposition s;
    for (Eigen::Index k = 0; k < basis.rank; ++k) {
        const double c = basis.coeffs(packet, k);
        if (c != 0.0) s.push_back({ModeIndex{party, path, pol, static_cast<std::uint8_t>(k)}, Amplitude{c, 0.0}});
    }
    return s;
}

std::array<std::pair<Pol, Pol>, 2> bell_terms(BranchLabel label) {
    if (label == BranchLabel::PhiPlus) return {{{Pol::H, Pol::H}, {Pol::V, Pol::V}}};
    return {{{Pol::H, Pol::V}, {Pol::V, Pol::H}}};
}

int sign_value(Sign s) { return s == Sign::Plus ? 1 : -1; }

}  // namespace

FockVector prepare_branch_state(BranchLabel pair1, BranchLabel pair2, double tau1, double tau2,
                                const WavePacketConvention& conv) {
    const std::array<double, 2> delays_a{0.0, tau1};
    const std::array<double, 2> delays_b{0.0, tau2};
    const TemporalBasis basis_a = build_temporal_basis(delays_a, conv);
    const TemporalBasis basis_b = build_temporal_basis(delays_b, conv);

    FockVector state;
    for (const auto& [pa1, pb1] : bell_terms(pair1)) {
        for (const auto& [pa2, pb2] : bell_terms(pair2)) {
            FockVector term = FockVector::vacuum();
            term = term.create(photon(Party::A, Path::In1, pa1, basis_a, 0));
            term = term.create(photon(Party::B, Path::In1, pb1, basis_b, 0));
            term = term.create(photon(Party::A, Path::In2, pa2, basis_a, 1));
            term = term.create(photon(Party::B, Path::In2, pb2, basis_b, 1));
            for (const auto& [occ, amp] : term.terms()) state.add(occ, 0.5 * amp);
        }
    }
    return state;
}

FockVector apply_pbs(const FockVector& state, Party party, std::complex<double> reflection_phase) {
    return state.map_modes([&](ModeIndex m) -> std::optional<ModeImage> {
        if (m.party != party || (m.path != Path::In1 && m.path != Path::In2)) return std::nullopt;
        ModeIndex out = m;
        Amplitude phase{1.0, 0.0};
        if (m.pol == Pol::H) {
            out.path = m.path == Path::In1 ? Path::OutKeep : Path::OutDetect;
        } else {
            out.path = m.path == Path::In1 ? Path::OutDetect : Path::OutKeep;
            phase = reflection_phase;
        }
        return ModeImage{{out, phase}};
    });
}

Projection project_detection(const FockVector& state, DetectionOutcome outcome) {
    if (state.photon_number() != 4) throw std::invalid_argument("detection projection expects a 4-photon state");

    // Conditional kept-photon amplitudes indexed [det_time_a][det_time_b][pol_a][time_a][pol_b][time_b].
    constexpr int T = kTemporalSlots;
    std::array<Amplitude, T * T * 2 * T * 2 * T> conditional{};
    const auto slot = [](int ka, int kb, int pa, int ta, int pb, int tb) {
        return ((((ka * T + kb) * 2 + pa) * T + ta) * 2 + pb) * T + tb;
    };
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

    for (const auto& [occ, amp] : state.terms()) {
        std::array<std::array<int, 4>, 2> count{};
        std::array<std::array<ModeIndex, 4>, 2> where{};
        bool single = true;
        for (int m = 0; m < kModeCount; ++m) {
            if (occ[m] == 0) continue;
            const ModeIndex mode = ModeIndex::from_flat(m);
            const auto party = static_cast<int>(mode.party);
            const auto path = static_cast<int>(mode.path);
            count[party][path] += occ[m];
            where[party][path] = mode;
            if (occ[m] > 1) single = false;
        }
        const auto keep = static_cast<int>(Path::OutKeep);
        const auto detect = static_cast<int>(Path::OutDetect);
        if (!single || count[0][keep] != 1 || count[0][detect] != 1 || count[1][keep] != 1 || count[1][detect] != 1) {
            continue;
        }
        const ModeIndex det_a = where[0][detect];
        const ModeIndex det_b = where[1][detect];
        const ModeIndex keep_a = where[0][keep];
        const ModeIndex keep_b = where[1][keep];
        // <+-|H> = 1/sqrt2, <+-|V> = +-1/sqrt2
        const double proj_a = inv_sqrt2 * (det_a.pol == Pol::H ? 1 : sign_value(outcome.a));
        const double proj_b = inv_sqrt2 * (det_b.pol == Pol::H ? 1 : sign_value(outcome.b));
        conditional[slot(det_a.temporal, det_b.temporal, static_cast<int>(keep_a.pol), keep_a.temporal,
                         static_cast<int>(keep_b.pol), keep_b.temporal)] += amp * proj_a * proj_b;
    }

    PolarizationMatrix rho = PolarizationMatrix::Zero();
    for (int ka = 0; ka < T; ++ka) {
        for (int kb = 0; kb < T; ++kb) {
            for (int ta = 0; ta < T; ++ta) {
                for (int tb = 0; tb < T; ++tb) {
                    for (int pa = 0; pa < 2; ++pa) {
                        for (int pb = 0; pb < 2; ++pb) {
                            const Amplitude row = conditional[slot(ka, kb, pa, ta, pb, tb)];
                            if (row == Amplitude{}) continue;
                            for (int qa = 0; qa < 2; ++qa) {
                                for (int qb = 0; qb < 2; ++qb) {
                                    rho(2 * pa + pb, 2 * qa + qb) +=
                                        row * std::conj(conditional[slot(ka, kb, qa, ta, qb, tb)]);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return {rho, rho.trace().real()};
}

PolarizationMatrix apply_correction(const PolarizationMatrix& rho, DetectionOutcome outcome) {
    if (outcome.a == outcome.b) return rho;
    const Eigen::Vector4cd z_on_a{1.0, 1.0, -1.0, -1.0};
    return z_on_a.asDiagonal() * rho * z_on_a.asDiagonal();
}

double phi_plus_weight(const PolarizationMatrix& rho) {
    return 0.5 * (rho(0, 0) + rho(3, 3) + rho(0, 3) + rho(3, 0)).real();
}

MismatchResult purified_pair(double f, double tau1, double tau2, AcceptancePolicy policy,
                             const WavePacketConvention& conv, std::complex<double> reflection_phase) {
    if (!(f >= 0.0 && f <= 1.0)) throw std::domain_error("fidelity must lie in [0, 1]");

    struct Branch {
        BranchLabel pair1;
        BranchLabel pair2;
        double weight;
    };
    const std::array<Branch, 4> branches{{
        {BranchLabel::PhiPlus, BranchLabel::PhiPlus, f * f},
        {BranchLabel::PhiPlus, BranchLabel::PsiPlus, f * (1.0 - f)},
        {BranchLabel::PsiPlus, BranchLabel::PhiPlus, (1.0 - f) * f},
        {BranchLabel::PsiPlus, BranchLabel::PsiPlus, (1.0 - f) * (1.0 - f)},
    }};

    PolarizationMatrix accepted = PolarizationMatrix::Zero();
    for (const auto& branch : branches) {
        if (branch.weight == 0.0) continue;
        FockVector state = prepare_branch_state(branch.pair1, branch.pair2, tau1, tau2, conv);
        state = apply_pbs(state, Party::A, reflection_phase);
        state = apply_pbs(state, Party::B, reflection_phase);
        for (const auto& outcome : kAllOutcomes) {
            const bool even = outcome.a == outcome.b;
            if (policy == AcceptancePolicy::StrictPlusPlusMinusMinus && !even) continue;
            const Projection p = project_detection(state, outcome);
            accepted += branch.weight * apply_correction(p.rho, outcome);
        }
    }

    const double p_success = accepted.trace().real();
    if (!(p_success > 0.0)) throw NumericDegeneracy("no heralded events; output fidelity undefined");
    return {phi_plus_weight(accepted) / p_success, p_success};
}

}  // namespace purify
