#pragma once

// One purification round simulated in second quantization, with temporal
// displacements between the two PBS inputs of each party.

#include "purify/fock_vector.hpp"
#include "purify/temporal_basis.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace purify {

enum class BranchLabel { PhiPlus, PsiPlus };

enum class AcceptancePolicy { StrictPlusPlusMinusMinus, FeedForwardAllFour };

enum class Sign { Plus, Minus };

/// Diagonal/anti-diagonal result on the detect ports of parties A and B.
struct DetectionOutcome {
    Sign a;
    Sign b;
};

inline constexpr std::array<DetectionOutcome, 4> kAllOutcomes{{
    {Sign::Plus, Sign::Plus}, {Sign::Plus, Sign::Minus}, {Sign::Minus, Sign::Plus}, {Sign::Minus, Sign::Minus}}};

/// Two-qubit polarization operator on the kept modes, basis |pol_A pol_B>
/// ordered HH, HV, VH, VV.
using PolarizationMatrix = Eigen::Matrix4cd;

struct Projection {
    PolarizationMatrix rho;  // unnormalized; trace equals probability
    double probability;
};

struct MismatchResult {
    double f_prime;
    double p_success;
};

inline constexpr std::complex<double> kReflectionPhase{0.0, 1.0};

/// Pair 1 enters (A,in1),(B,in1) at delay 0; pair 2 enters (A,in2) at tau1
/// and (B,in2) at tau2.
FockVector prepare_branch_state(BranchLabel pair1, BranchLabel pair2, double tau1, double tau2,
                                const WavePacketConvention& conv);

/// PBS of one party: H transmitted, V reflected with the given phase.
FockVector apply_pbs(const FockVector& state, Party party,
                     std::complex<double> reflection_phase = kReflectionPhase);

/// Post-selects exactly one photon per detect port in the given +/- outcome,
/// summing incoherently over arrival times, and reduces the kept photons to
/// their polarization state.
Projection project_detection(const FockVector& state, DetectionOutcome outcome);

/// Z on party A's kept qubit for odd outcomes, identity otherwise.
PolarizationMatrix apply_correction(const PolarizationMatrix& rho, DetectionOutcome outcome);

/// <Phi+| rho |Phi+> for an unnormalized rho.
double phi_plus_weight(const PolarizationMatrix& rho);

/// Heralded output of one round for input Werner-like pairs of fidelity f.
/// Throws NumericDegeneracy when nothing is heralded.
MismatchResult purified_pair(double f, double tau1, double tau2, AcceptancePolicy policy,
                             const WavePacketConvention& conv,
                             std::complex<double> reflection_phase = kReflectionPhase);

}  // namespace purify
