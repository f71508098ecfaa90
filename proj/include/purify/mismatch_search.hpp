#pragma once

#include "purify/temporal_fock.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace purify {

struct MonteCarloSearch {
    int samples = 1000;
};

/// k x k lattice on [-tau, tau]^2 including the corners.
struct GridSearch {
    int k = 21;
};

struct SearchConfig {
    double tau_bound = 0.0;
    std::uint64_t seed = 0;
    std::variant<MonteCarloSearch, GridSearch> mode = MonteCarloSearch{};
};

struct WorstCase {
    double min_f_prime;
    double tau1;
    double tau2;
    std::size_t evaluated;
    std::size_t skipped;  // samples with nothing heralded
};

/// Uniform double in [0, 1) drawn from a counter-based stream: the value
/// depends only on (seed, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept;

/// Displacement pairs visited by the search, in evaluation order. Monte Carlo
/// sampling always appends the (0, 0) probe.
std::vector<std::pair<double, double>> search_points(const SearchConfig& search);

/// Minimum heralded fidelity over the search domain. The reduction is
/// lexicographic on (f_prime, tau1, tau2), so the result does not depend on
/// the thread count.
WorstCase worst_case_fidelity(double f, const SearchConfig& search, AcceptancePolicy policy,
                              const WavePacketConvention& conv, unsigned threads = 1);

struct MismatchCurveRow {
    double tau_bound;
    double f;
    double min_f_prime;
    double argmin_tau1;
    double argmin_tau2;
};

/// worst_case_fidelity over tau_bounds x f_grid; rows ordered by tau bound,
/// then by f, as given.
std::vector<MismatchCurveRow> mismatch_curve(std::span<const double> f_grid, std::span<const double> tau_bounds,
                                             const SearchConfig& search, AcceptancePolicy policy,
                                             const WavePacketConvention& conv, unsigned threads = 1);

}  // namespace purify
