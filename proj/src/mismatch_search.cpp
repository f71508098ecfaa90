#include "purify/mismatch_search.hpp"

#include "purify/sector_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace purify {

namespace {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct Candidate {
    double f_prime;
    double tau1;
    double tau2;

    bool operator<(const Candidate& o) const {
        return std::tie(f_prime, tau1, tau2) < std::tie(o.f_prime, o.tau1, o.tau2);
    }
};

struct Partial {
    std::optional<Candidate> best;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
};

void validate(const SearchConfig& search) {
    if (!(search.tau_bound >= 0.0) || !std::isfinite(search.tau_bound)) {
        throw std::domain_error("tau bound must be non-negative");
    }
    if (const auto* mc = std::get_if<MonteCarloSearch>(&search.mode); mc && mc->samples < 1) {
        throw std::domain_error("Monte Carlo search needs at least one sample");
    }
    if (const auto* grid = std::get_if<GridSearch>(&search.mode); grid && grid->k < 1) {
        throw std::domain_error("grid search needs k >= 1");
    }
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
    const std::uint64_t bits = splitmix64(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::vector<std::pair<double, double>> search_points(const SearchConfig& search) {
    validate(search);
    const double tau = search.tau_bound;
    std::vector<std::pair<double, double>> points;
    if (const auto* mc = std::get_if<MonteCarloSearch>(&search.mode)) {
        points.reserve(static_cast<std::size_t>(mc->samples) + 1);
        for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(mc->samples); ++i) {
            points.emplace_back(tau * (2.0 * counter_uniform(search.seed, 2 * i) - 1.0),
                                tau * (2.0 * counter_uniform(search.seed, 2 * i + 1) - 1.0));
        }
        points.emplace_back(0.0, 0.0);
    } else {
        const int k = std::get<GridSearch>(search.mode).k;
        std::vector<double> axis;
        if (k == 1) {
            axis.push_back(0.0);
        } else {
            for (int j = 0; j < k; ++j) axis.push_back(-tau + 2.0 * tau * j / (k - 1));
            axis.back() = tau;
        }
        for (double t1 : axis) {
            for (double t2 : axis) points.emplace_back(t1, t2);
        }
    }
    return points;
}

WorstCase worst_case_fidelity(double f, const SearchConfig& search, AcceptancePolicy policy,
                              const WavePacketConvention& conv, unsigned threads) {
    const auto points = search_points(search);
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(points.size()));

    std::vector<Partial> partials(threads);
    const auto work = [&](unsigned worker) {
        Partial& mine = partials[worker];
        for (std::size_t i = worker; i < points.size(); i += threads) {
            const auto [t1, t2] = points[i];
            try {
                const Candidate c{purified_pair(f, t1, t2, policy, conv).f_prime, t1, t2};
                if (!mine.best || c < *mine.best) mine.best = c;
                ++mine.evaluated;
            } catch (const NumericDegeneracy&) {
                ++mine.skipped;
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }

    Partial total;
    for (const auto& p : partials) {
        total.evaluated += p.evaluated;
        total.skipped += p.skipped;
        if (p.best && (!total.best || *p.best < *total.best)) total.best = p.best;
    }
    if (!total.best) throw NumericDegeneracy("every search sample heralded nothing");
    return {total.best->f_prime, total.best->tau1, total.best->tau2, total.evaluated, total.skipped};
}

std::vector<MismatchCurveRow> mismatch_curve(std::span<const double> f_grid, std::span<const double> tau_bounds,
                                             const SearchConfig& search, AcceptancePolicy policy,
                                             const WavePacketConvention& conv, unsigned threads) {
    std::vector<MismatchCurveRow> rows;
    rows.reserve(f_grid.size() * tau_bounds.size());
    for (double tau : tau_bounds) {
        SearchConfig cell = search;
        cell.tau_bound = tau;
        for (double f : f_grid) {
            const WorstCase w = worst_case_fidelity(f, cell, policy, conv, threads);
            rows.push_back({tau, f, w.min_f_prime, w.tau1, w.tau2});
        }
    }
    return rows;
}

}  // namespace purify
