// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include "purify/cli.hpp"
#include "purify/mismatch_search.hpp"
#include "purify/sector_model.hpp"
#include "purify/temporal_fock.hpp"

#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace purify;

namespace {

constexpr auto kStrict = AcceptancePolicy::StrictPlusPlusMinusMinus;

/// Collects failed expectations for one criterion.
class Check {
  public:
    void expect(bool ok, const std::string& what) {
        if (!ok && failures_.size() < 8) failures_.push_back(what);
        if (!ok) ++count_;
    }
    bool passed() const { return count_ == 0; }
    std::string summary() const {
        std::string s;
        for (const auto& f : failures_) s += "\n      " + f;
        if (count_ > failures_.size()) s += "\n      ... " + std::to_string(count_ - failures_.size()) + " more";
        return s;
    }

  private:
    std::vector<std::string> failures_;
    std::size_t count_ = 0;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buffer[256];
    std::snprintf(buffer, sizeof buffer, pattern, a, b, c);
    return buffer;
}

std::vector<double> f_grid_055_095() {
    std::vector<double> grid;
    for (int i = 11; i <= 19; ++i) grid.push_back(i * 0.05);
    return grid;
}

void fidelity_map(Check& c) {
    c.expect(purify_fidelity(0.5) == 0.5, "F'(0.5) must equal 0.5 exactly");
    c.expect(purify_fidelity(1.0) == 1.0, "F'(1) must equal 1 exactly");
    c.expect(std::abs(purify_fidelity(0.75) - 0.9) <= 1e-15, fmt("F'(0.75) = %.17g", purify_fidelity(0.75)));
    for (int i = 1; i <= 99; ++i) {
        const double f = i / 100.0;
        c.expect((purify_fidelity(f) > f) == (f > 0.5), fmt("gain region violated at F = %.2f", f));
    }
}

void closed_form_cascade(Check& c) {
    for (int n = 1; n <= 4; ++n) {
        for (double eta : {0.0, 0.01, 0.1, 0.5}) {
            const auto trace = cascade({n, eta, LossPlacement::AfterRound, {SectorDistribution{0, 0, 1}, 1.0}});
            const double got = trace.rounds.back().sectors.p2();
            const double expected = std::pow(0.25 * (1 - eta) * (1 - eta), std::pow(2.0, n) - 1);
            const double rel = std::abs(got - expected) / expected;
            c.expect(rel < 1e-12, fmt("n=%g eta=%g relative error %.3g", n, eta, rel));
        }
    }
}

void headline_loss(Check& c) {
    const double p = normalized_two_photon_prob(cascade({3, 0.01, LossPlacement::BeforeRound, {}}));
    std::printf("      normalized P2 (n=3, eta=0.01, before) = %.6f\n", p);
    c.expect(p >= 0.73 && p <= 0.79, fmt("normalized P2 = %.6f outside [0.73, 0.79]", p));
}

void bandwidth_mapping(Check& c) {
    const double got = bandwidth_to_efficiency(1.0);
    const double reference = 1.0 - oracle::erf_taylor30(1.0 / std::sqrt(2.0));
    c.expect(std::abs(got - reference) <= 1e-8, fmt("eta(1) = %.12f, series %.12f", got, reference));
    c.expect(std::abs(got - 0.31731051) <= 1e-8, fmt("eta(1) = %.12f vs 0.31731051", got));
    double previous = 2.0;
    for (int i = 1; i <= 100; ++i) {
        const double omega = 0.05 * i;
        const double eta = bandwidth_to_efficiency(omega);
        c.expect(eta < previous, fmt("not decreasing at omega = %.2f", omega));
        previous = eta;
        const double back = efficiency_to_bandwidth(eta);
        c.expect(std::abs(back - omega) <= 1e-8, fmt("round trip at omega = %.2f gives %.12f", omega, back));
    }
}

void fock_ideal_limit(Check& c) {
    const auto conv = default_convention();
    for (double f : f_grid_055_095()) {
        const auto r = purified_pair(f, 0.0, 0.0, kStrict, conv);
        const auto enumerated = oracle::ideal_round(f, false);
        const double p_expected = 0.25 * (f * f + (1 - f) * (1 - f));
        c.expect(std::abs(r.f_prime - purify_fidelity(f)) <= 1e-9, fmt("f=%.2f F' = %.12f", f, r.f_prime));
        c.expect(std::abs(r.p_success - p_expected) <= 1e-9, fmt("f=%.2f p = %.12f", f, r.p_success));
        c.expect(std::abs(r.f_prime - enumerated.f_prime) <= 1e-9, fmt("f=%.2f disagrees with enumeration", f));
        c.expect(std::abs(r.p_success - enumerated.p_success) <= 1e-9, fmt("f=%.2f p disagrees with enumeration", f));
    }
    const auto perfect = purified_pair(1.0, 0.0, 0.0, kStrict, conv);
    c.expect(std::abs(perfect.p_success - 0.25) <= 1e-9, fmt("p_success(F=1) = %.12f", perfect.p_success));
}

void mode_mismatch(Check& c) {
    const auto conv = default_convention();
    const double v06 = hom_visibility(0.6, conv);
    std::printf("      V(0.6) = %.4f\n", v06);
    c.expect(v06 >= 0.49 && v06 <= 0.58, fmt("(a) V(0.6) = %.4f outside [0.49, 0.58]", v06));

    for (double f : f_grid_055_095()) {
        const auto narrow = worst_case_fidelity(f, {0.2, 0, GridSearch{21}}, kStrict, conv);
        std::printf("      tau=0.2 f=%.2f min F' = %.6f\n", f, narrow.min_f_prime);
        c.expect(narrow.min_f_prime > f, fmt("(b) tau=0.2 f=%.2f min F' = %.6f not above f", f, narrow.min_f_prime));
        const auto wide = worst_case_fidelity(f, {0.8, 0, GridSearch{21}}, kStrict, conv);
        c.expect(wide.min_f_prime <= f, fmt("(c) tau=0.8 f=%.2f min F' = %.6f above f", f, wide.min_f_prime));
    }
}

FockVector random_four_photon_state(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 15);
    std::normal_distribution<double> gauss;
    FockVector state;
    for (int t = 0; t < 5; ++t) {
        Occupation occ{};
        for (int photon = 0; photon < 4; ++photon) {
            const int code = pick(rng);
            occ[ModeIndex{static_cast<Party>(code & 1), static_cast<Path>((code >> 1) & 1),
                          static_cast<Pol>((code >> 2) & 1), static_cast<std::uint8_t>(code >> 3)}
                    .flat()] += 1;
        }
        state.add(occ, {gauss(rng), gauss(rng)});
    }
    return state;
}

double rejected_mass(const FockVector& state) {
    double rejected = 0.0;
    for (const auto& [occ, amp] : state.terms()) {
        int ports[2][4] = {};
        bool multi = false;
        for (int m = 0; m < kModeCount; ++m) {
            const auto mode = ModeIndex::from_flat(m);
            ports[static_cast<int>(mode.party)][static_cast<int>(mode.path)] += occ[m];
            multi = multi || occ[m] > 1;
        }
        if (multi || ports[0][2] != 1 || ports[0][3] != 1 || ports[1][2] != 1 || ports[1][3] != 1) {
            rejected += std::norm(amp);
        }
    }
    return rejected;
}

void physicality(Check& c) {
    const auto conv = default_convention();
    std::mt19937_64 rng(20060101);
    std::uniform_real_distribution<double> tau(-1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto random_state = random_four_photon_state(rng);
        const double norm = random_state.norm2();
        const double after = apply_pbs(apply_pbs(random_state, Party::A), Party::B).norm2();
        c.expect(std::abs(after - norm) <= 1e-12 * norm, fmt("PBS changed norm %.15f -> %.15f", norm, after));

        const double t1 = tau(rng), t2 = tau(rng);
        const auto pair1 = coin(rng) ? BranchLabel::PhiPlus : BranchLabel::PsiPlus;
        const auto pair2 = coin(rng) ? BranchLabel::PhiPlus : BranchLabel::PsiPlus;
        const auto state =
            apply_pbs(apply_pbs(prepare_branch_state(pair1, pair2, t1, t2, conv), Party::A), Party::B);
        c.expect(std::abs(state.norm2() - 1.0) <= 1e-12, "branch state norm drifted through the PBS");
        double total = rejected_mass(state);
        for (const auto& outcome : kAllOutcomes) {
            const auto p = project_detection(state, outcome);
            total += p.probability;
            const double asym = (p.rho - p.rho.adjoint()).cwiseAbs().maxCoeff();
            c.expect(asym <= 1e-12, fmt("non-Hermitian rho, asymmetry %.3g", asym));
            const double min_eig = Eigen::SelfAdjointEigenSolver<PolarizationMatrix>(p.rho).eigenvalues().minCoeff();
            c.expect(min_eig >= -1e-10, fmt("negative eigenvalue %.3g", min_eig));
            c.expect(std::abs(p.rho.trace().real() - p.probability) <= 1e-10, "trace differs from probability");
        }
        c.expect(std::abs(total - 1.0) <= 1e-10, fmt("outcome probabilities sum to %.15f", total));

        const double f = unit(rng);
        const auto policy = coin(rng) ? kStrict : AcceptancePolicy::FeedForwardAllFour;
        const auto base = purified_pair(f, t1, t2, policy, conv);
        const auto even = purified_pair(f, std::abs(t1), std::abs(t2), policy, conv);
        const auto swapped = purified_pair(f, t2, t1, policy, conv);
        const auto real_phase = purified_pair(f, t1, t2, policy, conv, {1.0, 0.0});
        for (const auto* other : {&even, &swapped, &real_phase}) {
            c.expect(std::abs(other->f_prime - base.f_prime) <= 1e-9 &&
                         std::abs(other->p_success - base.p_success) <= 1e-9,
                     fmt("symmetry broken at f=%.4f tau=(%.4f, %.4f)", f, t1, t2));
        }
    }
}

void determinism(Check& c) {
    const std::vector<std::string> args{"mode-mismatch", "--seed", "20060101", "--samples", "500"};
    const auto render = [](std::vector<std::string> a) {
        std::ostringstream out, err;
        const int code = cli::run(a, out, err);
        return std::pair{code, out.str()};
    };
    const auto first = render(args);
    const auto second = render(args);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "4"});
    const auto parallel = render(threaded);
    c.expect(first.first == 0 && second.first == 0 && parallel.first == 0, "mode-mismatch exited non-zero");
    c.expect(!first.second.empty(), "no CSV produced");
    c.expect(first.second == second.second, "repeated runs differ");
    c.expect(first.second == parallel.second, "serial and parallel runs differ");
}

struct Criterion {
    int id;
    const char* title;
    double time_limit_s;
    std::function<void(Check&)> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "fidelity map fixed points, F'(0.75) = 0.9 and gain region", 1.0, fidelity_map},
        {2, "cascade (loss after merge) equals closed-form P2 to 1e-12", 1.0, closed_form_cascade},
        {3, "normalized P2 for n=3, eta=0.01 (before) within [0.73, 0.79]", 1.0, headline_loss},
        {4, "bandwidth -> efficiency vs erf series, monotone, invertible", 1.0, bandwidth_mapping},
        {5, "Fock engine ideal limit vs fidelity map and enumeration oracle", 5.0, fock_ideal_limit},
        {6, "mode-mismatch worst case (calibrated convention)", 120.0, mode_mismatch},
        {7, "physicality suite on 1000 random cases", 60.0, physicality},
        {8, "mode-mismatch CSV determinism, serial vs parallel", 120.0, determinism},
    };

    int failed = 0;
    for (const auto& criterion : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.body(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        check.expect(seconds < criterion.time_limit_s,
                     fmt("runtime %.2f s exceeds %.0f s", seconds, criterion.time_limit_s));
        std::printf("[%s] criterion %d: %s (%.2f s)%s\n", check.passed() ? "PASS" : "FAIL", criterion.id,
                    criterion.title, seconds, check.summary().c_str());
        if (!check.passed()) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
