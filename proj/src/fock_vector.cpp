#include "purify/fock_vector.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace purify {

namespace {

double sqrt_factorial_product(const Occupation& occupation) {
    double product = 1.0;
    for (auto n : occupation) {
        for (int k = 2; k <= n; ++k) product *= k;
    }
    return std::sqrt(product);
}

}  // namespace

int photon_count(const Occupation& occupation) {
    return std::accumulate(occupation.begin(), occupation.end(), 0);
}

FockVector FockVector::vacuum() {
    FockVector v;
    v.terms_.emplace(Occupation{}, Amplitude{1.0, 0.0});
    return v;
}

void FockVector::add(const Occupation& occupation, Amplitude amplitude) {
    if (amplitude == Amplitude{}) return;
    auto [it, inserted] = terms_.try_emplace(occupation, amplitude);
    if (!inserted) {
        it->second += amplitude;
        if (it->second == Amplitude{}) terms_.erase(it);
    }
}

double FockVector::norm2() const {
    double sum = 0.0;
    for (const auto& [occ, amp] : terms_) sum += std::norm(amp);
    return sum;
}

std::optional<int> FockVector::photon_number() const {
    std::optional<int> n;
    for (const auto& [occ, amp] : terms_) {
        const int count = photon_count(occ);
        if (n && *n != count) throw std::logic_error("Fock vector mixes photon numbers");
        n = count;
    }
    return n;
}

FockVector FockVector::create(std::span<const std::pair<ModeIndex, Amplitude>> superposition) const {
    FockVector out;
    for (const auto& [occ, amp] : terms_) {
        for (const auto& [mode, coeff] : superposition) {
            Occupation next = occ;
            const int m = mode.flat();
            next[m] += 1;
            out.add(next, amp * coeff * std::sqrt(static_cast<double>(next[m])));
        }
    }
    return out;
}

FockVector FockVector::map_modes(const std::function<std::optional<ModeImage>(ModeIndex)>& image) const {
    std::array<ModeImage, kModeCount> images;
    for (int m = 0; m < kModeCount; ++m) {
        const ModeIndex mode = ModeIndex::from_flat(m);
        images[m] = image(mode).value_or(ModeImage{{mode, Amplitude{1.0, 0.0}}});
    }

    FockVector out;
    for (const auto& [occ, amp] : terms_) {
        // Expand prod_m (a_m^dag)^n_m / sqrt(n_m!) photon by photon, tracking
        // occupations of the output creation-operator monomials.
        std::map<Occupation, Amplitude> partial{{Occupation{}, amp / sqrt_factorial_product(occ)}};
        for (int m = 0; m < kModeCount; ++m) {
            for (int photon = 0; photon < occ[m]; ++photon) {
                std::map<Occupation, Amplitude> next;
                for (const auto& [mono, coeff] : partial) {
                    for (const auto& [target, c] : images[m]) {
                        Occupation grown = mono;
                        grown[target.flat()] += 1;
                        next[grown] += coeff * c;
                    }
                }
                partial = std::move(next);
            }
        }
        for (const auto& [mono, coeff] : partial) out.add(mono, coeff * sqrt_factorial_product(mono));
    }
    return out;
}

}  // namespace purify
