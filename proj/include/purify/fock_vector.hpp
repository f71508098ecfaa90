#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace purify {

enum class Party : std::uint8_t { A, B };
enum class Path : std::uint8_t { In1, In2, OutKeep, OutDetect };
enum class Pol : std::uint8_t { H, V };

/// Orthonormal temporal components available per party (one per distinct delay).
inline constexpr int kTemporalSlots = 2;

struct ModeIndex {
    Party party;
    Path path;
    Pol pol;
    std::uint8_t temporal = 0;

    constexpr int flat() const noexcept {
        return ((static_cast<int>(party) * 4 + static_cast<int>(path)) * 2 + static_cast<int>(pol)) * kTemporalSlots +
               temporal;
    }
    static constexpr ModeIndex from_flat(int index) noexcept {
        const auto temporal = static_cast<std::uint8_t>(index % kTemporalSlots);
        index /= kTemporalSlots;
        const auto pol = static_cast<Pol>(index % 2);
        index /= 2;
        const auto path = static_cast<Path>(index % 4);
        return {static_cast<Party>(index / 4), path, pol, temporal};
    }

    friend constexpr bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

inline constexpr int kModeCount = 2 * 4 * 2 * kTemporalSlots;

using Occupation = std::array<std::uint8_t, kModeCount>;
using Amplitude = std::complex<double>;

/// Image of one mode under a passive linear transformation: a_m^dag -> sum_k c_k a_{m_k}^dag.
using ModeImage = std::vector<std::pair<ModeIndex, Amplitude>>;

/// Sparse bosonic state over ModeIndex occupations.
class FockVector {
  public:
    using TermMap = std::map<Occupation, Amplitude>;

    static FockVector vacuum();

    void add(const Occupation& occupation, Amplitude amplitude);

    const TermMap& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }
    double norm2() const;

    /// Common photon number of all terms; nullopt for the zero vector.
    /// Throws std::logic_error when terms carry different photon numbers.
    std::optional<int> photon_number() const;

    /// Applies the creation operator sum_k c_k a_{m_k}^dag.
    FockVector create(std::span<const std::pair<ModeIndex, Amplitude>> superposition) const;

    /// Substitutes every creation operator by its image. Modes without an
    /// explicit image are left untouched.
    FockVector map_modes(const std::function<std::optional<ModeImage>(ModeIndex)>& image) const;

  private:
    TermMap terms_;
};

int photon_count(const Occupation& occupation);

}  // namespace purify
