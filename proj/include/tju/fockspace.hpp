#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "tju/types.hpp"

namespace tju {

inline constexpr int max_sites = 16;

/// Mode ordering is site-major with spin up before spin down.
constexpr int mode_index(int site, Spin spin) {
    return 2 * site + (spin == Spin::Down ? 1 : 0);
}

/// Occupation bit-pattern over 2M fermionic modes.
struct FockState {
    std::uint32_t bits = 0;

    constexpr bool occupied(int mode) const { return ((bits >> mode) & 1U) != 0; }
    constexpr int particles() const { return std::popcount(bits); }
    constexpr int particles(Spin spin) const {
        constexpr std::uint32_t up_mask = 0x55555555U;
        return std::popcount(bits & (spin == Spin::Up ? up_mask : ~up_mask));
    }
    constexpr bool doubly_occupied(int site) const {
        return occupied(mode_index(site, Spin::Up)) && occupied(mode_index(site, Spin::Down));
    }

    friend constexpr auto operator<=>(FockState, FockState) = default;
};

/// Fock state from an explicit list of occupied (site, spin) modes.
FockState make_state(std::initializer_list<std::pair<int, Spin>> occupied);

constexpr int occupation(FockState state, int site, Spin spin) {
    return state.occupied(mode_index(site, spin)) ? 1 : 0;
}

enum class ModeAction { Create, Annihilate };

struct ModeOp {
    int site;
    Spin spin;
    ModeAction action;
};

struct SignedState {
    FockState state;
    int sign; // +1 or -1
};

/// Applies one creation or annihilation operator. The sign is the
/// Jordan-Wigner parity of the occupied modes below the target mode; an empty
/// result means the state was annihilated (Pauli blocking or empty mode).
std::optional<SignedState> apply_mode_op(FockState state, int site, Spin spin,
                                         ModeAction action);

/// Applies a product of mode operators; ops are applied right to left, as in
/// the written operator string c_a^dagger c_b = {create a, annihilate b}.
std::optional<SignedState> apply_mode_string(FockState state, std::span<const ModeOp> ops);

struct SpinSector {
    int up;
    int down;
    friend bool operator==(const SpinSector &, const SpinSector &) = default;
};

struct ParticleSector {
    int particles;
    friend bool operator==(const ParticleSector &, const ParticleSector &) = default;
};

/// Full Fock space, fixed (N_up, N_down), or fixed total particle number.
using Sector = std::variant<std::monostate, SpinSector, ParticleSector>;

/// Ordered occupation basis (ascending bit pattern) with its inverse map.
class Basis {
  public:
    Basis(int sites, Sector sector, std::vector<FockState> states);

    int sites() const { return sites_; }
    int modes() const { return 2 * sites_; }
    Index dim() const { return static_cast<Index>(states_.size()); }
    const Sector &sector() const { return sector_; }
    bool is_full() const { return std::holds_alternative<std::monostate>(sector_); }

    const std::vector<FockState> &states() const { return states_; }
    FockState state(Index i) const { return states_[static_cast<std::size_t>(i)]; }
    std::optional<Index> index_of(FockState state) const;

    friend bool operator==(const Basis &a, const Basis &b) {
        return a.sites_ == b.sites_ && a.sector_ == b.sector_;
    }

  private:
    int sites_;
    Sector sector_;
    std::vector<FockState> states_;
};

using BasisPtr = std::shared_ptr<const Basis>;

/// Enumerates the full space (4^M states) or the requested sector.
BasisPtr enumerate_basis(int sites, Sector sector = {});

/// All particle-number sectors N = 0..2M; their direct sum is the full space.
std::vector<BasisPtr> particle_number_blocks(int sites);

} // namespace tju
