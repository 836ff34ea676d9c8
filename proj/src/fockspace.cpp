#include "tju/fockspace.hpp"

#include <algorithm>
#include <string>

namespace tju {

namespace {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

// Calls f(mask) for every n-bit mask with k bits set, in ascending order.
template <typename F>
void for_each_combination(int n, int k, F &&f) {
    if (k == 0) {
        f(std::uint64_t{0});
        return;
    }
    if (k > n) {
        return;
    }
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (mask < limit) {
        f(mask);
        const std::uint64_t c = mask & -mask;
        const std::uint64_t r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

// Spreads the bits of a site mask onto the even (up) mode positions.
std::uint32_t spread_to_modes(std::uint64_t site_mask, int spin_offset) {
    std::uint32_t bits = 0;
    for (int j = 0; site_mask != 0; ++j, site_mask >>= 1) {
        if (site_mask & 1U) {
            bits |= 1U << (2 * j + spin_offset);
        }
    }
    return bits;
}

constexpr std::uint64_t max_dimension = std::uint64_t{1} << 24;

} // namespace

FockState make_state(std::initializer_list<std::pair<int, Spin>> occupied) {
    FockState s;
    for (const auto &[site, spin] : occupied) {
        s.bits |= 1U << mode_index(site, spin);
    }
    return s;
}

std::optional<SignedState> apply_mode_op(FockState state, int site, Spin spin,
                                         ModeAction action) {
    const int mode = mode_index(site, spin);
    const std::uint32_t bit = 1U << mode;
    const bool occ = (state.bits & bit) != 0;
    if ((action == ModeAction::Create) == occ) {
        return std::nullopt;
    }
    const int below = std::popcount(state.bits & (bit - 1U));
    state.bits ^= bit;
    return SignedState{state, (below % 2 == 0) ? 1 : -1};
}

std::optional<SignedState> apply_mode_string(FockState state, std::span<const ModeOp> ops) {
    int sign = 1;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        const auto r = apply_mode_op(state, it->site, it->spin, it->action);
        if (!r) {
            return std::nullopt;
        }
        state = r->state;
        sign *= r->sign;
    }
    return SignedState{state, sign};
}

Basis::Basis(int sites, Sector sector, std::vector<FockState> states)
    : sites_(sites), sector_(sector), states_(std::move(states)) {}

std::optional<Index> Basis::index_of(FockState state) const {
    if (is_full()) {
        if (state.bits >= (std::uint64_t{1} << modes())) {
            return std::nullopt;
        }
        return static_cast<Index>(state.bits);
    }
    const auto it = std::lower_bound(states_.begin(), states_.end(), state);
    if (it == states_.end() || *it != state) {
        return std::nullopt;
    }
    return static_cast<Index>(it - states_.begin());
}

BasisPtr enumerate_basis(int sites, Sector sector) {
    if (sites < 1 || sites > max_sites) {
        throw DomainError("enumerate_basis: site count must be in [1, " +
                          std::to_string(max_sites) + "], got " + std::to_string(sites));
    }
    const int modes = 2 * sites;
    std::vector<FockState> states;

    if (std::holds_alternative<std::monostate>(sector)) {
        const std::uint64_t dim = std::uint64_t{1} << modes;
        if (dim > max_dimension) {
            throw DomainError("enumerate_basis: full space of " + std::to_string(sites) +
                              " sites is too large for dense storage");
        }
        states.resize(dim);
        for (std::uint64_t b = 0; b < dim; ++b) {
            states[b].bits = static_cast<std::uint32_t>(b);
        }
    } else if (const auto *s = std::get_if<SpinSector>(&sector)) {
        if (s->up < 0 || s->up > sites || s->down < 0 || s->down > sites) {
            throw DomainError("enumerate_basis: spin sector (" + std::to_string(s->up) + "," +
                              std::to_string(s->down) + ") invalid for " +
                              std::to_string(sites) + " sites");
        }
        if (binomial(sites, s->up) * binomial(sites, s->down) > max_dimension) {
            throw DomainError("enumerate_basis: sector too large for dense storage");
        }
        for_each_combination(sites, s->up, [&](std::uint64_t up) {
            const std::uint32_t up_bits = spread_to_modes(up, 0);
            for_each_combination(sites, s->down, [&](std::uint64_t down) {
                states.push_back(FockState{up_bits | spread_to_modes(down, 1)});
            });
        });
        std::sort(states.begin(), states.end());
    } else {
        const auto &p = std::get<ParticleSector>(sector);
        if (p.particles < 0 || p.particles > modes) {
            throw DomainError("enumerate_basis: particle number " +
                              std::to_string(p.particles) + " invalid for " +
                              std::to_string(sites) + " sites");
        }
        if (binomial(modes, p.particles) > max_dimension) {
            throw DomainError("enumerate_basis: sector too large for dense storage");
        }
        for_each_combination(modes, p.particles, [&](std::uint64_t bits) {
            states.push_back(FockState{static_cast<std::uint32_t>(bits)});
        });
    }
    return std::make_shared<const Basis>(sites, sector, std::move(states));
}

std::vector<BasisPtr> particle_number_blocks(int sites) {
    std::vector<BasisPtr> blocks;
    for (int n = 0; n <= 2 * sites; ++n) {
        blocks.push_back(enumerate_basis(sites, ParticleSector{n}));
    }
    return blocks;
}

} // namespace tju
