#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tju/protocol.hpp"

namespace tju {

enum class NormKind { Spectral, Frobenius };

/// ||A - B|| in the spectral norm (default) or the Frobenius norm, which
/// dominates it.
double operator_distance(const Operator &a, const Operator &b, NormKind norm = NormKind::Spectral);

/// min over theta of ||A - exp(i theta) B||_2. Not used for the figure data.
double phase_aligned_distance(const Operator &a, const Operator &b);

struct FidelityBound {
    double value = 0.0;            // reported bound on 1 - |<psi|psi0>|^2
    double squared_distance = 0.0; // ||U - U0||^2
    bool clamped = false;          // squared distance exceeded 2, value set to 1
};

FidelityBound bound_from_distance(double distance);

/// ||U_sim - U_exact||^2, clamped to 1 and flagged when it exceeds 2.
/// Both inputs must be unitary to 1e-8.
FidelityBound antifidelity_bound(const Operator &u_sim, const Operator &u_exact,
                                 NormKind norm = NormKind::Spectral);

/// 1 - |<U_sim psi | U_exact psi>|^2 for normalised psi.
double antifidelity_state(const Vector &psi, const Operator &u_sim, const Operator &u_exact);

/// How a bound over the Fock space is evaluated. By default the full space is
/// handled as the direct sum of its particle-number blocks, which every
/// propagator here preserves; `dense` builds one 4^M matrix instead. With
/// `spin` set only input states from that (N_up, N_down) sector are bounded.
struct SectorChoice {
    std::optional<SpinSector> spin;
    bool dense = false;
};

/// Simulated and exact propagators on one block, plus the block columns the
/// bound is taken over (empty means all).
struct BlockPropagators {
    BasisPtr basis;
    Operator simulated;
    Operator exact;
    std::vector<Index> columns;
};

/// Protocol propagator against the exact t-J-U propagator, per block.
class BoundEvaluator {
  public:
    BoundEvaluator(const ProtocolSchedule &schedule, const SectorChoice &sector = {});

    FidelityBound bound(double total_time, int steps, int order) const;
    std::vector<BlockPropagators> propagators(double total_time, int steps, int order) const;
    Index dimension() const { return dimension_; }

  private:
    struct Block {
        ProtocolEngine engine;
        SpectralPropagator exact;
        std::vector<Index> columns; // empty means all
    };
    std::vector<Block> blocks_;
    Index dimension_ = 0;
};

struct StateSampleStats {
    int samples = 0;
    double max = 0.0;
    double mean = 0.0;
};

/// State anti-fidelity for Haar-like random inputs spread over all blocks
/// (complex Gaussian amplitudes, normalised). Deterministic for a seed.
StateSampleStats sample_state_antifidelity(const std::vector<BlockPropagators> &blocks,
                                           int samples, std::uint64_t seed);

FidelityBound protocol_bound(const ProtocolSchedule &schedule, const SectorChoice &sector = {});

struct SweepOptions {
    SectorChoice sector;
    unsigned threads = 0; // 0: hardware concurrency
    int max_sites = 6;
};

/// One point of a sweep; x is tau, m or M depending on the sweep.
struct SweepRow {
    double x = 0.0;
    int order = 1;
    FidelityBound bound;
};

/// Bound vs total time at fixed step count. Rows are ordered by grid index,
/// then by order.
std::vector<SweepRow> sweep_time(const ProtocolSchedule &base, std::span<const double> times,
                                 std::span<const int> orders, int steps = 1,
                                 const SweepOptions &options = {});

/// Bound vs number of Trotter steps at fixed total time.
std::vector<SweepRow> sweep_steps(const ProtocolSchedule &base, double total_time,
                                  std::span<const int> steps, std::span<const int> orders,
                                  const SweepOptions &options = {});

/// Bound vs chain length at fixed time and m = 1.
std::vector<SweepRow> sweep_sites(const ProtocolSchedule &base, std::span<const int> sites,
                                  double total_time, std::span<const int> orders,
                                  const SweepOptions &options = {});

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

} // namespace tju
