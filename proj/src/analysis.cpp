#include "tju/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <thread>

namespace tju {

namespace {

constexpr double unitarity_tolerance = 1e-8;

void require_unitary(const Matrix &u, const char *what) {
    if (unitarity_defect(u) > unitarity_tolerance) {
        throw DomainError(std::string("antifidelity_bound: ") + what + " is not unitary");
    }
}

// Runs task(i) for i in [0, n) on up to `threads` workers. Each task writes
// only its own slot, so results do not depend on scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &task) {
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::vector<int> checked_orders(std::span<const int> orders) {
    std::vector<int> out(orders.begin(), orders.end());
    for (const int o : out) {
        if (o != 1 && o != 2) {
            throw DomainError("sweep: Trotter order must be 1 or 2");
        }
    }
    if (out.empty()) {
        throw DomainError("sweep: no Trotter orders requested");
    }
    return out;
}

} // namespace

double operator_distance(const Operator &a, const Operator &b, NormKind norm) {
    if (a.dim() != b.dim()) {
        throw DomainError("operator_distance: dimensions " + std::to_string(a.dim()) + " and " +
                          std::to_string(b.dim()) + " differ");
    }
    require_same_basis(a.basis(), b.basis(), "operator_distance");
    const Matrix diff = a.matrix() - b.matrix();
    return norm == NormKind::Spectral ? spectral_norm(diff) : frobenius_norm(diff);
}

double phase_aligned_distance(const Operator &a, const Operator &b) {
    require_same_basis(a.basis(), b.basis(), "phase_aligned_distance");
    const auto at = [&](double theta) {
        return spectral_norm(a.matrix() - std::polar(1.0, theta) * b.matrix());
    };
    constexpr int grid = 64;
    int best = 0;
    double best_value = at(0.0);
    for (int k = 1; k < grid; ++k) {
        const double v = at(2.0 * pi * k / grid);
        if (v < best_value) {
            best_value = v;
            best = k;
        }
    }
    // golden-section refinement around the best grid point
    const double width = 2.0 * pi / grid;
    double lo = 2.0 * pi * best / grid - width;
    double hi = 2.0 * pi * best / grid + width;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - g * (hi - lo);
    double d = lo + g * (hi - lo);
    double fc = at(c);
    double fd = at(d);
    for (int it = 0; it < 60; ++it) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = at(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = at(d);
        }
    }
    return std::min({best_value, fc, fd});
}

FidelityBound bound_from_distance(double distance) {
    FidelityBound b;
    b.squared_distance = distance * distance;
    if (b.squared_distance > 2.0) {
        b.value = 1.0;
        b.clamped = true;
    } else {
        b.value = b.squared_distance;
    }
    return b;
}

FidelityBound antifidelity_bound(const Operator &u_sim, const Operator &u_exact, NormKind norm) {
    require_same_basis(u_sim.basis(), u_exact.basis(), "antifidelity_bound");
    require_unitary(u_sim.matrix(), "simulated propagator");
    require_unitary(u_exact.matrix(), "exact propagator");
    return bound_from_distance(operator_distance(u_sim, u_exact, norm));
}

double antifidelity_state(const Vector &psi, const Operator &u_sim, const Operator &u_exact) {
    require_same_basis(u_sim.basis(), u_exact.basis(), "antifidelity_state");
    if (psi.size() != u_sim.dim()) {
        throw DomainError("antifidelity_state: state dimension mismatch");
    }
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
        throw DomainError("antifidelity_state: input state is not normalised");
    }
    const Vector a = u_sim.matrix() * psi;
    const Vector b = u_exact.matrix() * psi;
    const double overlap = std::norm(a.dot(b));
    return std::clamp(1.0 - overlap, 0.0, 1.0);
}

BoundEvaluator::BoundEvaluator(const ProtocolSchedule &schedule, const SectorChoice &sector) {
    schedule.validate();
    const int sites = schedule.model.sites;
    const ModelParams target = target_model(schedule);

    std::vector<BasisPtr> bases;
    if (sector.spin) {
        bases.push_back(enumerate_basis(sites, ParticleSector{sector.spin->up + sector.spin->down}));
        // validates the sector counts
        (void)enumerate_basis(sites, *sector.spin);
    } else if (sector.dense) {
        bases.push_back(enumerate_basis(sites));
    } else {
        bases = particle_number_blocks(sites);
    }
    for (const auto &basis : bases) {
        std::vector<Index> columns;
        if (sector.spin) {
            for (Index i = 0; i < basis->dim(); ++i) {
                const FockState s = basis->state(i);
                if (s.particles(Spin::Up) == sector.spin->up &&
                    s.particles(Spin::Down) == sector.spin->down) {
                    columns.push_back(i);
                }
            }
            dimension_ += static_cast<Index>(columns.size());
        } else {
            dimension_ += basis->dim();
        }
        blocks_.push_back(Block{ProtocolEngine(basis, schedule),
                                SpectralPropagator(build_tju(basis, target)), std::move(columns)});
    }
}

FidelityBound BoundEvaluator::bound(double total_time, int steps, int order) const {
    double distance = 0.0;
    for (const Block &block : blocks_) {
        const Operator sim = block.engine.evolve(total_time, steps, order);
        const Operator exact = block.exact.at(total_time);
        require_unitary(sim.matrix(), "simulated propagator");
        require_unitary(exact.matrix(), "exact propagator");
        const Matrix diff = sim.matrix() - exact.matrix();
        double d = 0.0;
        if (block.columns.empty()) {
            d = spectral_norm(diff);
        } else {
            Matrix cols(diff.rows(), static_cast<Index>(block.columns.size()));
            for (std::size_t k = 0; k < block.columns.size(); ++k) {
                cols.col(static_cast<Index>(k)) = diff.col(block.columns[k]);
            }
            d = spectral_norm(cols);
        }
        distance = std::max(distance, d);
    }
    return bound_from_distance(distance);
}

std::vector<BlockPropagators> BoundEvaluator::propagators(double total_time, int steps,
                                                          int order) const {
    std::vector<BlockPropagators> out;
    out.reserve(blocks_.size());
    for (const Block &block : blocks_) {
        out.push_back({block.engine.basis_ptr(), block.engine.evolve(total_time, steps, order),
                       block.exact.at(total_time), block.columns});
    }
    return out;
}

StateSampleStats sample_state_antifidelity(const std::vector<BlockPropagators> &blocks,
                                           int samples, std::uint64_t seed) {
    if (samples < 1) {
        throw DomainError("sample_state_antifidelity: samples must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    StateSampleStats stats;
    stats.samples = samples;
    double sum = 0.0;
    for (int s = 0; s < samples; ++s) {
        std::vector<Vector> parts;
        double norm2 = 0.0;
        for (const auto &block : blocks) {
            Vector v = Vector::Zero(block.simulated.dim());
            auto fill = [&](Index i) {
                v(i) = Scalar(gauss(rng), gauss(rng));
            };
            if (block.columns.empty()) {
                for (Index i = 0; i < v.size(); ++i) {
                    fill(i);
                }
            } else {
                for (const Index i : block.columns) {
                    fill(i);
                }
            }
            norm2 += v.squaredNorm();
            parts.push_back(std::move(v));
        }
        Scalar overlap(0.0, 0.0);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const Vector a = blocks[b].simulated.matrix() * parts[b];
            const Vector e = blocks[b].exact.matrix() * parts[b];
            overlap += a.dot(e);
        }
        overlap /= norm2;
        const double f = std::clamp(1.0 - std::norm(overlap), 0.0, 1.0);
        stats.max = std::max(stats.max, f);
        sum += f;
    }
    stats.mean = sum / samples;
    return stats;
}

FidelityBound protocol_bound(const ProtocolSchedule &schedule, const SectorChoice &sector) {
    return BoundEvaluator(schedule, sector).bound(schedule.total_time, schedule.steps, schedule.order);
}

std::vector<SweepRow> sweep_time(const ProtocolSchedule &base, std::span<const double> times,
                                 std::span<const int> orders, int steps,
                                 const SweepOptions &options) {
    const auto ords = checked_orders(orders);
    for (const double t : times) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw DomainError("sweep_time: times must be positive and finite");
        }
    }
    const BoundEvaluator evaluator(base, options.sector);
    std::vector<SweepRow> rows(times.size() * ords.size());
    parallel_for(rows.size(), options.threads, [&](std::size_t i) {
        const double tau = times[i / ords.size()];
        const int order = ords[i % ords.size()];
        rows[i] = {tau, order, evaluator.bound(tau, steps, order)};
    });
    return rows;
}

std::vector<SweepRow> sweep_steps(const ProtocolSchedule &base, double total_time,
                                  std::span<const int> steps, std::span<const int> orders,
                                  const SweepOptions &options) {
    const auto ords = checked_orders(orders);
    for (const int m : steps) {
        if (m < 1) {
            throw DomainError("sweep_steps: step counts must be >= 1");
        }
    }
    const BoundEvaluator evaluator(base, options.sector);
    std::vector<SweepRow> rows(steps.size() * ords.size());
    parallel_for(rows.size(), options.threads, [&](std::size_t i) {
        const int m = steps[i / ords.size()];
        const int order = ords[i % ords.size()];
        rows[i] = {static_cast<double>(m), order, evaluator.bound(total_time, m, order)};
    });
    return rows;
}

std::vector<SweepRow> sweep_sites(const ProtocolSchedule &base, std::span<const int> sites,
                                  double total_time, std::span<const int> orders,
                                  const SweepOptions &options) {
    const auto ords = checked_orders(orders);
    for (const int m : sites) {
        if (m < 2) {
            throw DomainError("sweep_sites: chains need at least 2 sites");
        }
        if (m > options.max_sites) {
            throw DomainError("sweep_sites: M = " + std::to_string(m) +
                              " exceeds the dense-feasibility cap of " +
                              std::to_string(options.max_sites) +
                              " sites (full space 4^M); lower M or raise max_sites");
        }
    }
    std::vector<SweepRow> rows(sites.size() * ords.size());
    parallel_for(sites.size(), options.threads, [&](std::size_t k) {
        ProtocolSchedule schedule = base;
        schedule.model.sites = sites[k];
        const BoundEvaluator evaluator(schedule, options.sector);
        for (std::size_t o = 0; o < ords.size(); ++o) {
            rows[k * ords.size() + o] = {static_cast<double>(sites[k]), ords[o],
                                         evaluator.bound(total_time, 1, ords[o])};
        }
    });
    return rows;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("fit_loglog_slope: need at least two (x, y) pairs");
    }
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw DomainError("fit_loglog_slope: values must be positive");
        }
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace tju
