#include <catch_amalgamated.hpp>

#include <cmath>

#include "support/oracles.hpp"
#include "tju/analysis.hpp"
#include "tju/linalg.hpp"

using namespace tju;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ProtocolSchedule steps_schedule(int sites) {
    ProtocolSchedule s;
    s.model.sites = sites;
    s.model.u = 10.0;
    s.model.set_isotropic_j(0.3);
    return s;
}

ProtocolSchedule time_schedule(int sites) {
    ProtocolSchedule s;
    s.model.sites = sites;
    s.model.u = 5.0;
    s.model.set_isotropic_j(0.3);
    s.effective_u = -2.0;
    s.phase_winding = true;
    return s;
}

} // namespace

TEST_CASE("operator distance", "[analysis]") {
    const auto basis = enumerate_basis(2);
    const Operator id = Operator::identity(basis);
    CHECK(operator_distance(id, id) == 0.0);
    for (double theta : {0.1, 1.0, 2.5, pi}) {
        const Operator rot = id * std::exp(Scalar(0, theta));
        CHECK_THAT(operator_distance(id, rot), WithinAbs(2 * std::abs(std::sin(theta / 2)), 1e-14));
        CHECK_THAT(phase_aligned_distance(id, rot), WithinAbs(0.0, 1e-12));
    }
    std::mt19937_64 rng(21);
    for (int k = 0; k < 5; ++k) {
        const Operator a(basis, oracle::random_unitary(16, rng));
        const Operator b(basis, oracle::random_unitary(16, rng));
        const double d = operator_distance(a, b);
        CHECK_THAT(d, WithinAbs(oracle::svd_norm(a.matrix() - b.matrix()), 1e-12));
        CHECK(operator_distance(a, b, NormKind::Frobenius) >= d);
        CHECK(phase_aligned_distance(a, b) <= d + 1e-14);
    }
    CHECK_THROWS_AS(operator_distance(id, Operator::identity(enumerate_basis(1))), DomainError);
}

TEST_CASE("anti-fidelity bound", "[analysis]") {
    const auto basis = enumerate_basis(2);
    std::mt19937_64 rng(4);
    const Operator u(basis, oracle::random_unitary(16, rng));
    CHECK(antifidelity_bound(u, u).value == 0.0);

    SECTION("clamps exactly when the squared distance exceeds 2") {
        CHECK_FALSE(bound_from_distance(std::sqrt(2.0) * (1 - 1e-12)).clamped);
        const auto over = bound_from_distance(std::sqrt(2.0) * (1 + 1e-12));
        CHECK(over.clamped);
        CHECK(over.value == 1.0);
        CHECK(over.squared_distance > 2.0);
        const Operator id = Operator::identity(basis);
        const auto flipped = antifidelity_bound(id, id * Scalar(-1.0));
        CHECK(flipped.clamped);
        CHECK_THAT(flipped.squared_distance, WithinAbs(4.0, 1e-14));
    }
    SECTION("rejects non-unitary input") {
        Operator bad = u;
        bad.matrix()(0, 0) += 1e-6;
        CHECK_THROWS_AS(antifidelity_bound(bad, u), DomainError);
    }
    SECTION("state anti-fidelity") {
        const Vector psi = oracle::random_state(16, rng);
        CHECK_THAT(antifidelity_state(psi, u, u), WithinAbs(0.0, 1e-14));
        Vector e0 = Vector::Zero(16);
        e0(0) = 1.0;
        Matrix swap = Matrix::Identity(16, 16);
        swap.col(0).swap(swap.col(1));
        const Operator s(basis, swap);
        CHECK_THAT(antifidelity_state(e0, Operator::identity(basis), s), WithinAbs(1.0, 1e-15));
        CHECK_THROWS_AS(antifidelity_state(2.0 * psi, u, u), DomainError);
    }
}

TEST_CASE("regression value for a first-order step on two sites", "[analysis]") {
    ProtocolSchedule s = steps_schedule(2);
    s.total_time = 0.01;
    const double frozen = 5.0591737794e-10;
    const FidelityBound b = protocol_bound(s);
    CHECK_FALSE(b.clamped);
    CHECK_THAT(b.value, WithinRel(frozen, 1e-6));

    // the same number from the Pauli-string oracle: Z Y X L with each factor
    // exponentiated by a general eigendecomposition
    const oracle::Fermions f(2);
    const double tau = 0.01;
    const Scalar mi(0, -tau);
    const Matrix l = oracle::expm_eig(mi * oracle::hubbard(f, 1.0, 10.0));
    const Matrix x = oracle::expm_eig(mi * oracle::spin_coupling(f, 0.3, 0, 0));
    const Matrix y = oracle::expm_eig(mi * oracle::spin_coupling(f, 0, 0.3, 0));
    const Matrix z = oracle::expm_eig(mi * oracle::spin_coupling(f, 0, 0, 0.3));
    const Matrix exact =
        oracle::expm_eig(mi * (oracle::hubbard(f, 1.0, 10.0) + oracle::spin_coupling(f, .3, .3, .3)));
    const double d = oracle::svd_norm(z * y * x * l - exact);
    CHECK_THAT(d * d, WithinRel(frozen, 1e-6));
}

TEST_CASE("block evaluation matches the dense full space", "[analysis]") {
    for (int sites : {2, 3}) {
        for (int order : {1, 2}) {
            ProtocolSchedule s = time_schedule(sites);
            s.total_time = 0.7;
            s.steps = 3;
            s.order = order;
            SectorChoice dense;
            dense.dense = true;
            const double blocks = protocol_bound(s).squared_distance;
            const double full = protocol_bound(s, dense).squared_distance;
            CHECK_THAT(blocks, WithinRel(full, 1e-9));
        }
    }
    // a spin sector never exceeds the full bound
    ProtocolSchedule s = steps_schedule(3);
    s.total_time = 1.0;
    SectorChoice sector;
    sector.spin = SpinSector{1, 1};
    CHECK(protocol_bound(s, sector).value <= protocol_bound(s).value + 1e-15);
    sector.spin = SpinSector{4, 0};
    CHECK_THROWS_AS(protocol_bound(s, sector), DomainError);
}

TEST_CASE("bound dominates sampled state anti-fidelity", "[analysis]") {
    ProtocolSchedule s = steps_schedule(2);
    s.total_time = 1.0;
    s.steps = 2;
    const BoundEvaluator evaluator(s);
    const auto blocks = evaluator.propagators(1.0, 2, 1);
    const auto stats = sample_state_antifidelity(blocks, 100, 7);
    CHECK(stats.samples == 100);
    CHECK(stats.max <= evaluator.bound(1.0, 2, 1).value + 1e-12);
    CHECK(stats.mean <= stats.max);
    const auto again = sample_state_antifidelity(blocks, 100, 7);
    CHECK(again.max == stats.max);
    CHECK_THROWS_AS(sample_state_antifidelity(blocks, 0, 7), DomainError);
}

TEST_CASE("time sweep", "[analysis][slow]") {
    const ProtocolSchedule s = time_schedule(3);
    std::vector<double> taus;
    for (int k = 0; k <= 8; ++k) {
        taus.push_back(1e-3 * std::pow(10.0, k / 8.0));
    }
    const std::vector<int> orders{1, 2};
    const auto rows = sweep_time(s, taus, orders);
    REQUIRE(rows.size() == 18);
    std::vector<double> b1, b2;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].x == taus[i / 2]);
        CHECK(rows[i].order == (i % 2 == 0 ? 1 : 2));
        (rows[i].order == 1 ? b1 : b2).push_back(rows[i].bound.value);
    }
    for (std::size_t k = 0; k + 1 < taus.size(); ++k) {
        CHECK(b1[k] < b1[k + 1]);
        CHECK(b2[k] < b2[k + 1]);
        CHECK(b2[k] < b1[k]);
    }
    CHECK_THAT(fit_loglog_slope(taus, b1), WithinAbs(4.0, 0.3));
    CHECK_THAT(fit_loglog_slope(taus, b2), WithinAbs(6.0, 0.45));

    // thread count does not change the numbers
    SweepOptions one;
    one.threads = 1;
    SweepOptions three;
    three.threads = 3;
    const auto r1 = sweep_time(s, taus, orders, 1, one);
    const auto r3 = sweep_time(s, taus, orders, 1, three);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].bound.value == r3[i].bound.value);
    }
    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(sweep_time(s, bad, orders), DomainError);
    const std::vector<int> bad_order{3};
    CHECK_THROWS_AS(sweep_time(s, taus, bad_order), DomainError);
}

TEST_CASE("step sweep", "[analysis]") {
    const ProtocolSchedule s = steps_schedule(3);
    const std::vector<int> ms{20, 40, 80, 160};
    const std::vector<int> orders{1, 2};
    const auto rows = sweep_steps(s, 5.0, ms, orders);
    for (int order : orders) {
        double last = 2.0;
        for (const auto &r : rows) {
            if (r.order == order) {
                CHECK(r.bound.value <= last + 1e-12);
                last = r.bound.value;
            }
        }
    }
    const std::vector<int> zero{0};
    CHECK_THROWS_AS(sweep_steps(s, 5.0, zero, orders), DomainError);
}

TEST_CASE("site sweep", "[analysis]") {
    const ProtocolSchedule s = steps_schedule(2);
    const std::vector<int> sites{2, 3, 4};
    const std::vector<int> orders{1};
    const auto rows = sweep_sites(s, sites, 0.01, orders);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].bound.value < rows[1].bound.value);
    CHECK(rows[1].bound.value < rows[2].bound.value);
    // each point is an ordinary single evaluation
    for (const auto &r : rows) {
        ProtocolSchedule single = s;
        single.model.sites = static_cast<int>(r.x);
        single.total_time = 0.01;
        CHECK(protocol_bound(single).value == r.bound.value);
    }
    const std::vector<int> too_big{7};
    CHECK_THROWS_AS(sweep_sites(s, too_big, 0.01, orders), DomainError);
    const std::vector<int> too_small{1};
    CHECK_THROWS_AS(sweep_sites(s, too_small, 0.01, orders), DomainError);
}

TEST_CASE("log-log slope", "[analysis]") {
    const std::vector<double> x{1, 2, 4, 8};
    const std::vector<double> y{3, 3 * 16.0, 3 * 256.0, 3 * 4096.0};
    CHECK_THAT(fit_loglog_slope(x, y), WithinAbs(4.0, 1e-12));
    const std::vector<double> shortx{1};
    CHECK_THROWS_AS(fit_loglog_slope(shortx, shortx), DomainError);
}
