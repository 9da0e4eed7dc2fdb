#include "doctest.h"

#include <bit>
#include <cmath>

#include "spinonsim/errors.hpp"
#include "spinonsim/spinon.hpp"

#include "oracles.hpp"

using namespace spinonsim;

namespace {
const std::uint64_t kUD = 0b01;   // |up down>
const std::uint64_t kUUD = 0b001; // |up up down>
const std::uint64_t kUDU = 0b010; // |up down up>
} // namespace

TEST_CASE("momentum grid") {
    MomentumGrid grid(4);
    const auto q = grid.points();
    REQUIRE(q.size() == 5);
    for (int n = 0; n <= 4; ++n) CHECK(q[n] == doctest::Approx(2 * M_PI * n / 5));
    for (std::size_t i = 1; i < q.size(); ++i) CHECK(q[i] > q[i - 1]);
    CHECK(MomentumGrid::fold(1.5 * M_PI) == doctest::Approx(0.5 * M_PI));
    CHECK(MomentumGrid::fold(0.3) == doctest::Approx(0.3));
}

TEST_CASE("extend_state inserts an up spin at site m") {
    const StateVector gs = StateVector::basis_state(2, kUD);
    const StateVector a = extend_state(gs, 0);
    CHECK(std::abs(a.amp[kUUD] - cplx{1.0}) < 1e-14);
    const StateVector b = extend_state(gs, 2);
    CHECK(std::abs(b.amp[kUDU] - cplx{1.0}) < 1e-14);
    CHECK_THROWS_AS(extend_state(gs, 3), ConfigError);

    const StateVector r = oracles::random_state(4, 5);
    for (int m = 0; m <= 4; ++m)
        CHECK(extend_state(r, m).norm2() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spinon state of the L=2 toy example") {
    const StateVector gs = StateVector::basis_state(2, kUD);
    const double q = 0.9;
    const StateVector psi = spinon_state(gs, q);
    CHECK(!psi.normalized);
    const double w = 1.0 / std::sqrt(3.0);
    CHECK(std::abs(psi.amp[kUUD] - w * (cplx{1.0} + std::polar(1.0, q))) < 1e-12);
    CHECK(std::abs(psi.amp[kUDU] - w * std::polar(1.0, 2 * q)) < 1e-12);
    for (std::uint64_t i = 0; i < 8; ++i)
        if (i != kUUD && i != kUDU) CHECK(std::abs(psi.amp[i]) < 1e-14);

    for (double qq : {0.0, 0.7, M_PI, 2.2})
        CHECK(norm_exact(gs, qq) == doctest::Approx((3 + 2 * std::cos(qq)) / 3.0).epsilon(1e-12));
    CHECK(norm_exact(gs, 0.0) == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(norm_exact(gs, M_PI) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("norm via the overlap-table route agrees with the direct norm") {
    const StateVector gs = oracles::random_state(4, 17);
    const auto s = overlap_table_exact(gs);
    const int L = 4;
    for (double q : MomentumGrid(L).points()) {
        cplx acc{0.0, 0.0};
        for (int m = 0; m <= L; ++m)
            for (int n = 0; n <= L; ++n) acc += std::polar(1.0, q * (m - n)) * s[n][m];
        CHECK(acc.imag() == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(norm_exact(gs, q) == doctest::Approx(acc.real() / (L + 1)).epsilon(1e-10));
    }
}

TEST_CASE("spinon state carries total Sz = +1/2") {
    const StateVector gs = oracles::random_sector_state(4, 2, 3); // Sz = 0
    const StateVector psi = spinon_state(gs, 1.3);
    for (std::uint64_t i = 0; i < psi.dim(); ++i)
        if (std::popcount(i) != 2) CHECK(std::abs(psi.amp[i]) < 1e-14);
}

TEST_CASE("norm bounds on random ground states") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const StateVector gs = oracles::random_state(3, 100 + seed);
        for (double q : MomentumGrid(3).points()) {
            const double n = norm_exact(gs, q);
            CHECK(n > -1e-10);
            CHECK(n < 4 + 1e-10);
        }
        // parity N(-q) = N(q) holds for time-reversal symmetric (real) states
        const StateVector real_gs = oracles::random_state(3, 300 + seed, true);
        for (double q : MomentumGrid(3).points())
            CHECK(norm_exact(real_gs, -q) == doctest::Approx(norm_exact(real_gs, q)).epsilon(1e-9));
    }
}

TEST_CASE("exact dispersion against a dense oracle") {
    SpinModel model{ModelKind::Heisenberg, 1.0, 1.0, 4, true};
    const Spectrum spec = ground_state_ed(model);
    const DispersionContext ctx = make_dispersion_context(model, E0Source::ED);
    const auto dense = oracles::dense_matrix(build_hamiltonian(model.with_sites(5)));
    auto [e5, gs5] = oracles::dense_ground_state(build_hamiltonian(model.with_sites(5)));
    for (double q : MomentumGrid(4).points()) {
        const SpinonResult r = dispersion_exact(spec.ground_state, ctx, q);
        const StateVector psi = spinon_state(spec.ground_state, q);
        const StateVector hpsi = oracles::dense_apply(dense, psi);
        const double num = inner_product(psi, hpsi).real();
        const double norm = psi.norm2();
        CHECK(r.norm == doctest::Approx(norm).epsilon(1e-10));
        if (norm > norm_threshold(4)) {
            REQUIRE(r.epsilon_defined);
            CHECK(r.epsilon == doctest::Approx(num / norm - e5).epsilon(1e-8));
        }
    }
}

TEST_CASE("vanishing norm marks the dispersion undefined") {
    // for the all-up input every |Psi(m)> coincides, so N(q) is the Dirichlet
    // kernel and vanishes exactly on the nonzero grid points
    const StateVector all_up = StateVector::basis_state(2, 0b00);
    SpinModel model{ModelKind::Heisenberg, 1.0, 1.0, 2, true};
    const DispersionContext ctx = make_dispersion_context(model, E0Source::ED);
    const SpinonResult r = dispersion_exact(all_up, ctx, 2.0 * M_PI / 3.0);
    CHECK(r.norm == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(!r.epsilon_defined);
    const SpinonResult r0 = dispersion_exact(all_up, ctx, 0.0);
    CHECK(r0.norm == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r0.epsilon_defined);
}

TEST_CASE("Haldane-Shastry norm at q=pi shrinks with L") {
    double prev = 1e9;
    for (int L : {4, 8}) {
        SpinModel m{ModelKind::HaldaneShastry, 1.0, 1.0, L, true};
        const double n = norm_exact(ground_state_ed(m).ground_state, M_PI);
        CHECK(n < prev);
        prev = n;
    }
}

TEST_CASE("default ground-energy source switches to Bethe on long chains") {
    SpinModel small{ModelKind::Heisenberg, 1.0, 1.0, 8, true};
    CHECK(default_e0_source(small) == E0Source::ED);
    SpinModel large{ModelKind::Heisenberg, 1.0, 1.0, 22, true};
    CHECK(default_e0_source(large) == E0Source::Bethe);
    SpinModel hs_large{ModelKind::HaldaneShastry, 1.0, 1.0, 22, true};
    CHECK_THROWS_AS(default_e0_source(hs_large), CapacityError);
}
