#include "doctest.h"

#include <bit>
#include <cmath>

#include "spinonsim/errors.hpp"
#include "spinonsim/groundprep.hpp"
#include "spinonsim/lcu.hpp"
#include "spinonsim/models.hpp"

#include "oracles.hpp"

using namespace spinonsim;

TEST_CASE("V(L) ancilla state") {
    // L=1: a single rotation
    const StateVector v1 = v_state(1);
    CHECK(std::abs(v1.amp[0] - cplx{1 / std::sqrt(2.0)}) < 1e-12);
    CHECK(std::abs(v1.amp[1] - cplx{1 / std::sqrt(2.0)}) < 1e-12);

    // L=2: (|00>+|01>+|10>)/sqrt(3)
    const StateVector v2 = v_state(2);
    const double w2 = 1 / std::sqrt(3.0);
    CHECK(std::abs(v2.amp[0b00] - cplx{w2}) < 1e-12);
    CHECK(std::abs(v2.amp[0b01] - cplx{w2}) < 1e-12);
    CHECK(std::abs(v2.amp[0b10] - cplx{w2}) < 1e-12);
    CHECK(std::abs(v2.amp[0b11]) < 1e-12);

    // L=3: amplitude 1/2 on the vacuum and every one-hot state
    const StateVector v3 = v_state(3);
    for (std::uint64_t i = 0; i < 8; ++i) {
        const bool keep = i == 0 || i == 0b100 || i == 0b010 || i == 0b001;
        CHECK(std::abs(v3.amp[i] - (keep ? cplx{0.5} : cplx{0.0})) < 1e-12);
    }

    // general L: exactly L+1 amplitudes, all 1/sqrt(L+1)
    for (int L : {4, 5, 6, 7, 8}) {
        const StateVector v = v_state(L);
        const double w = 1 / std::sqrt(L + 1.0);
        int nonzero = 0;
        for (std::uint64_t i = 0; i < v.dim(); ++i) {
            if (std::abs(v.amp[i]) < 1e-12) continue;
            ++nonzero;
            CHECK(std::abs(v.amp[i] - cplx{w}) < 1e-12);
            CHECK(std::popcount(i) <= 1);
        }
        CHECK(nonzero == L + 1);
    }
}

TEST_CASE("V circuit controlled-operation count is 2L-3") {
    for (int L : {2, 3, 4, 5, 6, 8, 10}) {
        CHECK(v_circuit(L).count_controlled() == static_cast<std::size_t>(2 * L - 3));
    }
    CHECK(v_circuit(1).count_controlled() == 0);
}

TEST_CASE("V followed by its inverse is the identity") {
    for (int L : {2, 3, 5}) {
        const Circuit v = v_circuit(L);
        const Circuit vdg = inverse(v);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const StateVector in = oracles::random_state(L, 40 + seed);
            StateVector s = in;
            apply_circuit(s, v);
            apply_circuit(s, vdg);
            CHECK(fidelity(s, in) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("Fredkin counts for end and middle insertion") {
    LcuCircuitSpec end{8, 0.4, Insertion::End};
    CHECK(build_lcu_circuit(end).count_kind(GateKind::Fredkin) == 36);
    LcuCircuitSpec mid{8, 0.4, Insertion::Middle};
    CHECK(build_lcu_circuit(mid).count_kind(GateKind::Fredkin) == 20);
}

TEST_CASE("statevector mode: all-zero probability times L+1 is the norm") {
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        const StateVector gs = oracles::random_state(3, 60 + seed);
        for (double q : MomentumGrid(3).points()) {
            const LcuRun run = run_lcu(gs, q);
            CHECK(run.result.norm == doctest::Approx(norm_exact(gs, q)).epsilon(1e-10));
            if (run.result.norm > 1e-8) {
                StateVector target = spinon_state(gs, q);
                target.renormalize();
                CHECK(fidelity(run.post_state, target) == doctest::Approx(1.0).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("middle insertion prepares the same state") {
    const StateVector gs = oracles::random_state(4, 77);
    const double q = 1.9;
    const LcuRun run = run_lcu(gs, q, {}, Insertion::Middle);
    CHECK(run.result.norm == doctest::Approx(norm_exact(gs, q)).epsilon(1e-10));
    StateVector target = spinon_state(gs, q);
    target.renormalize();
    CHECK(fidelity(run.post_state, target) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two-site toy input at q=0") {
    const StateVector gs = StateVector::basis_state(2, 0b01); // |up down>
    const LcuRun run = run_lcu(gs, 0.0);
    // post-selected system state proportional to 2|uud> + |udu>
    StateVector expect(3);
    expect.amp.assign(8, cplx{0.0, 0.0});
    expect.amp[0b001] = 2.0 / std::sqrt(5.0);
    expect.amp[0b010] = 1.0 / std::sqrt(5.0);
    CHECK(fidelity(run.post_state, expect) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(run.result.norm == doctest::Approx(5.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("sampled norm estimator is unbiased and deterministic") {
    const StateVector gs = StateVector::basis_state(2, 0b01);
    const double q = 2.0 * M_PI / 3.0;
    const double truth = norm_exact(gs, q);
    const long shots = 4000;
    double mean = 0.0;
    const int n_seeds = 100;
    for (int s = 0; s < n_seeds; ++s) {
        LcuMode mode{true, shots, derive_seed(123, static_cast<std::uint64_t>(s))};
        mean += run_lcu(gs, q, mode).result.norm;
    }
    mean /= n_seeds;
    const double p = truth / 3.0;
    const double sigma_mean = 3.0 * std::sqrt(p * (1 - p) / shots) / std::sqrt(n_seeds);
    CHECK(std::abs(mean - truth) < 4 * sigma_mean);

    LcuMode mode{true, 1000, 5};
    const LcuRun a = run_lcu(gs, q, mode);
    const LcuRun b = run_lcu(gs, q, mode);
    CHECK(a.histogram == b.histogram);
    long total = 0;
    for (const auto& [bits, cnt] : a.histogram) total += cnt;
    CHECK(total == 1000);
}

TEST_CASE("capacity guard") {
    LcuCircuitSpec spec{13, 0.0, Insertion::End};
    CHECK_THROWS_AS(spec.validate(), CapacityError);
}
