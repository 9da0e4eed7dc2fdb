#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "spinonsim/errors.hpp"
#include "spinonsim/groundprep.hpp"
#include "spinonsim/hadamard.hpp"

#include "oracles.hpp"

using namespace spinonsim;

TEST_CASE("swap string: single step is (II+XX+YY+ZZ)/2") {
    const PauliSum s = swap_string_pauli(0, 1);
    REQUIRE(s.size() == 4);
    for (const auto& t : s.terms) CHECK(t.coeff == cplx{0.5});
}

TEST_CASE("swap string: two steps give sixteen strings") {
    const PauliSum s = swap_string_pauli(0, 2);
    REQUIRE(s.size() == 16);
    const cplx q{0.25, 0.0}, iq{0.0, 0.25};
    const std::map<std::string, cplx> expect = {
        {"III", q},  {"XXI", q},  {"YYI", q},   {"ZZI", q},  {"IXX", q},  {"XIX", q},
        {"YZX", iq}, {"ZYX", -iq}, {"IYY", q},  {"XZY", -iq}, {"YIY", q}, {"ZXY", iq},
        {"IZZ", q},  {"XYZ", iq}, {"YXZ", -iq}, {"ZIZ", q}};
    for (const auto& t : s.terms) {
        REQUIRE(expect.count(t.ops) == 1);
        CHECK(std::abs(t.coeff - expect.at(t.ops)) < 1e-14);
    }
}

TEST_CASE("swap string: identity, term counts, dense rebuild, containment") {
    CHECK(swap_string_pauli(0, 0).size() == 1);
    for (int p = 1; p <= 4; ++p) {
        const PauliSum s = swap_string_pauli(0, p);
        CHECK(s.size() == static_cast<std::size_t>(std::pow(4, p)));
        // dense rebuild equals the ladder permutation: basis-state columns
        const auto dense = oracles::dense_matrix(s);
        const int n = p + 1;
        const std::size_t dim = std::size_t{1} << n;
        for (std::uint64_t b = 0; b < dim; ++b) {
            StateVector in = StateVector::basis_state(n, b);
            apply_swap_ladder(in, 0, p, 0.0);
            for (std::uint64_t r = 0; r < dim; ++r)
                CHECK(std::abs(dense[r * dim + b] - in.amp[r]) < 1e-12);
        }
    }
    // containment: strings of SWAP_0^p appear (right-padded) inside SWAP_0^{p+1}
    for (int p = 1; p <= 3; ++p) {
        const PauliSum small = swap_string_pauli(0, p);
        const PauliSum big = swap_string_pauli(0, p + 1);
        for (const auto& t : small.terms) {
            const std::string padded = t.ops + "I";
            CHECK(std::any_of(big.terms.begin(), big.terms.end(),
                              [&](const PauliTerm& u) { return u.ops == padded; }));
        }
    }
    CHECK_THROWS_AS(swap_string_pauli(0, 9), CapacityError);
}

TEST_CASE("circuit cost arithmetic") {
    const CircuitCounts c8 = circuit_counts(8, 3);
    CHECK(c8.norm_circuits == 36);
    CHECK(c8.energy_circuits == 135);
    CHECK(c8.fredkin_end == 36);
    CHECK(c8.fredkin_middle == 20);
    CHECK(circuit_counts(2, 1).norm_circuits == 3);
}

TEST_CASE("exact overlaps equal the statevector oracle") {
    const StateVector ud = StateVector::basis_state(2, 0b01);
    CHECK(hadamard_overlap(ud, 0, 1, Part::Re, {}).value.real() == doctest::Approx(1.0));
    CHECK(hadamard_overlap(ud, 0, 1, Part::Im, {}).value.real() ==
          doctest::Approx(0.0).epsilon(1e-12));

    const StateVector gs = oracles::random_state(4, 91);
    for (int m = 0; m <= 4; ++m) {
        for (int n = m + 1; n <= 4; ++n) {
            const cplx oracle = inner_product(extend_state(gs, m), extend_state(gs, n));
            CHECK(hadamard_overlap(gs, m, n, Part::Re, {}).value.real() ==
                  doctest::Approx(oracle.real()).epsilon(1e-10));
            CHECK(hadamard_overlap(gs, m, n, Part::Im, {}).value.real() ==
                  doctest::Approx(oracle.imag()).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(hadamard_overlap(gs, 2, 2, Part::Re, {}), ConfigError);
}

TEST_CASE("transition amplitudes equal the dense oracle in exact mode") {
    SpinModel model{ModelKind::Heisenberg, 1.0, 1.0, 3, true};
    const HadamardContext ctx = make_hadamard_context(model);
    const StateVector gs = oracles::random_state(3, 15);
    const auto dense = oracles::dense_matrix(build_hamiltonian(model.with_sites(4)));
    for (int m = 0; m <= 3; ++m) {
        for (int n = m; n <= 3; ++n) {
            const StateVector hb = oracles::dense_apply(dense, extend_state(gs, n));
            const cplx oracle = inner_product(extend_state(gs, m), hb);
            const MeasuredValue t = transition_amplitude(gs, ctx, m, n, {});
            CHECK(std::abs(t.value - oracle) < 1e-10);
        }
    }
}

TEST_CASE("matrix assembly is Hermitian with unit diagonal overlaps") {
    SpinModel model{ModelKind::Heisenberg, 1.0, 1.0, 3, true};
    const HadamardContext ctx = make_hadamard_context(model);
    const StateVector gs = oracles::random_state(3, 33);
    const OverlapMatrix m = measure_matrices(gs, ctx, {}, true);
    for (int a = 0; a <= 3; ++a) {
        CHECK(std::abs(m.s[a][a].value - cplx{1.0}) < 1e-12);
        for (int b = 0; b <= 3; ++b) {
            CHECK(std::abs(m.s[a][b].value - std::conj(m.s[b][a].value)) < 1e-12);
            CHECK(std::abs(m.t[a][b].value - std::conj(m.t[b][a].value)) < 1e-12);
        }
    }
}

TEST_CASE("norm reconstruction: toy values, Dirichlet kernel, oracle equality") {
    const StateVector ud = StateVector::basis_state(2, 0b01);
    SpinModel model{ModelKind::Heisenberg, 1.0, 1.0, 2, true};
    const HadamardContext ctx = make_hadamard_context(model);
    const OverlapMatrix m = measure_matrices(ud, ctx, {}, false);
    CHECK(reconstruct_norm(m, 0.0).value.real() == doctest::Approx(5.0 / 3.0).epsilon(1e-10));
    CHECK(reconstruct_norm(m, M_PI).value.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

    // hypothetical all-identical overlaps: N(q) = |sum_m e^{iqm}|^2 / (L+1)
    OverlapMatrix ones;
    ones.L = 3;
    ones.s.assign(4, std::vector<MeasuredValue>(4));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) ones.s[a][b].value = 1.0;
    for (double q : {0.0, 0.5, 1.7}) {
        cplx dir{0.0, 0.0};
        for (int k = 0; k < 4; ++k) dir += std::polar(1.0, q * k);
        CHECK(reconstruct_norm(ones, q).value.real() ==
              doctest::Approx(std::norm(dir) / 4.0).epsilon(1e-10));
    }

    const StateVector gs = oracles::random_state(4, 55);
    SpinModel m4{ModelKind::Heisenberg, 1.0, 1.0, 4, true};
    const OverlapMatrix mm = measure_matrices(gs, make_hadamard_context(m4), {}, false);
    for (double q : MomentumGrid(4).points())
        CHECK(reconstruct_norm(mm, q).value.real() ==
              doctest::Approx(norm_exact(gs, q)).epsilon(1e-10));
}

TEST_CASE("energy reconstruction equals the exact dispersion") {
    for (ModelKind kind : {ModelKind::Heisenberg, ModelKind::HaldaneShastry}) {
        SpinModel model{kind, 1.0, 1.0, 4, true};
        const StateVector gs = ground_state_ed(model).ground_state;
        const HadamardContext hctx = make_hadamard_context(model);
        const DispersionContext dctx = make_dispersion_context(model, E0Source::ED);
        const OverlapMatrix m = measure_matrices(gs, hctx, {}, true);
        for (double q : MomentumGrid(4).points()) {
            const SpinonResult ref = dispersion_exact(gs, dctx, q);
            const SpinonResult rec = reconstruct_energy(m, q, dctx);
            CHECK(rec.norm == doctest::Approx(ref.norm).epsilon(1e-10));
            CHECK(rec.epsilon_defined == ref.epsilon_defined);
            if (ref.epsilon_defined)
                CHECK(rec.epsilon == doctest::Approx(ref.epsilon).epsilon(1e-9));
        }
    }
}

TEST_CASE("overlaps via the expectation-value route match the Hadamard route") {
    const StateVector gs = oracles::random_state(3, 101);
    const int L = 3;
    for (int m = 0; m <= L; ++m) {
        for (int n = m + 1; n <= L && n - m <= 4; ++n) {
            // <Psi(m)|Psi(n)> as the expectation of the embedded SWAP ladder
            const PauliSum ladder = swap_string_pauli(m, n);
            PauliSum embedded(L + 1);
            for (const auto& t : ladder.terms) {
                std::string ops = identity_string(L + 1);
                for (int k = 0; k < ladder.n_qubits; ++k) ops[m + k] = t.ops[k];
                embedded.add(t.coeff, ops);
            }
            const StateVector psi_m = extend_state(gs, m);
            const cplx via_pauli = raw_expectation(psi_m, compile(embedded));
            const double re = hadamard_overlap(gs, m, n, Part::Re, {}).value.real();
            const double im = hadamard_overlap(gs, m, n, Part::Im, {}).value.real();
            CHECK(std::abs(cplx{re, im} - via_pauli) < 1e-10);
        }
    }
}

TEST_CASE("sampled estimates are unbiased") {
    const StateVector gs = oracles::random_state(3, 202, true);
    SpinModel model{ModelKind::Heisenberg, 1.0, 1.0, 3, true};
    const HadamardContext ctx = make_hadamard_context(model);
    const double truth = hadamard_overlap(gs, 0, 2, Part::Re, {}).value.real();
    const cplx t_truth = transition_amplitude(gs, ctx, 0, 2, {}).value;

    const int n_seeds = 48;
    const long shots = 2000;
    double mean_s = 0.0, mean_t = 0.0, sigma_s = 0.0, sigma_t = 0.0;
    for (int k = 0; k < n_seeds; ++k) {
        HadamardMode mode{true, shots, derive_seed(7, static_cast<std::uint64_t>(k)), 1};
        const MeasuredValue s = hadamard_overlap(gs, 0, 2, Part::Re, mode);
        mean_s += s.value.real();
        sigma_s = s.sigma_re;
        const MeasuredValue t = transition_amplitude(gs, ctx, 0, 2, mode);
        mean_t += t.value.real();
        sigma_t = t.sigma_re;
    }
    mean_s /= n_seeds;
    mean_t /= n_seeds;
    CHECK(std::abs(mean_s - truth) < 4 * sigma_s / std::sqrt(static_cast<double>(n_seeds)));
    CHECK(std::abs(mean_t - t_truth.real()) < 4 * sigma_t / std::sqrt(static_cast<double>(n_seeds)));
}
