#include "doctest.h"

#include <bit>
#include <cmath>

#include "spinonsim/errors.hpp"
#include "spinonsim/models.hpp"

#include "oracles.hpp"

using namespace spinonsim;

TEST_CASE("Heisenberg L=2 ring: the single bond is counted twice") {
    SpinModel m{ModelKind::Heisenberg, 1.0, 1.0, 2, true};
    const PauliSum h = build_hamiltonian(m);
    REQUIRE(h.size() == 3);
    for (const auto& t : h.terms) CHECK(t.coeff == cplx{0.5});
    CHECK_THROWS_AS(build_hamiltonian(SpinModel{ModelKind::Heisenberg, 1.0, 1.0, 1, true}),
                    ConfigError);
}

TEST_CASE("Haldane-Shastry couplings follow the inverse-sin^2 law") {
    SpinModel m{ModelKind::HaldaneShastry, 1.0, 1.0, 4, true};
    const auto bonds = model_bonds(m);
    REQUIRE(bonds.size() == 6);
    for (const auto& b : bonds) {
        if (b.j - b.i == 1 || b.j - b.i == 3) {
            CHECK(b.jxy == doctest::Approx(M_PI * M_PI / 8.0).epsilon(1e-12));
        } else {
            CHECK(b.jxy == doctest::Approx(M_PI * M_PI / 16.0).epsilon(1e-12));
        }
        CHECK(b.jz == b.jxy);
    }
    SpinModel open = m;
    open.periodic = false;
    CHECK_THROWS_AS(model_bonds(open), ConfigError);
}

TEST_CASE("XY model terms") {
    SpinModel ring{ModelKind::XY, 1.0, 1.0, 2, true};
    const PauliSum h = build_hamiltonian(ring);
    REQUIRE(h.size() == 2); // XX and YY, doubled bond
    for (const auto& t : h.terms) CHECK(t.coeff == cplx{-0.5});

    SpinModel open{ModelKind::XY, 1.0, 1.0, 2, false};
    const PauliSum ho = build_hamiltonian(open);
    for (const auto& t : ho.terms) CHECK(t.coeff == cplx{-0.25});
}

TEST_CASE("hamiltonians are hermitian as dense matrices") {
    for (ModelKind kind : {ModelKind::Heisenberg, ModelKind::HaldaneShastry, ModelKind::XY}) {
        for (int L : {4, 6}) {
            SpinModel m{kind, 1.0, 1.0, L, true};
            const auto dense = oracles::dense_matrix(build_hamiltonian(m));
            const std::size_t dim = std::size_t{1} << L;
            for (std::size_t r = 0; r < dim; ++r)
                for (std::size_t c = 0; c < dim; ++c)
                    CHECK(std::abs(dense[r * dim + c] - std::conj(dense[c * dim + r])) < 1e-12);
        }
    }
}

TEST_CASE("sector-restricted ED matches the full-spectrum minimum up to L=8") {
    for (ModelKind kind : {ModelKind::Heisenberg, ModelKind::HaldaneShastry}) {
        for (int L : {5, 8}) {
            SpinModel m{kind, 1.0, 1.0, L, true};
            const double full = oracles::dense_lowest_real(build_hamiltonian(m));
            CHECK(ground_state_ed(m).ground_energy == doctest::Approx(full).epsilon(1e-10));
        }
    }
}

TEST_CASE("ED matches dense diagonalization for small rings") {
    for (ModelKind kind : {ModelKind::Heisenberg, ModelKind::HaldaneShastry, ModelKind::XY}) {
        for (int L : {4, 6}) {
            SpinModel m{kind, 1.0, 1.0, L, true};
            const Spectrum spec = ground_state_ed(m);
            auto [e0, gs] = oracles::dense_ground_state(build_hamiltonian(m));
            CHECK(spec.ground_energy == doctest::Approx(e0).epsilon(1e-10));
            // eigenpair residual
            const auto dense = oracles::dense_matrix(build_hamiltonian(m));
            const StateVector hv = oracles::dense_apply(dense, spec.ground_state);
            double resid = 0.0;
            for (std::size_t i = 0; i < hv.dim(); ++i)
                resid += std::norm(hv.amp[i] - spec.ground_energy * spec.ground_state.amp[i]);
            CHECK(std::sqrt(resid) < 1e-8);
        }
    }
}

TEST_CASE("L=2 Heisenberg ring ground state is the singlet") {
    SpinModel m{ModelKind::Heisenberg, 1.0, 1.0, 2, true};
    const Spectrum spec = ground_state_ed(m);
    CHECK(spec.ground_energy == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(spec.sector_twice_sz == 0);
}

TEST_CASE("Haldane-Shastry ground energy matches the closed form") {
    // E0 = -J pi^2 (L^2 + 5) / (24 L) for even rings
    for (int L : {4, 6, 8, 10}) {
        SpinModel m{ModelKind::HaldaneShastry, 1.0, 1.0, L, true};
        const double expect = -M_PI * M_PI * (L * L + 5.0) / (24.0 * L);
        CHECK(ground_state_ed(m).ground_energy == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("Heisenberg L=16 reference energy") {
    SpinModel m{ModelKind::Heisenberg, 1.0, 1.0, 16, true};
    const Spectrum spec = ground_state_ed(m);
    CHECK(spec.ground_energy == doctest::Approx(-7.142296361).epsilon(1e-8));
}

TEST_CASE("ground state support is restricted to the Sz sector") {
    SpinModel m{ModelKind::Heisenberg, 1.0, 1.0, 12, true};
    const Spectrum spec = ground_state_ed(m);
    for (std::uint64_t i = 0; i < spec.ground_state.dim(); ++i)
        if (std::popcount(i) != 6) CHECK(spec.ground_state.amp[i] == cplx{0.0, 0.0});
}

TEST_CASE("even-L ground state is a total singlet") {
    SpinModel m{ModelKind::Heisenberg, 1.0, 1.0, 6, true};
    const Spectrum spec = ground_state_ed(m);
    CHECK(expectation(spec.ground_state, total_spin_squared(6)) ==
          doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("Bethe thermodynamic energy") {
    CHECK(bethe_gs_energy(17, 1.0) == doctest::Approx(-7.5335024).epsilon(1e-6));
    CHECK(bethe_gs_energy(5, 0.0) == 0.0);
    const double per_site = bethe_gs_energy(17, 1.0) / 17.0;
    CHECK(per_site == doctest::Approx(-0.4431472).epsilon(1e-6));
    CHECK(bethe_gs_energy(9, 1.0) / 9.0 == doctest::Approx(per_site).epsilon(1e-12));
}

TEST_CASE("analytic dispersions") {
    CHECK(analytic_dispersion(ModelKind::Heisenberg, M_PI / 2, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(analytic_dispersion(ModelKind::Heisenberg, 0.0, 1.0) ==
          doctest::Approx(M_PI / 2).epsilon(1e-12));
    CHECK(analytic_dispersion(ModelKind::HaldaneShastry, 0.0, 1.0) ==
          doctest::Approx(M_PI * M_PI / 8).epsilon(1e-12));
    CHECK_THROWS_AS(analytic_dispersion(ModelKind::XY, 0.0, 1.0), ConfigError);
}

TEST_CASE("commuting groups") {
    SpinModel m{ModelKind::Heisenberg, 1.0, 1.0, 6, true};
    const auto groups = commuting_groups(build_hamiltonian(m));
    CHECK(groups.size() == 3);
    std::size_t total = 0;
    for (const auto& g : groups) {
        total += g.size();
        for (std::size_t a = 0; a < g.terms.size(); ++a)
            for (std::size_t b = a + 1; b < g.terms.size(); ++b)
                CHECK(qubitwise_commute(g.terms[a].ops, g.terms[b].ops));
    }
    CHECK(total == build_hamiltonian(m).size());

    PauliSum single(2);
    single.add(1.0, "XZ");
    CHECK(commuting_groups(single).size() == 1);

    SpinModel hs{ModelKind::HaldaneShastry, 1.0, 1.0, 4, true};
    for (const auto& g : commuting_groups(build_hamiltonian(hs)))
        for (std::size_t a = 0; a < g.terms.size(); ++a)
            for (std::size_t b = a + 1; b < g.terms.size(); ++b)
                CHECK(qubitwise_commute(g.terms[a].ops, g.terms[b].ops));
}

TEST_CASE("hamiltonian JSON export") {
    SpinModel m{ModelKind::Heisenberg, 1.0, 1.0, 2, true};
    const std::string j = hamiltonian_to_json(build_hamiltonian(m));
    CHECK(j.find("\"n_qubits\":2") != std::string::npos);
    CHECK(j.find("\"pauli\":\"XX\"") != std::string::npos);
    CHECK(j.find("0.5") != std::string::npos);
}

TEST_CASE("XXZ anisotropy reaches only the ZZ coefficients") {
    SpinModel m{ModelKind::Heisenberg, 1.0, 0.5, 4, true};
    for (const auto& t : build_hamiltonian(m).terms) {
        const bool is_zz = t.ops.find('Z') != std::string::npos;
        CHECK(t.coeff == cplx{is_zz ? 0.125 : 0.25});
    }
}
