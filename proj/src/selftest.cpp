#include "spinonsim/selftest.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "spinonsim/groundprep.hpp"
#include "spinonsim/hadamard.hpp"
#include "spinonsim/models.hpp"
#include "spinonsim/spinon.hpp"
#include "spinonsim/statevector.hpp"

namespace spinonsim {

namespace {

StateVector random_state(int n, std::mt19937_64& rng, bool real_amplitudes = false) {
    StateVector s(n);
    std::normal_distribution<double> g(0.0, 1.0);
    for (auto& a : s.amp) a = real_amplitudes ? cplx{g(rng), 0.0} : cplx{g(rng), g(rng)};
    s.renormalize();
    return s;
}

StateVector random_sector_state(int n, int n_down, std::mt19937_64& rng) {
    StateVector s(n);
    s.amp.assign(s.dim(), cplx{0.0, 0.0});
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::uint64_t i = 0; i < s.dim(); ++i)
        if (std::popcount(i) == n_down) s.amp[i] = cplx{g(rng), g(rng)};
    s.renormalize();
    return s;
}

Gate random_gate(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick_kind(0, 12);
    std::uniform_int_distribution<int> pick_q(0, n - 1);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    const int a = pick_q(rng);
    int b = pick_q(rng);
    while (b == a) b = pick_q(rng);
    int c = pick_q(rng);
    while (c == a || c == b) c = pick_q(rng);
    switch (pick_kind(rng)) {
    case 0: return Gate::ry(a, angle(rng));
    case 1: return Gate::rzz(a, b, angle(rng));
    case 2: return Gate::rxx_plus_yy(a, b, angle(rng));
    case 3: return Gate::h(a);
    case 4: return Gate::sdg(a);
    case 5: return Gate::x(a);
    case 6: return Gate::cnot(a, b);
    case 7: return Gate::swap(a, b);
    case 8: return Gate::phased_swap(a, b, angle(rng));
    case 9: return Gate::fredkin(c, a, b);
    case 10: return Gate::givens(a, b, angle(rng), angle(rng));
    case 11: return Gate::fswap(a, b);
    default: return Gate::phase(a, angle(rng));
    }
}

} // namespace

int run_selftest(std::uint64_t base_seed, int n_instances, std::ostream& log) {
    int failures = 0;

    auto property = [&](const std::string& name, const std::function<bool(std::mt19937_64&)>& body) {
        int bad = 0;
        for (int k = 0; k < n_instances; ++k) {
            std::mt19937_64 rng(derive_seed(base_seed, static_cast<std::uint64_t>(k)));
            if (!body(rng)) ++bad;
        }
        failures += bad;
        log << (bad == 0 ? "[PASS] " : "[FAIL] ") << name << " (" << n_instances - bad << "/"
            << n_instances << " instances)\n";
    };

    property("unitarity: every gate kind preserves the norm", [](std::mt19937_64& rng) {
        StateVector s = random_state(4, rng);
        for (int g = 0; g < 8; ++g) apply_gate(s, random_gate(4, rng));
        return std::abs(s.norm2() - 1.0) < 1e-12;
    });

    property("Sz conservation through the variational circuit", [](std::mt19937_64& rng) {
        const int L = 4;
        std::uniform_int_distribution<int> pick_down(0, L);
        const int n_down = pick_down(rng);
        StateVector s = random_sector_state(L, n_down, rng);
        std::uniform_real_distribution<double> angle(-M_PI, M_PI);
        std::vector<double> params(8);
        for (auto& p : params) p = angle(rng);
        apply_circuit(s, hva_circuit(L, params));
        double off_sector = 0.0;
        for (std::uint64_t i = 0; i < s.dim(); ++i)
            if (std::popcount(i) != n_down) off_sector += std::norm(s.amp[i]);
        return off_sector < 1e-10;
    });

    property("norm bounds 0 <= N(q) <= L+1 and N(-q) = N(q)", [](std::mt19937_64& rng) {
        const int L = 4;
        StateVector gs = random_state(L, rng, true);
        const MomentumGrid grid(L);
        for (double q : grid.points()) {
            const double n = norm_exact(gs, q);
            if (n < -1e-10 || n > L + 1 + 1e-10) return false;
            if (std::abs(norm_exact(gs, -q) - n) > 1e-10) return false;
        }
        return true;
    });

    property("Gutzwiller projector idempotence", [](std::mt19937_64& rng) {
        StateVector f = random_state(6, rng);
        const StateVector once = gutzwiller_project(f);
        const StateVector twice = gutzwiller_project(once);
        for (std::uint64_t i = 0; i < once.dim(); ++i)
            if (std::abs(once.amp[i] - twice.amp[i]) > 1e-12) return false;
        return true;
    });

    property("Hermiticity of overlap and transition matrices", [](std::mt19937_64& rng) {
        const int L = 3;
        StateVector gs = random_state(L, rng);
        SpinModel model{ModelKind::Heisenberg, 1.0, 1.0, L, true};
        const HadamardContext ctx = make_hadamard_context(model);
        const OverlapMatrix m = measure_matrices(gs, ctx, {}, true);
        for (int a = 0; a <= L; ++a) {
            if (std::abs(m.s[a][a].value - cplx{1.0, 0.0}) > 1e-10) return false;
            for (int b = 0; b <= L; ++b) {
                if (std::abs(m.s[a][b].value - std::conj(m.s[b][a].value)) > 1e-10) return false;
                if (std::abs(m.t[a][b].value - std::conj(m.t[b][a].value)) > 1e-10) return false;
            }
        }
        return true;
    });

    property("post-selection probabilities sum to one", [](std::mt19937_64& rng) {
        StateVector s = random_state(4, rng);
        double total = 0.0;
        for (int outcome = 0; outcome < 4; ++outcome) {
            const std::string bits = to_bitstring(static_cast<std::uint64_t>(outcome), 2);
            total += post_select(s, {1, 3}, bits).second;
        }
        return std::abs(total - 1.0) < 1e-10;
    });

    return failures;
}

} // namespace spinonsim
