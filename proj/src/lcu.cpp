#include "spinonsim/lcu.hpp"

#include <cmath>

#include "spinonsim/errors.hpp"

namespace spinonsim {

void LcuCircuitSpec::validate() const {
    if (L < 1) throw ConfigError("LCU: L must be >= 1");
    if (insertion == Insertion::Middle && L % 2 != 0)
        throw ConfigError("LCU: middle insertion needs an even chain");
    if (n_total() > kMaxQubits) throw CapacityError("LCU: 2L+1 exceeds the qubit cap");
}

Circuit v_circuit(int L) {
    if (L < 1) throw ConfigError("v_circuit: L must be >= 1");
    Circuit c;
    c.n_system = L;
    if (L == 1) {
        c.add(Gate::ry(0, M_PI / 2));
        return c;
    }
    // Split off the vacuum + e_L pair first: qubit 0 gates the live branch,
    // qubit L-1 pre-rotated and un-rotated on it. The remaining W ladder then
    // distributes the live excitation over e_1..e_{L-1}. Controlled-operation
    // count: 1 + 2(L-2) = 2L-3.
    const double split = 2.0 * std::acos(std::sqrt(2.0 / (L + 1.0)));
    c.add(Gate::ry(0, split));
    c.add(Gate::ry(L - 1, M_PI / 2));
    c.add(Gate::controlled(Gate::ry(L - 1, -M_PI / 2), 0));
    for (int i = 0; i + 2 < L; ++i) {
        // theta_k = 2 arccos(1/sqrt(k)) with k = L-1-i
        const double theta = 2.0 * std::acos(1.0 / std::sqrt(static_cast<double>(L - 1 - i)));
        c.add(Gate::controlled(Gate::ry(i + 1, theta), i));
        c.add(Gate::cnot(i + 1, i));
    }
    return c;
}

StateVector v_state(int L) {
    StateVector s(L);
    apply_circuit(s, v_circuit(L));
    return s;
}

Circuit build_lcu_circuit(const LcuCircuitSpec& spec) {
    spec.validate();
    const int L = spec.L;
    const int anc0 = spec.n_system(); // ancillas sit above the system register
    Circuit c;
    c.n_system = spec.n_system();
    c.n_ancilla = spec.n_ancilla();

    const Circuit v = v_circuit(L);
    for (Gate g : v.gates) {
        for (auto& t : g.targets) t += anc0;
        for (auto& t : g.controls) t += anc0;
        c.add(g);
    }

    // ancilla a (one-hot) drives U_m: the swap ladder carrying the injected
    // spin from the origin to site m, plus the phase rotated onto the ancilla
    // itself. The identity branch implicitly carries e^{i q origin}, so each
    // hot branch applies the relative phase e^{i q (m - origin)}; the overall
    // e^{i q origin} is a global phase of the post-selected state.
    const int origin = spec.origin();
    int a = 0;
    for (int m = 0; m <= L; ++m) {
        if (m == origin) continue; // identity branch has no ancilla
        const int anc = anc0 + a;
        ++a;
        if (m > origin) {
            for (int j = origin; j < m; ++j) c.add(Gate::fredkin(anc, j, j + 1));
        } else {
            for (int j = origin; j > m; --j) c.add(Gate::fredkin(anc, j - 1, j));
        }
        c.add(Gate::phase(anc, spec.q * (m - origin)));
    }

    const Circuit vdg = inverse(v);
    for (Gate g : vdg.gates) {
        for (auto& t : g.targets) t += anc0;
        for (auto& t : g.controls) t += anc0;
        c.add(g);
    }
    return c;
}

LcuRun run_lcu(const StateVector& gs, double q, const LcuMode& mode, Insertion insertion) {
    LcuCircuitSpec spec;
    spec.L = gs.n;
    spec.q = q;
    spec.insertion = insertion;
    spec.validate();
    const int L = spec.L;

    StateVector anc(L); // |0...0>
    StateVector full = kron(extend_state(gs, spec.origin()), anc);
    apply_circuit(full, build_lcu_circuit(spec));

    std::vector<int> anc_qubits;
    for (int a = 0; a < L; ++a) anc_qubits.push_back(spec.n_system() + a);
    const std::string zeros(static_cast<std::size_t>(L), '0');

    LcuRun out;
    auto [cond, p0] = collapse_and_remove(full, anc_qubits, zeros);
    out.p_all_zero = p0;
    out.post_state = std::move(cond);

    SpinonResult& r = out.result;
    r.L = L;
    r.q = q;
    r.method = Method::Lcu;
    if (!mode.sampled) {
        r.norm = p0 * (L + 1);
    } else {
        const ShotEstimate est = sample(full, anc_qubits, mode.n_shots, mode.seed);
        out.histogram = est.counts;
        long n0 = 0;
        if (auto it = est.counts.find(zeros); it != est.counts.end()) n0 = it->second;
        const double p_hat = static_cast<double>(n0) / mode.n_shots;
        r.norm = p_hat * (L + 1);
        r.norm_sigma = (L + 1) * std::sqrt(p_hat * (1.0 - p_hat) / mode.n_shots);
        r.shots = mode.n_shots;
        r.seed = mode.seed;
        r.sampled_zero = (n0 == 0);
    }
    return out;
}

} // namespace spinonsim
