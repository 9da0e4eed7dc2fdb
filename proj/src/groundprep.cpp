#include "spinonsim/groundprep.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "spinonsim/errors.hpp"

namespace spinonsim {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 step over base+stream keeps independent runs decorrelated
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

StateVector vbc_state(int L) {
    if (L < 2 || L % 2 != 0) throw ConfigError("vbc_state: L must be even and >= 2");
    StateVector s(L);
    s.amp.assign(s.dim(), cplx{0.0, 0.0});
    const double w = std::pow(1.0 / std::sqrt(2.0), L / 2);
    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i) {
        double a = w;
        bool ok = true;
        for (int p = 0; p < L / 2 && ok; ++p) {
            const bool b0 = i & site_mask(L, 2 * p);
            const bool b1 = i & site_mask(L, 2 * p + 1);
            if (b0 == b1)
                ok = false; // singlet has no parallel component
            else if (b0)
                a = -a; // |down up> carries the minus sign
        }
        if (ok) s.amp[i] = a;
    }
    return s;
}

std::vector<std::vector<double>> fermi_sea_orbitals(int L) {
    if (L < 2 || L % 2 != 0) throw ConfigError("fermi_sea_orbitals: L must be even");
    const int m = L / 2;
    // consecutive momenta symmetric about 0: integer grid 2*pi*r/L when the
    // filling is odd, half-integer grid otherwise (closed shell either way)
    std::vector<double> ks;
    if (m % 2 == 1) {
        ks.push_back(0.0);
        for (int r = 1; r <= (m - 1) / 2; ++r) ks.push_back(2.0 * M_PI * r / L);
    } else {
        for (int r = 1; r <= m / 2; ++r) ks.push_back(M_PI * (2 * r - 1) / L);
    }
    std::vector<std::vector<double>> q;
    for (double k : ks) {
        if (k == 0.0) {
            std::vector<double> col(L, 1.0 / std::sqrt(static_cast<double>(L)));
            q.push_back(std::move(col));
        } else {
            std::vector<double> c(L), s(L);
            const double nrm = std::sqrt(2.0 / L);
            for (int x = 0; x < L; ++x) {
                c[x] = nrm * std::cos(k * x);
                s[x] = nrm * std::sin(k * x);
            }
            q.push_back(std::move(c));
            q.push_back(std::move(s));
        }
    }
    return q; // q[alpha][site], m columns
}

std::vector<Gate> slater_prep_gates(const std::vector<std::vector<double>>& q_cols, int n_modes,
                                    int offset, int n_total) {
    const int m = static_cast<int>(q_cols.size());
    for (const auto& col : q_cols)
        if (static_cast<int>(col.size()) != n_modes)
            throw ConfigError("slater_prep_gates: column length mismatch");
    // work[r][a] = Q_{r,a}
    std::vector<std::vector<double>> work(n_modes, std::vector<double>(m, 0.0));
    for (int a = 0; a < m; ++a)
        for (int r = 0; r < n_modes; ++r) work[r][a] = q_cols[a][r];

    struct Rot {
        int row;
        double theta;
    };
    std::vector<Rot> rots;
    // reduce Q to [[diag +-1],[0]] with adjacent-row rotations from the bottom
    for (int a = 0; a < m; ++a) {
        for (int r = n_modes - 1; r > a; --r) {
            const double lo = work[r][a];
            if (std::abs(lo) < 1e-14) continue;
            const double hi = work[r - 1][a];
            const double h = std::hypot(hi, lo);
            const double c = hi / h, s = lo / h;
            for (int b = 0; b < m; ++b) {
                const double u = work[r - 1][b], v = work[r][b];
                work[r - 1][b] = c * u + s * v;
                work[r][b] = -s * u + c * v;
            }
            rots.push_back({r, std::atan2(s, c)});
        }
    }
    std::vector<Gate> gates;
    gates.reserve(static_cast<std::size_t>(m) + rots.size());
    for (int a = 0; a < m; ++a) gates.push_back(Gate::x(offset + a));
    for (auto it = rots.rbegin(); it != rots.rend(); ++it)
        gates.push_back(Gate::givens(offset + it->row - 1, offset + it->row, -it->theta));
    (void)n_total;
    return gates;
}

PrepResult xy_ground_state(int L, bool as_circuit) {
    if (L < 2 || L % 2 != 0) throw ConfigError("xy_ground_state: L must be even");
    // The useful warm start is the sea of the antiferromagnetic transverse
    // exchange: the Marshall sign structure matches the Heisenberg and
    // Haldane-Shastry ground states, which is what gives the high overlaps.
    SpinModel xy{ModelKind::XY, -1.0, 1.0, L, true};
    const Spectrum ed = ground_state_ed(xy);
    PrepResult out;
    out.L = L;
    out.route = as_circuit ? "xy-circuit" : "xy";
    if (as_circuit) {
        // band minimum sits at k = pi: stagger the half-filled sea orbitals
        auto q = fermi_sea_orbitals(L);
        for (auto& col : q)
            for (int x = 1; x < L; x += 2) col[x] = -col[x];
        StateVector st(L);
        for (const auto& g : slater_prep_gates(q, L, 0, L)) apply_gate(st, g);
        out.state = std::move(st);
        out.infidelity = 1.0 - fidelity(out.state, ed.ground_state);
    } else {
        out.state = ed.ground_state;
        out.infidelity = 0.0;
    }
    out.energy = expectation(out.state, build_hamiltonian(xy));
    out.rel_energy_error = std::abs((out.energy - ed.ground_energy) /
                                    (ed.ground_energy != 0.0 ? ed.ground_energy : 1.0));
    return out;
}

namespace {

struct HvaGateRef {
    Gate gate;     // theta filled in at evaluation time
    int param = 0; // index into the 4l parameter vector
};

std::vector<HvaGateRef> hva_structure(int L, int layers) {
    if (L < 2 || L % 2 != 0) throw ConfigError("hva: L must be even");
    std::vector<std::pair<int, int>> even_bonds, odd_bonds;
    for (int i = 0; i + 1 < L; i += 2) even_bonds.push_back({i, i + 1});
    for (int i = 1; i + 1 < L; i += 2) odd_bonds.push_back({i, i + 1});
    odd_bonds.push_back({L - 1, 0}); // ring closure lives in the odd block
    std::vector<HvaGateRef> out;
    for (int l = 0; l < layers; ++l) {
        for (const auto& [a, b] : even_bonds) out.push_back({Gate::rzz(a, b, 0.0), 4 * l + 0});
        for (const auto& [a, b] : even_bonds)
            out.push_back({Gate::rxx_plus_yy(a, b, 0.0), 4 * l + 1});
        for (const auto& [a, b] : odd_bonds) out.push_back({Gate::rzz(a, b, 0.0), 4 * l + 2});
        for (const auto& [a, b] : odd_bonds)
            out.push_back({Gate::rxx_plus_yy(a, b, 0.0), 4 * l + 3});
    }
    return out;
}

// generator application: tmp = G |psi| with G = ZZ or XX+YY on the gate's bond
StateVector apply_generator(const StateVector& psi, const Gate& g) {
    StateVector out(psi.n);
    out.amp.assign(psi.dim(), cplx{0.0, 0.0});
    out.normalized = false;
    const std::uint64_t ma = site_mask(psi.n, g.targets[0]);
    const std::uint64_t mb = site_mask(psi.n, g.targets[1]);
    const std::uint64_t dim = psi.dim();
    if (g.kind == GateKind::RZZ) {
        for (std::uint64_t i = 0; i < dim; ++i) {
            const bool same = ((i & ma) != 0) == ((i & mb) != 0);
            out.amp[i] = same ? psi.amp[i] : -psi.amp[i];
        }
    } else { // XX+YY maps the antiparallel pair with weight 2
        const std::uint64_t flip = ma | mb;
        for (std::uint64_t i = 0; i < dim; ++i) {
            const bool ba = (i & ma) != 0, bb = (i & mb) != 0;
            if (ba != bb) out.amp[i] = 2.0 * psi.amp[i ^ flip];
        }
    }
    return out;
}

} // namespace

Circuit hva_circuit(int L, const std::vector<double>& params) {
    if (params.size() % 4 != 0) throw ConfigError("hva_circuit: need 4 parameters per layer");
    const int layers = static_cast<int>(params.size()) / 4;
    Circuit c;
    c.n_system = L;
    for (auto& ref : hva_structure(L, layers)) {
        ref.gate.theta = params[static_cast<std::size_t>(ref.param)];
        c.add(ref.gate);
    }
    return c;
}

double hva_energy(const StateVector& warm, int L, const std::vector<double>& params,
                  const CompiledPauliSum& h) {
    StateVector psi = warm;
    for (auto& ref : hva_structure(L, static_cast<int>(params.size()) / 4)) {
        ref.gate.theta = params[static_cast<std::size_t>(ref.param)];
        apply_gate(psi, ref.gate);
    }
    return raw_expectation(psi, h).real();
}

double hva_energy_grad(const StateVector& warm, int L, const std::vector<double>& params,
                       const CompiledPauliSum& h, std::vector<double>& grad) {
    auto structure = hva_structure(L, static_cast<int>(params.size()) / 4);
    for (auto& ref : structure) ref.gate.theta = params[static_cast<std::size_t>(ref.param)];

    StateVector psi = warm;
    for (const auto& ref : structure) apply_gate(psi, ref.gate);
    StateVector lambda = pauli_apply(psi, h);
    const double energy = inner_product(psi, lambda).real();

    grad.assign(params.size(), 0.0);
    for (auto it = structure.rbegin(); it != structure.rend(); ++it) {
        // dE/dtheta = Im <lambda| G |psi_k> with U = exp(-i theta/2 G)
        const StateVector gpsi = apply_generator(psi, it->gate);
        grad[static_cast<std::size_t>(it->param)] += inner_product(lambda, gpsi).imag();
        const Gate adj = it->gate.adjoint();
        apply_gate(psi, adj);
        apply_gate(lambda, adj);
    }
    return energy;
}

PrepResult vqe_optimize(const SpinModel& model, const VqeConfig& cfg, WarmStart warm_start) {
    model.validate();
    if (model.kind == ModelKind::XY)
        throw ConfigError("vqe_optimize: use Heisenberg or Haldane-Shastry");
    if (model.L % 2 != 0) throw ConfigError("vqe_optimize: L must be even");
    const int layers = cfg.layers >= 0 ? cfg.layers : model.L / 2;
    const std::size_t n_params = static_cast<std::size_t>(4) * layers;

    const StateVector warm =
        warm_start == WarmStart::VBC ? vbc_state(model.L) : xy_ground_state(model.L, false).state;
    const CompiledPauliSum h = compile(build_hamiltonian(model));
    const Spectrum ed = ground_state_ed(model);

    auto finish = [&](std::vector<double> params, double energy, bool converged,
                      std::uint64_t seed) {
        PrepResult out;
        out.L = model.L;
        // the ansatz is built for the nearest-neighbor chain; long-range
        // models are accepted but labeled as such
        out.route = model.kind == ModelKind::HaldaneShastry ? "vqe-experimental" : "vqe";
        out.params = std::move(params);
        out.seed = seed;
        out.converged = converged;
        StateVector psi = warm;
        apply_circuit(psi, hva_circuit(model.L, out.params));
        out.state = std::move(psi);
        out.energy = energy;
        out.infidelity = 1.0 - fidelity(out.state, ed.ground_state);
        out.rel_energy_error = std::abs((out.energy - ed.ground_energy) / ed.ground_energy);
        return out;
    };

    if (layers == 0) {
        const double e = raw_expectation(warm, h).real();
        return finish({}, e, true, cfg.seed);
    }

    ObjectiveFn obj = [&](const std::vector<double>& x) { return hva_energy(warm, model.L, x, h); };
    GradientFn grd = [&](const std::vector<double>& x) {
        std::vector<double> g;
        hva_energy_grad(warm, model.L, x, h, g);
        return g;
    };
    const MinimizerFn minimize = cfg.minimizer ? cfg.minimizer : MinimizerFn(bfgs_minimize);

    auto run_restart = [&](int r) {
        std::vector<double> x0(n_params, 0.0);
        const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
        if (cfg.init == InitScheme::Supplied) {
            if (cfg.supplied_params.size() != n_params)
                throw ConfigError("vqe_optimize: supplied parameter count mismatch");
            x0 = cfg.supplied_params;
        } else {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> unif(-0.01, 0.01);
            for (auto& v : x0) v = unif(rng);
        }
        return std::make_pair(minimize(obj, grd, x0, cfg.opt), seed);
    };

    std::vector<std::pair<MinimizeResult, std::uint64_t>> results(
        static_cast<std::size_t>(cfg.restarts));
    if (cfg.jobs > 1) {
        std::vector<std::future<std::pair<MinimizeResult, std::uint64_t>>> futs;
        futs.reserve(results.size());
        for (int r = 0; r < cfg.restarts; ++r)
            futs.push_back(std::async(std::launch::async, run_restart, r));
        for (int r = 0; r < cfg.restarts; ++r) results[static_cast<std::size_t>(r)] = futs[r].get();
    } else {
        for (int r = 0; r < cfg.restarts; ++r) results[static_cast<std::size_t>(r)] = run_restart(r);
    }

    int best = 0;
    bool any_converged = false;
    for (int r = 0; r < cfg.restarts; ++r) {
        any_converged = any_converged || results[r].first.converged;
        if (results[r].first.fun < results[best].first.fun) best = r;
    }
    return finish(results[best].first.x, results[best].first.fun, any_converged,
                  results[best].second);
}

StateVector fermi_sea_state(int L) {
    if (L < 2 || L % 2 != 0) throw ConfigError("fermi_sea_state: L must be even");
    if (2 * L > kMaxQubits) throw CapacityError("fermi_sea_state: 2L exceeds the qubit cap");
    const auto q = fermi_sea_orbitals(L);
    StateVector st(2 * L);
    for (const auto& g : slater_prep_gates(q, L, 0, 2 * L)) apply_gate(st, g);
    for (const auto& g : slater_prep_gates(q, L, L, 2 * L)) apply_gate(st, g);
    return st;
}

StateVector gutzwiller_project(const StateVector& fermion_state) {
    if (fermion_state.n % 2 != 0) throw ConfigError("gutzwiller_project: need 2L qubits");
    const int L = fermion_state.n / 2;
    StateVector out = fermion_state;
    out.normalized = false;
    for (std::uint64_t i = 0; i < out.dim(); ++i) {
        if (out.amp[i] == 0.0) continue;
        for (int s = 0; s < L; ++s) {
            if ((i & site_mask(out.n, s)) && (i & site_mask(out.n, L + s))) {
                out.amp[i] = 0.0;
                break;
            }
        }
    }
    return out;
}

PrepResult gutzwiller_ground_state(int L, const GutzwillerMode& mode) {
    if (L < 2 || L % 2 != 0) throw ConfigError("gutzwiller_ground_state: L must be even");
    if (L > 12) throw CapacityError("gutzwiller_ground_state: statevector mode caps at L = 12");

    StateVector st = fermi_sea_state(L);

    // interleave modes (u0..u_{L-1}, d0..d_{L-1}) -> (u0, d0, u1, d1, ...) with
    // fermionic swaps so the projected amplitudes carry the right signs
    std::vector<int> order(2 * L);
    for (int p = 0; p < 2 * L; ++p) order[p] = p; // p < L: up_p, p >= L: down_{p-L}
    for (int s = 0; s < L; ++s) {
        int pos = -1;
        for (int p = 0; p < 2 * L; ++p)
            if (order[p] == L + s) pos = p;
        while (pos > 2 * s + 1) {
            apply_gate(st, Gate::fswap(pos - 1, pos));
            std::swap(order[pos - 1], order[pos]);
            --pos;
        }
    }

    for (int s = 0; s < L; ++s) apply_gate(st, Gate::cnot(2 * s, 2 * s + 1));

    std::vector<int> measured;
    for (int s = 0; s < L; ++s) measured.push_back(2 * s + 1);
    const std::string all_ones(static_cast<std::size_t>(L), '1');

    PrepResult out;
    out.L = L;
    out.route = "gutzwiller";
    auto [spin_occ, p_success] = collapse_and_remove(st, measured, all_ones);
    if (p_success <= 0.0) throw NumericError("gutzwiller_ground_state: projection has zero weight");
    out.success_probability = p_success;

    if (mode.sampled) {
        const ShotEstimate est = sample(st, measured, mode.n_shots, mode.seed);
        long successes = 0;
        if (auto it = est.counts.find(all_ones); it != est.counts.end()) successes = it->second;
        if (successes == 0)
            throw NumericError("gutzwiller_ground_state: no successful post-selections sampled");
        out.success_probability = static_cast<double>(successes) / mode.n_shots;
        out.seed = mode.seed;
    }

    // occupation of the up register -> spin convention (up = 0)
    for (int s = 0; s < L; ++s) apply_gate(spin_occ, Gate::x(s));
    out.state = std::move(spin_occ);

    SpinModel hs{ModelKind::HaldaneShastry, 1.0, 1.0, L, true};
    const Spectrum ed = ground_state_ed(hs);
    out.energy = expectation(out.state, build_hamiltonian(hs));
    out.infidelity = 1.0 - fidelity(out.state, ed.ground_state);
    out.rel_energy_error = std::abs((out.energy - ed.ground_energy) / ed.ground_energy);
    return out;
}

} // namespace spinonsim
