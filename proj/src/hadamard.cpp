#include "spinonsim/hadamard.hpp"

#include <bit>
#include <cmath>
#include <future>

#include "spinonsim/errors.hpp"
#include "spinonsim/groundprep.hpp"

namespace spinonsim {

namespace {

// Measurement-ready view of one qubit-wise commuting group: basis rotations on
// the system register and per-term parity masks over system bits.
struct MeasGroup {
    std::vector<Gate> rotations; // indices relative to the system register
    std::vector<std::pair<std::uint64_t, double>> terms; // (mask over L+1 sites, coeff)
};

MeasGroup build_meas_group(const PauliSum& group) {
    const int n = group.n_qubits;
    MeasGroup out;
    std::string basis(static_cast<std::size_t>(n), 'I');
    for (const auto& term : group.terms)
        for (int q = 0; q < n; ++q)
            if (term.ops[q] != 'I') basis[q] = term.ops[q];
    for (int q = 0; q < n; ++q) {
        if (basis[q] == 'X') {
            out.rotations.push_back(Gate::h(q));
        } else if (basis[q] == 'Y') {
            out.rotations.push_back(Gate::sdg(q));
            out.rotations.push_back(Gate::h(q));
        }
    }
    for (const auto& term : group.terms) {
        std::uint64_t mask = 0;
        for (int q = 0; q < n; ++q)
            if (term.ops[q] != 'I') mask |= site_mask(n, q);
        out.terms.push_back({mask, term.coeff.real()});
    }
    return out;
}

double group_value(const MeasGroup& g, std::uint64_t sys_bits) {
    double v = 0.0;
    for (const auto& [mask, coeff] : g.terms)
        v += (std::popcount(sys_bits & mask) & 1) ? -coeff : coeff;
    return v;
}

struct MeanVar {
    double mean = 0.0;
    double sigma = 0.0; // standard error of the mean
};

template <typename F>
MeanVar shot_statistics(const std::map<std::uint64_t, long>& counts, long shots, F&& value) {
    double m1 = 0.0, m2 = 0.0;
    for (const auto& [bits, cnt] : counts) {
        const double v = value(bits);
        m1 += cnt * v;
        m2 += cnt * v * v;
    }
    m1 /= shots;
    m2 /= shots;
    MeanVar out;
    out.mean = m1;
    out.sigma = std::sqrt(std::max(0.0, m2 - m1 * m1) / shots);
    return out;
}

// Hadamard-test circuit on L+2 qubits; system sites 0..L, ancilla last (LSB).
// Rotations, if any, are appended on the system register.
StateVector hadamard_test_state(const StateVector& gs, int m, int n, Part part,
                                const std::vector<Gate>& rotations) {
    const int L = gs.n;
    StateVector anc(1);
    StateVector full = kron(extend_state(gs, m), anc);
    const int anc_q = L + 1;
    apply_gate(full, Gate::h(anc_q));
    for (int j = m; j < n; ++j) apply_gate(full, Gate::fredkin(anc_q, j, j + 1));
    if (part == Part::Im) apply_gate(full, Gate::sdg(anc_q));
    apply_gate(full, Gate::h(anc_q));
    for (const auto& g : rotations) apply_gate(full, g); // system-only, commute with the ancilla
    return full;
}

std::vector<int> all_qubits(int n) {
    std::vector<int> q(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = i;
    return q;
}

} // namespace

HadamardContext make_hadamard_context(const SpinModel& model) {
    model.validate();
    HadamardContext ctx;
    ctx.model = model;
    const PauliSum h = build_hamiltonian(model.with_sites(model.L + 1));
    ctx.h_ext = compile(h);
    ctx.groups = commuting_groups(h);
    return ctx;
}

MeasuredValue hadamard_overlap(const StateVector& gs, int m, int n, Part part,
                               const HadamardMode& mode) {
    const int L = gs.n;
    if (m < 0 || n > L || m >= n)
        throw ConfigError("hadamard_overlap: need 0 <= m < n <= L (diagonal entries are 1)");
    const StateVector full = hadamard_test_state(gs, m, n, part, {});
    MeasuredValue out;
    if (!mode.sampled) {
        const auto p = marginal_probs(full, {L + 1});
        out.value = p[0] - p[1];
    } else {
        const auto counts = sample_counts(full, {L + 1}, mode.n_shots, mode.seed);
        const auto mv = shot_statistics(counts, mode.n_shots,
                                        [](std::uint64_t b) { return b ? -1.0 : 1.0; });
        out.value = mv.mean;
        out.sigma_re = mv.sigma;
        out.shots = mode.n_shots;
    }
    return out;
}

MeasuredValue transition_amplitude(const StateVector& gs, const HadamardContext& ctx, int m, int n,
                                   const HadamardMode& mode) {
    const int L = gs.n;
    if (m < 0 || n > L || m > n) throw ConfigError("transition_amplitude: need 0 <= m <= n <= L");
    MeasuredValue out;
    out.shots = mode.sampled ? mode.n_shots : 0;

    if (m == n) {
        // diagonal: plain expectation on |Psi(m)>, no ancilla
        const StateVector psi = extend_state(gs, m);
        if (!mode.sampled) {
            out.value = raw_expectation(psi, ctx.h_ext).real();
            return out;
        }
        double mean = 0.0, var = 0.0;
        std::uint64_t stream = 0;
        for (const auto& group : ctx.groups) {
            const MeasGroup mg = build_meas_group(group);
            StateVector rotated = psi;
            for (const auto& g : mg.rotations) apply_gate(rotated, g);
            const auto counts = sample_counts(rotated, all_qubits(L + 1), mode.n_shots,
                                              derive_seed(mode.seed, stream++));
            const auto mv = shot_statistics(counts, mode.n_shots,
                                            [&](std::uint64_t b) { return group_value(mg, b); });
            mean += mv.mean;
            var += mv.sigma * mv.sigma;
        }
        out.value = mean;
        out.sigma_re = std::sqrt(var);
        return out;
    }

    double re = 0.0, im = 0.0, var_re = 0.0, var_im = 0.0;
    if (!mode.sampled) {
        for (Part part : {Part::Re, Part::Im}) {
            const StateVector full = hadamard_test_state(gs, m, n, part, {});
            auto [b0, p0] = collapse_and_remove(full, {L + 1}, "0", false);
            auto [b1, p1] = collapse_and_remove(full, {L + 1}, "1", false);
            double v = 0.0;
            if (p0 > 0.0) v += raw_expectation(b0, ctx.h_ext).real();
            if (p1 > 0.0) v -= raw_expectation(b1, ctx.h_ext).real();
            (part == Part::Re ? re : im) = v;
        }
    } else {
        std::uint64_t stream = 0;
        for (Part part : {Part::Re, Part::Im}) {
            double acc = 0.0, var = 0.0;
            for (const auto& group : ctx.groups) {
                const MeasGroup mg = build_meas_group(group);
                const StateVector full = hadamard_test_state(gs, m, n, part, mg.rotations);
                const auto counts = sample_counts(full, all_qubits(L + 2), mode.n_shots,
                                                  derive_seed(mode.seed, stream++));
                // ancilla sits in the least significant bit
                const auto mv =
                    shot_statistics(counts, mode.n_shots, [&](std::uint64_t b) {
                        const double sgn = (b & 1) ? -1.0 : 1.0;
                        return sgn * group_value(mg, b >> 1);
                    });
                acc += mv.mean;
                var += mv.sigma * mv.sigma;
            }
            (part == Part::Re ? re : im) = acc;
            (part == Part::Re ? var_re : var_im) = var;
        }
    }
    out.value = cplx{re, im};
    out.sigma_re = std::sqrt(var_re);
    out.sigma_im = std::sqrt(var_im);
    return out;
}

OverlapMatrix measure_matrices(const StateVector& gs, const HadamardContext& ctx,
                               const HadamardMode& mode, bool with_transitions) {
    const int L = gs.n;
    OverlapMatrix out;
    out.L = L;
    out.has_t = with_transitions;
    const std::size_t dim = static_cast<std::size_t>(L) + 1;
    out.s.assign(dim, std::vector<MeasuredValue>(dim));
    if (with_transitions) out.t.assign(dim, std::vector<MeasuredValue>(dim));

    struct Task {
        int m, n;
        std::uint64_t seed_s, seed_t;
    };
    std::vector<Task> tasks;
    std::uint64_t stream = 0;
    for (int m = 0; m <= L; ++m) {
        for (int n = m; n <= L; ++n) {
            Task t{m, n, 0, 0};
            t.seed_s = derive_seed(mode.seed, stream++);
            t.seed_t = derive_seed(mode.seed, stream++);
            tasks.push_back(t);
        }
    }

    auto run_task = [&](const Task& task) {
        const int m = task.m, n = task.n;
        if (m == n) {
            out.s[m][n].value = 1.0; // <Psi(m)|Psi(m)> needs no circuit
        } else {
            HadamardMode ms = mode;
            ms.seed = task.seed_s;
            const MeasuredValue re = hadamard_overlap(gs, m, n, Part::Re, ms);
            ms.seed = derive_seed(task.seed_s, 1);
            const MeasuredValue im = hadamard_overlap(gs, m, n, Part::Im, ms);
            MeasuredValue v;
            v.value = cplx{re.value.real(), im.value.real()};
            v.sigma_re = re.sigma_re;
            v.sigma_im = im.sigma_re;
            v.shots = re.shots;
            out.s[m][n] = v;
            MeasuredValue conj = v;
            conj.value = std::conj(v.value);
            out.s[n][m] = conj;
        }
        if (with_transitions) {
            HadamardMode mt = mode;
            mt.seed = task.seed_t;
            const MeasuredValue tv = transition_amplitude(gs, ctx, m, n, mt);
            out.t[m][n] = tv;
            if (m != n) {
                MeasuredValue conj = tv;
                conj.value = std::conj(tv.value);
                out.t[n][m] = conj;
            }
        }
    };

    if (mode.jobs > 1) {
        std::vector<std::future<void>> futs;
        futs.reserve(tasks.size());
        for (const auto& t : tasks)
            futs.push_back(std::async(std::launch::async, run_task, t));
        for (auto& f : futs) f.get();
    } else {
        for (const auto& t : tasks) run_task(t);
    }
    return out;
}

MeasuredValue reconstruct_norm(const OverlapMatrix& m, double q) {
    if (m.s.empty()) throw ConfigError("reconstruct_norm: overlap matrix is empty");
    const int L = m.L;
    // N(q) = (1/(L+1)) [ (L+1) + sum_{n>m} 2(cos(qd) Re s - sin(qd) Im s) ];
    // the diagonal enters once, Hermiticity supplies the lower triangle.
    double acc = static_cast<double>(L + 1);
    double var = 0.0;
    for (int a = 0; a <= L; ++a) {
        for (int b = a + 1; b <= L; ++b) {
            const double d = q * (b - a);
            const double c = std::cos(d), s = std::sin(d);
            acc += 2.0 * (c * m.s[a][b].value.real() - s * m.s[a][b].value.imag());
            var += 4.0 * (c * c * m.s[a][b].sigma_re * m.s[a][b].sigma_re +
                          s * s * m.s[a][b].sigma_im * m.s[a][b].sigma_im);
        }
    }
    MeasuredValue out;
    out.value = acc / (L + 1);
    out.sigma_re = std::sqrt(var) / (L + 1);
    return out;
}

SpinonResult reconstruct_energy(const OverlapMatrix& m, double q, const DispersionContext& ctx) {
    if (!m.has_t) throw ConfigError("reconstruct_energy: transition matrix missing");
    const int L = m.L;
    double acc = 0.0, var = 0.0;
    for (int a = 0; a <= L; ++a) {
        acc += m.t[a][a].value.real();
        var += m.t[a][a].sigma_re * m.t[a][a].sigma_re;
        for (int b = a + 1; b <= L; ++b) {
            const double d = q * (b - a);
            const double c = std::cos(d), s = std::sin(d);
            acc += 2.0 * (c * m.t[a][b].value.real() - s * m.t[a][b].value.imag());
            var += 4.0 * (c * c * m.t[a][b].sigma_re * m.t[a][b].sigma_re +
                          s * s * m.t[a][b].sigma_im * m.t[a][b].sigma_im);
        }
    }
    const MeasuredValue norm = reconstruct_norm(m, q);

    SpinonResult r;
    r.L = L;
    r.q = q;
    r.method = Method::Hadamard;
    r.e0_source = ctx.e0_source;
    r.norm = norm.value.real();
    r.norm_sigma = norm.sigma_re;
    r.h_expect = acc / (L + 1);
    r.h_sigma = std::sqrt(var) / (L + 1);
    r.h_defined = true;
    if (r.norm > norm_threshold(L)) {
        r.epsilon = r.h_expect / r.norm - ctx.e0;
        r.epsilon_defined = true;
        const double t_over_n2 = r.h_expect / (r.norm * r.norm);
        r.epsilon_sigma = std::sqrt(r.h_sigma * r.h_sigma / (r.norm * r.norm) +
                                    t_over_n2 * t_over_n2 * r.norm_sigma * r.norm_sigma);
    }
    return r;
}

PauliSum swap_string_pauli(int m, int n) {
    if (m < 0 || n < m) throw ConfigError("swap_string_pauli: need 0 <= m <= n");
    const int p = n - m;
    if (p > 8) throw CapacityError("swap_string_pauli: ladder length capped at 8");
    const int nq = p + 1;
    if (p == 0) {
        PauliSum id(1);
        id.add(1.0, "I");
        return id;
    }
    auto adjacent_swap = [&](int k) {
        PauliSum s(nq);
        for (char c : {'I', 'X', 'Y', 'Z'}) {
            std::string ops = identity_string(nq);
            ops[k] = c;
            ops[k + 1] = c;
            s.add(0.5, ops);
        }
        return s;
    };
    PauliSum acc = adjacent_swap(0);
    for (int k = 1; k < p; ++k) acc = multiply(adjacent_swap(k), acc);
    return acc;
}

CircuitCounts circuit_counts(int L, int n_groups) {
    if (L < 2 || n_groups < 1) throw ConfigError("circuit_counts: need L >= 2 and N_g >= 1");
    CircuitCounts out;
    out.norm_circuits = static_cast<long>(L) * (L + 1) / 2;
    out.energy_circuits = static_cast<long>(n_groups) * (L + 1) * (L + 2) / 2;
    out.fredkin_end = static_cast<long>(L) * (L + 1) / 2;
    long mid = 0;
    for (int m = 0; m <= L; ++m) mid += std::abs(m - L / 2);
    out.fredkin_middle = mid;
    return out;
}

} // namespace spinonsim
