#include "spinonsim/statevector.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <random>

#include "spinonsim/errors.hpp"

namespace spinonsim {

namespace {

constexpr cplx kI{0.0, 1.0};

int gate_arity(GateKind k) {
    switch (k) {
    case GateKind::RY:
    case GateKind::H:
    case GateKind::Sdg:
    case GateKind::S:
    case GateKind::X:
    case GateKind::CNOT: // one target, control carried separately
    case GateKind::Phase:
        return 1;
    default:
        return 2;
    }
}

} // namespace

Gate Gate::ry(int q, double theta) { return {GateKind::RY, {q}, {}, theta, 0.0}; }
Gate Gate::rzz(int a, int b, double theta) { return {GateKind::RZZ, {a, b}, {}, theta, 0.0}; }
Gate Gate::rxx_plus_yy(int a, int b, double theta) {
    return {GateKind::RXXplusYY, {a, b}, {}, theta, 0.0};
}
Gate Gate::h(int q) { return {GateKind::H, {q}, {}, 0.0, 0.0}; }
Gate Gate::sdg(int q) { return {GateKind::Sdg, {q}, {}, 0.0, 0.0}; }
Gate Gate::s(int q) { return {GateKind::S, {q}, {}, 0.0, 0.0}; }
Gate Gate::x(int q) { return {GateKind::X, {q}, {}, 0.0, 0.0}; }
Gate Gate::cnot(int control, int target) { return {GateKind::CNOT, {target}, {control}, 0.0, 0.0}; }
Gate Gate::swap(int a, int b) { return {GateKind::SWAP, {a, b}, {}, 0.0, 0.0}; }
Gate Gate::phased_swap(int a, int b, double q) { return {GateKind::PhasedSWAP, {a, b}, {}, 0.0, q}; }
Gate Gate::fredkin(int control, int a, int b) {
    return {GateKind::Fredkin, {a, b}, {control}, 0.0, 0.0};
}
Gate Gate::givens(int a, int b, double theta, double phi) {
    return {GateKind::Givens, {a, b}, {}, theta, phi};
}
Gate Gate::fswap(int a, int b) { return {GateKind::FSWAP, {a, b}, {}, 0.0, 0.0}; }
Gate Gate::phase(int q, double phi) { return {GateKind::Phase, {q}, {}, 0.0, phi}; }

Gate Gate::controlled(Gate g, int control) {
    g.controls.push_back(control);
    return g;
}

Gate Gate::adjoint() const {
    Gate g = *this;
    switch (kind) {
    case GateKind::RY:
    case GateKind::RZZ:
    case GateKind::RXXplusYY:
        g.theta = -theta;
        break;
    case GateKind::Givens:
        g.theta = -theta;
        break;
    case GateKind::PhasedSWAP:
    case GateKind::Phase:
        g.phi = -phi;
        break;
    case GateKind::Sdg:
        g.kind = GateKind::S;
        break;
    case GateKind::S:
        g.kind = GateKind::Sdg;
        break;
    default:
        break; // H, X, CNOT, SWAP, Fredkin, FSWAP are involutions
    }
    return g;
}

void Circuit::add(Gate g) {
    const int n = n_total();
    std::vector<int> seen;
    for (int q : g.targets) {
        if (q < 0 || q >= n) throw ConfigError("Circuit::add: target out of range");
        seen.push_back(q);
    }
    for (int q : g.controls) {
        if (q < 0 || q >= n) throw ConfigError("Circuit::add: control out of range");
        seen.push_back(q);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw ConfigError("Circuit::add: duplicate qubit index in gate");
    if (static_cast<int>(g.targets.size()) != gate_arity(g.kind))
        throw ConfigError("Circuit::add: wrong target count for gate kind");
    gates.push_back(std::move(g));
}

std::size_t Circuit::count_controlled() const {
    std::size_t c = 0;
    for (const auto& g : gates)
        if (g.is_controlled()) ++c;
    return c;
}

std::size_t Circuit::count_kind(GateKind k) const {
    std::size_t c = 0;
    for (const auto& g : gates)
        if (g.kind == k) ++c;
    return c;
}

Circuit inverse(const Circuit& c) {
    Circuit out;
    out.n_system = c.n_system;
    out.n_ancilla = c.n_ancilla;
    out.gates.reserve(c.gates.size());
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) out.gates.push_back(it->adjoint());
    return out;
}

StateVector::StateVector(int n_qubits) : n(n_qubits) {
    if (n_qubits < 0) throw ConfigError("StateVector: negative qubit count");
    if (n_qubits > kMaxQubits) throw CapacityError("StateVector: qubit count exceeds cap of 25");
    amp.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    if (!amp.empty()) amp[0] = 1.0;
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    s.amp[0] = 0.0;
    s.amp[index] = 1.0;
    return s;
}

double StateVector::norm2() const {
    double acc = 0.0;
    for (const auto& a : amp) acc += std::norm(a);
    return acc;
}

void StateVector::renormalize() {
    const double nrm = std::sqrt(norm2());
    if (nrm <= 0.0) throw NumericError("StateVector::renormalize: zero norm");
    for (auto& a : amp) a /= nrm;
    normalized = true;
}

void StateVector::check_normalized(double tol) const {
    if (std::abs(norm2() - 1.0) > tol) throw NumericError("StateVector: state is not normalized");
}

namespace {

std::uint64_t control_mask(const StateVector& s, const std::vector<int>& controls) {
    std::uint64_t m = 0;
    for (int q : controls) {
        if (q < 0 || q >= s.n) throw ConfigError("apply_gate: control index out of range");
        m |= site_mask(s.n, q);
    }
    return m;
}

void check_targets(const StateVector& s, const Gate& g) {
    for (int q : g.targets)
        if (q < 0 || q >= s.n) throw ConfigError("apply_gate: target index out of range");
}

void apply_1q(StateVector& s, int q, const std::array<cplx, 4>& u, std::uint64_t cmask) {
    const std::uint64_t m = site_mask(s.n, q);
    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & m) != 0 || (i & cmask) != cmask) continue;
        const std::uint64_t j = i | m;
        const cplx a0 = s.amp[i], a1 = s.amp[j];
        s.amp[i] = u[0] * a0 + u[1] * a1;
        s.amp[j] = u[2] * a0 + u[3] * a1;
    }
}

// gates acting only on the {|01>,|10>} block: [[m00, m01], [m10, m11]]
void apply_hop_block(StateVector& s, int qa, int qb, cplx m00, cplx m01, cplx m10, cplx m11,
                     std::uint64_t cmask) {
    const std::uint64_t ma = site_mask(s.n, qa);
    const std::uint64_t mb = site_mask(s.n, qb);
    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & (ma | mb)) != 0 || (i & cmask) != cmask) continue;
        const std::uint64_t i01 = i | mb, i10 = i | ma;
        const cplx v1 = s.amp[i01], v2 = s.amp[i10];
        s.amp[i01] = m00 * v1 + m01 * v2;
        s.amp[i10] = m10 * v1 + m11 * v2;
    }
}

void apply_swap_like(StateVector& s, int qa, int qb, std::uint64_t cmask, cplx global,
                     cplx phase11) {
    const std::uint64_t ma = site_mask(s.n, qa);
    const std::uint64_t mb = site_mask(s.n, qb);
    const std::uint64_t dim = s.dim();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & (ma | mb)) != 0 || (i & cmask) != cmask) continue;
        const std::uint64_t i01 = i | mb, i10 = i | ma, i11 = i | ma | mb;
        std::swap(s.amp[i01], s.amp[i10]);
        if (global != 1.0) {
            s.amp[i] *= global;
            s.amp[i01] *= global;
            s.amp[i10] *= global;
            s.amp[i11] *= global;
        }
        if (phase11 != 1.0) s.amp[i11] *= phase11;
    }
}

} // namespace

void apply_gate(StateVector& state, const Gate& g) {
    check_targets(state, g);
    const std::uint64_t cmask = control_mask(state, g.controls);
    switch (g.kind) {
    case GateKind::RY: {
        const double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
        apply_1q(state, g.targets[0], {cplx{c}, cplx{-s}, cplx{s}, cplx{c}}, cmask);
        break;
    }
    case GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        apply_1q(state, g.targets[0], {cplx{r}, cplx{r}, cplx{r}, cplx{-r}}, cmask);
        break;
    }
    case GateKind::Sdg:
        apply_1q(state, g.targets[0], {cplx{1.0}, cplx{0.0}, cplx{0.0}, -kI}, cmask);
        break;
    case GateKind::S:
        apply_1q(state, g.targets[0], {cplx{1.0}, cplx{0.0}, cplx{0.0}, kI}, cmask);
        break;
    case GateKind::X:
    case GateKind::CNOT:
        apply_1q(state, g.targets[0], {cplx{0.0}, cplx{1.0}, cplx{1.0}, cplx{0.0}}, cmask);
        break;
    case GateKind::Phase:
        apply_1q(state, g.targets[0], {cplx{1.0}, cplx{0.0}, cplx{0.0}, std::polar(1.0, g.phi)},
                 cmask);
        break;
    case GateKind::RZZ: {
        const cplx same = std::polar(1.0, -g.theta / 2);
        const cplx diff = std::polar(1.0, g.theta / 2);
        const std::uint64_t ma = site_mask(state.n, g.targets[0]);
        const std::uint64_t mb = site_mask(state.n, g.targets[1]);
        const std::uint64_t dim = state.dim();
        for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & cmask) != cmask) continue;
            const bool ba = (i & ma) != 0, bb = (i & mb) != 0;
            state.amp[i] *= (ba == bb) ? same : diff;
        }
        break;
    }
    case GateKind::RXXplusYY: {
        const cplx c = std::cos(g.theta);
        const cplx ms = -kI * std::sin(g.theta);
        apply_hop_block(state, g.targets[0], g.targets[1], c, ms, ms, c, cmask);
        break;
    }
    case GateKind::Givens: {
        const cplx c = std::cos(g.theta), s = std::sin(g.theta);
        const cplx e = std::polar(1.0, g.phi), em = std::polar(1.0, -g.phi);
        apply_hop_block(state, g.targets[0], g.targets[1], c, -e * s, em * s, c, cmask);
        break;
    }
    case GateKind::SWAP:
    case GateKind::Fredkin:
        apply_swap_like(state, g.targets[0], g.targets[1], cmask, 1.0, 1.0);
        break;
    case GateKind::PhasedSWAP:
        apply_swap_like(state, g.targets[0], g.targets[1], cmask, std::polar(1.0, g.phi), 1.0);
        break;
    case GateKind::FSWAP:
        apply_swap_like(state, g.targets[0], g.targets[1], cmask, 1.0, -1.0);
        break;
    }
}

void apply_circuit(StateVector& state, const Circuit& c) {
    if (c.n_total() != state.n) throw ConfigError("apply_circuit: register size mismatch");
    for (const auto& g : c.gates) apply_gate(state, g);
}

void apply_swap_ladder(StateVector& state, int from, int to, double q) {
    if (from > to) throw ConfigError("apply_swap_ladder: from > to");
    if (to >= state.n) throw ConfigError("apply_swap_ladder: site out of range");
    for (int j = from; j < to; ++j) apply_gate(state, Gate::swap(j, j + 1));
    const cplx phase = std::polar(1.0, static_cast<double>(to - from) * q);
    if (phase != 1.0)
        for (auto& a : state.amp) a *= phase;
}

cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.n != b.n) throw ConfigError("inner_product: dimension mismatch");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a.amp[i]) * b.amp[i];
    return acc;
}

CompiledPauliSum compile(const PauliSum& h) {
    PauliSum canon = h;
    canon.canonicalize();
    CompiledPauliSum out;
    out.n_qubits = h.n_qubits;
    out.terms.reserve(canon.terms.size());
    for (const auto& t : canon.terms) {
        CompiledPauliSum::Term ct;
        ct.coeff = t.coeff;
        for (int q = 0; q < h.n_qubits; ++q) {
            const char c = t.ops[q];
            if (c == 'X' || c == 'Y') ct.x_mask |= site_mask(h.n_qubits, q);
            if (c == 'Z' || c == 'Y') ct.sign_mask |= site_mask(h.n_qubits, q);
            if (c == 'Y') ++ct.n_y;
        }
        out.terms.push_back(ct);
    }
    return out;
}

namespace {

inline cplx i_power(int k) {
    switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

} // namespace

cplx raw_matrix_element(const StateVector& a, const CompiledPauliSum& h, const StateVector& b) {
    if (a.n != h.n_qubits || b.n != h.n_qubits)
        throw ConfigError("matrix_element: dimension mismatch");
    cplx acc{0.0, 0.0};
    const std::uint64_t dim = b.dim();
    for (const auto& t : h.terms) {
        const cplx base = t.coeff * i_power(t.n_y);
        cplx term{0.0, 0.0};
        for (std::uint64_t i = 0; i < dim; ++i) {
            const cplx v = b.amp[i];
            if (v == 0.0) continue;
            const double sign = (std::popcount(i & t.sign_mask) & 1) ? -1.0 : 1.0;
            term += sign * std::conj(a.amp[i ^ t.x_mask]) * v;
        }
        acc += base * term;
    }
    return acc;
}

cplx raw_expectation(const StateVector& state, const CompiledPauliSum& h) {
    return raw_matrix_element(state, h, state);
}

double expectation(const StateVector& state, const CompiledPauliSum& h) {
    for (const auto& t : h.terms)
        if (std::abs(t.coeff.imag()) > 1e-12)
            throw ConfigError("expectation: non-Hermitian operator");
    state.check_normalized();
    const cplx v = raw_expectation(state, h);
    if (std::abs(v.imag()) > 1e-10)
        throw NumericError("expectation: imaginary residue above tolerance");
    return v.real();
}

double expectation(const StateVector& state, const PauliSum& h) {
    return expectation(state, compile(h));
}

StateVector pauli_apply(const StateVector& state, const CompiledPauliSum& h) {
    if (state.n != h.n_qubits) throw ConfigError("pauli_apply: dimension mismatch");
    StateVector out(state.n);
    out.amp.assign(state.dim(), cplx{0.0, 0.0});
    out.normalized = false;
    const std::uint64_t dim = state.dim();
    for (const auto& t : h.terms) {
        const cplx base = t.coeff * i_power(t.n_y);
        for (std::uint64_t i = 0; i < dim; ++i) {
            const cplx v = state.amp[i];
            if (v == 0.0) continue;
            const double sign = (std::popcount(i & t.sign_mask) & 1) ? -1.0 : 1.0;
            out.amp[i ^ t.x_mask] += base * sign * v;
        }
    }
    return out;
}

std::vector<double> marginal_probs(const StateVector& state, const std::vector<int>& qubits) {
    if (qubits.empty()) throw ConfigError("marginal_probs: empty qubit list");
    for (int q : qubits)
        if (q < 0 || q >= state.n) throw ConfigError("marginal_probs: qubit out of range");
    const int k = static_cast<int>(qubits.size());
    const std::uint64_t dim = state.dim();
    // identity gather: the marginal is the full Born distribution
    bool identity = (k == state.n);
    for (int j = 0; identity && j < k; ++j) identity = (qubits[j] == j);
    std::vector<double> probs(std::size_t{1} << k, 0.0);
    if (identity) {
        for (std::uint64_t i = 0; i < dim; ++i) probs[i] = std::norm(state.amp[i]);
        return probs;
    }
    std::vector<std::uint64_t> masks(qubits.size());
    for (std::size_t j = 0; j < qubits.size(); ++j) masks[j] = site_mask(state.n, qubits[j]);
    for (std::uint64_t i = 0; i < dim; ++i) {
        const double p = std::norm(state.amp[i]);
        if (p == 0.0) continue;
        std::uint64_t sub = 0;
        for (int j = 0; j < k; ++j) sub = (sub << 1) | ((i & masks[j]) ? 1u : 0u);
        probs[sub] += p;
    }
    return probs;
}

std::map<std::uint64_t, long> sample_counts(const StateVector& state, const std::vector<int>& qubits,
                                            long n_shots, std::uint64_t seed) {
    if (n_shots < 1) throw ConfigError("sample: n_shots must be >= 1");
    const auto probs = marginal_probs(state, qubits);
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    const double total = acc;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, total);
    std::map<std::uint64_t, long> raw;
    for (long s = 0; s < n_shots; ++s) {
        const double u = unif(rng);
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const std::uint64_t idx = static_cast<std::uint64_t>(it - cdf.begin());
        ++raw[std::min<std::uint64_t>(idx, probs.size() - 1)];
    }
    return raw;
}

ShotEstimate sample(const StateVector& state, const std::vector<int>& qubits, long n_shots,
                    std::uint64_t seed) {
    const auto raw = sample_counts(state, qubits, n_shots, seed);
    ShotEstimate est;
    est.n_shots = n_shots;
    est.seed = seed;
    const int k = static_cast<int>(qubits.size());
    for (const auto& [idx, cnt] : raw) est.counts[to_bitstring(idx, k)] = cnt;
    return est;
}

namespace {

void parse_outcome(const std::vector<int>& qubits, const std::string& outcome, int n,
                   std::uint64_t& mask, std::uint64_t& want) {
    if (qubits.size() != outcome.size())
        throw ConfigError("post_select: outcome length does not match qubit list");
    mask = 0;
    want = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        if (qubits[j] < 0 || qubits[j] >= n) throw ConfigError("post_select: qubit out of range");
        const std::uint64_t m = site_mask(n, qubits[j]);
        if (mask & m) throw ConfigError("post_select: duplicate qubit");
        mask |= m;
        if (outcome[j] == '1')
            want |= m;
        else if (outcome[j] != '0')
            throw ConfigError("post_select: outcome must be a 0/1 bitstring");
    }
}

} // namespace

std::pair<StateVector, double> post_select(const StateVector& state, const std::vector<int>& qubits,
                                           const std::string& outcome, bool strict) {
    std::uint64_t mask = 0, want = 0;
    parse_outcome(qubits, outcome, state.n, mask, want);
    StateVector out(state.n);
    out.amp.assign(state.dim(), cplx{0.0, 0.0});
    double p = 0.0;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        if ((i & mask) == want) {
            out.amp[i] = state.amp[i];
            p += std::norm(state.amp[i]);
        }
    }
    if (p <= 0.0) {
        if (strict) throw NumericError("post_select: zero-probability outcome requested");
        out.valid = false;
        out.normalized = false;
        return {out, 0.0};
    }
    const double inv = 1.0 / std::sqrt(p);
    for (auto& a : out.amp) a *= inv;
    return {out, p};
}

std::pair<StateVector, double> collapse_and_remove(const StateVector& state,
                                                   const std::vector<int>& qubits,
                                                   const std::string& outcome, bool normalize) {
    std::uint64_t mask = 0, want = 0;
    parse_outcome(qubits, outcome, state.n, mask, want);
    const int n_keep = state.n - static_cast<int>(qubits.size());
    StateVector out(n_keep);
    out.amp.assign(out.dim(), cplx{0.0, 0.0});
    std::vector<std::uint64_t> keep_masks;
    for (int q = 0; q < state.n; ++q)
        if (!(mask & site_mask(state.n, q))) keep_masks.push_back(site_mask(state.n, q));
    double p = 0.0;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        if ((i & mask) != want) continue;
        const cplx v = state.amp[i];
        if (v == 0.0) continue;
        std::uint64_t sub = 0;
        for (const std::uint64_t m : keep_masks) sub = (sub << 1) | ((i & m) ? 1u : 0u);
        out.amp[sub] = v;
        p += std::norm(v);
    }
    if (p <= 0.0) {
        out.valid = false;
        out.normalized = false;
        return {out, 0.0};
    }
    if (normalize) {
        const double inv = 1.0 / std::sqrt(p);
        for (auto& a : out.amp) a *= inv;
    } else {
        out.normalized = false;
    }
    return {out, p};
}

StateVector kron(const StateVector& high, const StateVector& low) {
    if (high.n + low.n > kMaxQubits) throw CapacityError("kron: qubit count exceeds cap of 25");
    StateVector out(high.n + low.n);
    out.amp.assign(out.dim(), cplx{0.0, 0.0});
    const std::uint64_t dlow = low.dim();
    for (std::uint64_t i = 0; i < high.dim(); ++i) {
        if (high.amp[i] == 0.0) continue;
        for (std::uint64_t j = 0; j < dlow; ++j)
            out.amp[(i << low.n) | j] = high.amp[i] * low.amp[j];
    }
    out.normalized = high.normalized && low.normalized;
    return out;
}

std::string to_bitstring(std::uint64_t value, int n_bits) {
    std::string s(static_cast<std::size_t>(n_bits), '0');
    for (int b = 0; b < n_bits; ++b)
        if (value & (std::uint64_t{1} << (n_bits - 1 - b))) s[b] = '1';
    return s;
}

} // namespace spinonsim
