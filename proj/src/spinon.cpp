#include "spinonsim/spinon.hpp"

#include <cmath>

#include "spinonsim/errors.hpp"

namespace spinonsim {

std::string to_string(E0Source s) { return s == E0Source::ED ? "ed" : "bethe"; }

std::string to_string(Method m) {
    switch (m) {
    case Method::Exact: return "exact";
    case Method::Lcu: return "lcu";
    case Method::Hadamard: return "hadamard";
    }
    return "?";
}

double MomentumGrid::point(int n) const { return 2.0 * M_PI * n / (L + 1); }

std::vector<double> MomentumGrid::points() const {
    std::vector<double> q(static_cast<std::size_t>(L) + 1);
    for (int n = 0; n <= L; ++n) q[static_cast<std::size_t>(n)] = point(n);
    return q;
}

double MomentumGrid::fold(double q) {
    double r = std::fmod(q, 2.0 * M_PI);
    if (r < 0) r += 2.0 * M_PI;
    return r <= M_PI ? r : 2.0 * M_PI - r;
}

StateVector extend_state(const StateVector& gs, int m) {
    const int L = gs.n;
    if (m < 0 || m > L) throw ConfigError("extend_state: insertion site out of range");
    StateVector out(L + 1);
    out.amp.assign(out.dim(), cplx{0.0, 0.0});
    // split each index into the sites before/after m; the inserted up spin is a 0 bit
    const std::uint64_t low_bits = static_cast<std::uint64_t>(L - m);
    const std::uint64_t low_mask = (low_bits == 0) ? 0 : ((std::uint64_t{1} << low_bits) - 1);
    for (std::uint64_t i = 0; i < gs.dim(); ++i) {
        const cplx v = gs.amp[i];
        if (v == 0.0) continue;
        const std::uint64_t high = i >> low_bits;
        const std::uint64_t low = i & low_mask;
        out.amp[(high << (low_bits + 1)) | low] = v;
    }
    out.normalized = gs.normalized;
    return out;
}

StateVector spinon_state(const StateVector& gs, double q) {
    const int L = gs.n;
    StateVector out(L + 1);
    out.amp.assign(out.dim(), cplx{0.0, 0.0});
    const double w = 1.0 / std::sqrt(L + 1.0);
    for (int m = 0; m <= L; ++m) {
        const cplx phase = std::polar(w, q * m);
        const StateVector em = extend_state(gs, m);
        for (std::uint64_t i = 0; i < em.dim(); ++i) out.amp[i] += phase * em.amp[i];
    }
    out.normalized = false;
    return out;
}

double norm_exact(const StateVector& gs, double q) { return spinon_state(gs, q).norm2(); }

E0Source default_e0_source(const SpinModel& model) {
    if (model.L + 1 <= 21) return E0Source::ED;
    if (model.kind == ModelKind::Heisenberg) return E0Source::Bethe;
    throw CapacityError("no ground-energy source for extended chains this long");
}

DispersionContext make_dispersion_context(const SpinModel& model, E0Source source) {
    model.validate();
    DispersionContext ctx;
    ctx.model = model;
    const SpinModel ext = model.with_sites(model.L + 1);
    ctx.h_ext = compile(build_hamiltonian(ext));
    ctx.e0_source = source;
    if (source == E0Source::Bethe) {
        if (model.kind != ModelKind::Heisenberg)
            throw ConfigError("Bethe ground energy only applies to the Heisenberg chain");
        ctx.e0 = bethe_gs_energy(model.L + 1, model.J);
    } else {
        ctx.e0 = ground_state_ed(ext).ground_energy;
    }
    return ctx;
}

SpinonResult dispersion_exact(const StateVector& gs, const DispersionContext& ctx, double q) {
    SpinonResult r;
    r.L = gs.n;
    r.q = q;
    r.method = Method::Exact;
    r.e0_source = ctx.e0_source;
    const StateVector psi = spinon_state(gs, q);
    r.norm = psi.norm2();
    const cplx h = raw_expectation(psi, ctx.h_ext);
    r.h_expect = h.real();
    r.h_defined = true;
    if (r.norm > norm_threshold(gs.n)) {
        r.epsilon = r.h_expect / r.norm - ctx.e0;
        r.epsilon_defined = true;
    }
    return r;
}

std::vector<std::vector<cplx>> overlap_table_exact(const StateVector& gs) {
    const int L = gs.n;
    std::vector<StateVector> ext;
    ext.reserve(static_cast<std::size_t>(L) + 1);
    for (int m = 0; m <= L; ++m) ext.push_back(extend_state(gs, m));
    std::vector<std::vector<cplx>> s(static_cast<std::size_t>(L) + 1,
                                     std::vector<cplx>(static_cast<std::size_t>(L) + 1));
    for (int m = 0; m <= L; ++m)
        for (int n = 0; n <= L; ++n) s[m][n] = inner_product(ext[m], ext[n]);
    return s;
}

} // namespace spinonsim
