#include "spinonsim/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "spinonsim/errors.hpp"
#include "spinonsim/linalg.hpp"

namespace spinonsim {

std::string to_string(ModelKind k) {
    switch (k) {
    case ModelKind::Heisenberg: return "heisenberg";
    case ModelKind::HaldaneShastry: return "hs";
    case ModelKind::XY: return "xy";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "heisenberg" || s == "xxx") return ModelKind::Heisenberg;
    if (s == "hs" || s == "haldane-shastry") return ModelKind::HaldaneShastry;
    if (s == "xy") return ModelKind::XY;
    throw ConfigError("unknown model kind: " + s);
}

void SpinModel::validate() const {
    if (L < 2) throw ConfigError("SpinModel: L must be >= 2");
    if (kind == ModelKind::HaldaneShastry && !periodic)
        throw ConfigError("SpinModel: Haldane-Shastry requires periodic boundaries");
}

SpinModel SpinModel::with_sites(int sites) const {
    SpinModel m = *this;
    m.L = sites;
    return m;
}

std::vector<Bond> model_bonds(const SpinModel& model) {
    model.validate();
    std::vector<Bond> bonds;
    switch (model.kind) {
    case ModelKind::Heisenberg:
        for (int n = 0; n < model.L; ++n) {
            if (!model.periodic && n == model.L - 1) break;
            const int j = (n + 1) % model.L;
            bonds.push_back({std::min(n, j), std::max(n, j), model.J, model.J * model.delta});
        }
        break;
    case ModelKind::XY:
        for (int n = 0; n < model.L; ++n) {
            if (!model.periodic && n == model.L - 1) break;
            const int j = (n + 1) % model.L;
            bonds.push_back({std::min(n, j), std::max(n, j), -model.J, 0.0});
        }
        break;
    case ModelKind::HaldaneShastry: {
        const double pref = model.J * M_PI * M_PI / (static_cast<double>(model.L) * model.L);
        for (int n = 0; n < model.L; ++n) {
            for (int m = n + 1; m < model.L; ++m) {
                const double s = std::sin(M_PI * (m - n) / model.L);
                const double c = pref / (s * s);
                bonds.push_back({n, m, c, c});
            }
        }
        break;
    }
    }
    return bonds;
}

PauliSum build_hamiltonian(const SpinModel& model) {
    const auto bonds = model_bonds(model);
    PauliSum h(model.L);
    for (const auto& b : bonds) {
        std::string xx = identity_string(model.L), yy = xx, zz = xx;
        xx[b.i] = 'X';
        xx[b.j] = 'X';
        yy[b.i] = 'Y';
        yy[b.j] = 'Y';
        zz[b.i] = 'Z';
        zz[b.j] = 'Z';
        // S = sigma/2, so each Pauli pair carries a factor 1/4
        if (b.jxy != 0.0) {
            h.add(b.jxy / 4.0, xx);
            h.add(b.jxy / 4.0, yy);
        }
        if (b.jz != 0.0) h.add(b.jz / 4.0, zz);
    }
    h.canonicalize();
    return h;
}

PauliSum total_sz_operator(int L) {
    PauliSum h(L);
    for (int i = 0; i < L; ++i) {
        std::string z = identity_string(L);
        z[i] = 'Z';
        h.add(0.5, z);
    }
    return h;
}

PauliSum total_spin_squared(int L) {
    // S_tot^2 = 3L/4 + 2 sum_{i<j} S_i.S_j
    PauliSum h(L);
    h.add(0.75 * L, identity_string(L));
    for (int i = 0; i < L; ++i) {
        for (int j = i + 1; j < L; ++j) {
            for (char p : {'X', 'Y', 'Z'}) {
                std::string s = identity_string(L);
                s[i] = p;
                s[j] = p;
                h.add(0.5, s);
            }
        }
    }
    h.canonicalize();
    return h;
}

SectorBasis make_sector_basis(int L, int n_down) {
    if (L > 24) throw CapacityError("sector basis: L above 24 not supported");
    SectorBasis b;
    b.L = L;
    b.n_down = n_down;
    const std::uint32_t dim = std::uint32_t{1} << L;
    b.index_of.assign(dim, -1);
    for (std::uint32_t s = 0; s < dim; ++s) {
        if (std::popcount(s) == n_down) {
            b.index_of[s] = static_cast<std::int32_t>(b.states.size());
            b.states.push_back(s);
        }
    }
    return b;
}

std::vector<double> sector_diagonal(const SectorBasis& basis, const std::vector<Bond>& bonds) {
    // bit 1 = down = Sz -1/2; Sz_i Sz_j = +1/4 on equal bits, -1/4 otherwise
    std::vector<double> diag(basis.states.size(), 0.0);
    std::vector<std::uint32_t> mi(bonds.size()), mj(bonds.size());
    for (std::size_t k = 0; k < bonds.size(); ++k) {
        mi[k] = std::uint32_t{1} << (basis.L - 1 - bonds[k].i);
        mj[k] = std::uint32_t{1} << (basis.L - 1 - bonds[k].j);
    }
    for (std::size_t a = 0; a < basis.states.size(); ++a) {
        const std::uint32_t s = basis.states[a];
        double e = 0.0;
        for (std::size_t k = 0; k < bonds.size(); ++k) {
            const bool bi = s & mi[k], bj = s & mj[k];
            e += (bi == bj ? 0.25 : -0.25) * bonds[k].jz;
        }
        diag[a] = e;
    }
    return diag;
}

void sector_matvec(const SectorBasis& basis, const std::vector<Bond>& bonds,
                   const std::vector<double>& diag, const std::vector<double>& x,
                   std::vector<double>& y) {
    const std::size_t dim = basis.states.size();
    y.assign(dim, 0.0);
    for (std::size_t a = 0; a < dim; ++a) y[a] = diag[a] * x[a];
    for (const auto& bond : bonds) {
        if (bond.jxy == 0.0) continue;
        const std::uint32_t mi = std::uint32_t{1} << (basis.L - 1 - bond.i);
        const std::uint32_t mj = std::uint32_t{1} << (basis.L - 1 - bond.j);
        const std::uint32_t flip = mi | mj;
        const double half = 0.5 * bond.jxy;
        for (std::size_t a = 0; a < dim; ++a) {
            const std::uint32_t s = basis.states[a];
            const bool bi = s & mi, bj = s & mj;
            if (bi == bj) continue;
            const std::int32_t partner = basis.index_of[s ^ flip];
            y[static_cast<std::size_t>(partner)] += half * x[a];
        }
    }
}

namespace {

struct LanczosOut {
    double e0 = 0.0;
    std::vector<double> vec;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

// Restarted Lanczos with full reorthogonalization inside each cycle.
LanczosOut lanczos_lowest(const SectorBasis& basis, const std::vector<Bond>& bonds,
                          double tol, long max_iters) {
    const std::size_t dim = basis.states.size();
    const auto diag = sector_diagonal(basis, bonds);
    const int m_max = dim > 200000 ? 40 : 60;

    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(dim);
    for (auto& x : v) x = unif(rng);
    {
        double nrm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        for (auto& x : v) x /= nrm;
    }

    LanczosOut out;
    std::vector<double> w(dim);
    long total_iters = 0;
    double theta = 0.0;
    for (int cycle = 0; cycle < 200; ++cycle) {
        std::vector<std::vector<double>> basis_vecs;
        std::vector<double> alpha, beta;
        basis_vecs.push_back(v);
        for (int j = 0; j < m_max; ++j) {
            sector_matvec(basis, bonds, diag, basis_vecs[j], w);
            double a = std::inner_product(w.begin(), w.end(), basis_vecs[j].begin(), 0.0);
            alpha.push_back(a);
            // full reorthogonalization, twice for stability
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& b : basis_vecs) {
                    const double c = std::inner_product(w.begin(), w.end(), b.begin(), 0.0);
                    if (c != 0.0)
                        for (std::size_t i = 0; i < dim; ++i) w[i] -= c * b[i];
                }
            }
            const double bnorm =
                std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
            ++total_iters;
            if (bnorm < 1e-13 || total_iters >= max_iters) break;
            beta.push_back(bnorm);
            std::vector<double> next(dim);
            for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] / bnorm;
            basis_vecs.push_back(std::move(next));
            if (static_cast<int>(basis_vecs.size()) > m_max) break;
        }
        const int m = static_cast<int>(alpha.size());
        std::vector<double> tri(static_cast<std::size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i) {
            tri[static_cast<std::size_t>(i) * m + i] = alpha[i];
            if (i + 1 < m && i < static_cast<int>(beta.size())) {
                tri[static_cast<std::size_t>(i) * m + i + 1] = beta[i];
                tri[static_cast<std::size_t>(i + 1) * m + i] = beta[i];
            }
        }
        const auto eg = eigh(tri, m);
        theta = eg.values[0];
        std::vector<double> ritz(dim, 0.0);
        for (int j = 0; j < m && j < static_cast<int>(basis_vecs.size()); ++j) {
            const double c = eg.vectors[static_cast<std::size_t>(0) * m + j];
            for (std::size_t i = 0; i < dim; ++i) ritz[i] += c * basis_vecs[j][i];
        }
        double nrm = std::sqrt(std::inner_product(ritz.begin(), ritz.end(), ritz.begin(), 0.0));
        for (auto& x : ritz) x /= nrm;
        sector_matvec(basis, bonds, diag, ritz, w);
        double resid = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double r = w[i] - theta * ritz[i];
            resid += r * r;
        }
        resid = std::sqrt(resid);
        v = std::move(ritz);
        out.e0 = theta;
        out.iterations = static_cast<int>(total_iters);
        out.residual = resid;
        if (resid < tol * std::max(1.0, std::abs(theta))) {
            out.converged = true;
            break;
        }
        if (total_iters >= max_iters) break;
    }
    out.vec = std::move(v);
    return out;
}

} // namespace

Spectrum ground_state_ed(const SpinModel& model) {
    model.validate();
    if (model.L > 24) throw CapacityError("ground_state_ed: L above 24 not supported");
    const int n_down = (model.L % 2 == 0) ? model.L / 2 : (model.L - 1) / 2;
    const auto basis = make_sector_basis(model.L, n_down);
    const auto bonds = model_bonds(model);
    const std::size_t dim = basis.states.size();

    std::vector<double> gs_sector;
    double e0 = 0.0;
    int iterations = 0;
    double residual = 0.0;
    if (dim <= 500) {
        const auto diag = sector_diagonal(basis, bonds);
        std::vector<double> hdense(dim * dim, 0.0);
        std::vector<double> unit(dim, 0.0), col(dim, 0.0);
        for (std::size_t c = 0; c < dim; ++c) {
            std::fill(unit.begin(), unit.end(), 0.0);
            unit[c] = 1.0;
            sector_matvec(basis, bonds, diag, unit, col);
            for (std::size_t r = 0; r < dim; ++r) hdense[r * dim + c] = col[r];
        }
        const auto eg = eigh(hdense, static_cast<int>(dim));
        e0 = eg.values[0];
        gs_sector.assign(eg.vectors.begin(), eg.vectors.begin() + static_cast<long>(dim));
        iterations = 1;
        const auto diag2 = sector_diagonal(basis, bonds);
        std::vector<double> w(dim);
        sector_matvec(basis, bonds, diag2, gs_sector, w);
        for (std::size_t i = 0; i < dim; ++i) {
            const double r = w[i] - e0 * gs_sector[i];
            residual += r * r;
        }
        residual = std::sqrt(residual);
    } else {
        const long max_iters = 10 * static_cast<long>(dim);
        auto lz = lanczos_lowest(basis, bonds, 1e-10, max_iters);
        if (!lz.converged)
            throw NumericError("ground_state_ed: Lanczos failed to converge within budget");
        e0 = lz.e0;
        gs_sector = std::move(lz.vec);
        iterations = lz.iterations;
        residual = lz.residual;
    }

    // phase fix: dominant amplitude (lowest index on ties) made positive real
    std::size_t dominant = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < dim; ++i) {
        if (std::abs(gs_sector[i]) > best + 1e-12) {
            best = std::abs(gs_sector[i]);
            dominant = i;
        }
    }
    if (gs_sector[dominant] < 0.0)
        for (auto& x : gs_sector) x = -x;

    Spectrum spec;
    spec.ground_energy = e0;
    spec.sector_twice_sz = model.L - 2 * n_down;
    spec.iterations = iterations;
    spec.residual = residual;
    spec.ground_state = StateVector(model.L);
    spec.ground_state.amp.assign(spec.ground_state.dim(), cplx{0.0, 0.0});
    for (std::size_t a = 0; a < dim; ++a) spec.ground_state.amp[basis.states[a]] = gs_sector[a];
    return spec;
}

double bethe_gs_energy(int l_plus_1, double J) {
    if (l_plus_1 < 1) throw ConfigError("bethe_gs_energy: chain length must be >= 1");
    return J * l_plus_1 * (0.25 - std::log(2.0));
}

double analytic_dispersion(ModelKind kind, double q, double J) {
    switch (kind) {
    case ModelKind::Heisenberg:
        return J * (M_PI / 2.0) * std::cos(q);
    case ModelKind::HaldaneShastry: {
        const double d = q - M_PI / 2.0;
        return 0.5 * J * d * d;
    }
    case ModelKind::XY:
        throw ConfigError("analytic_dispersion: no spinon reference curve for the XY model");
    }
    throw ConfigError("analytic_dispersion: bad kind");
}

std::vector<PauliSum> commuting_groups(const PauliSum& h) {
    PauliSum canon = h;
    canon.canonicalize();
    if (!canon.is_hermitian()) throw ConfigError("commuting_groups: operator must be Hermitian");
    const int nt = static_cast<int>(canon.terms.size());
    std::vector<std::vector<int>> conflicts(nt);
    for (int i = 0; i < nt; ++i)
        for (int j = i + 1; j < nt; ++j)
            if (!qubitwise_commute(canon.terms[i].ops, canon.terms[j].ops)) {
                conflicts[i].push_back(j);
                conflicts[j].push_back(i);
            }
    std::vector<int> order(nt);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (conflicts[a].size() != conflicts[b].size())
            return conflicts[a].size() > conflicts[b].size();
        return a < b;
    });
    std::vector<int> color(nt, -1);
    int n_colors = 0;
    for (int v : order) {
        std::vector<char> used(static_cast<std::size_t>(n_colors) + 1, 0);
        for (int u : conflicts[v])
            if (color[u] >= 0) used[color[u]] = 1;
        int c = 0;
        while (c < n_colors && used[c]) ++c;
        color[v] = c;
        n_colors = std::max(n_colors, c + 1);
    }
    std::vector<PauliSum> groups(n_colors, PauliSum(h.n_qubits));
    for (int i = 0; i < nt; ++i) groups[color[i]].terms.push_back(canon.terms[i]);
    return groups;
}

std::string hamiltonian_to_json(const PauliSum& h) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"n_qubits\":" << h.n_qubits << ",\"terms\":[";
    for (std::size_t i = 0; i < h.terms.size(); ++i) {
        if (i) os << ",";
        os << "{\"coeff\":[" << h.terms[i].coeff.real() << "," << h.terms[i].coeff.imag()
           << "],\"pauli\":\"" << h.terms[i].ops << "\"}";
    }
    os << "]}";
    return os.str();
}

} // namespace spinonsim
