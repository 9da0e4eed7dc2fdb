#include "spinonsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spinonsim/errors.hpp"

namespace spinonsim {

SymmetricEigen eigh(const std::vector<double>& a_in, int n) {
    if (static_cast<std::size_t>(n) * n != a_in.size()) throw ConfigError("eigh: bad dimensions");
    std::vector<double> a = a_in;
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    auto vt = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-26 * std::max(1.0, static_cast<double>(n))) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double app = at(p, p), aqq = at(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = vt(k, p), vkq = vt(k, q);
                    vt(k, p) = c * vkp - s * vkq;
                    vt(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return at(i, i) < at(j, j); });
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors.resize(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = at(order[k], order[k]);
        for (int i = 0; i < n; ++i)
            out.vectors[static_cast<std::size_t>(k) * n + i] = vt(i, order[k]);
    }
    return out;
}

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
    if (x.size() != y.size() || x.size() < static_cast<std::size_t>(degree + 1))
        throw ConfigError("polyfit: not enough points");
    const int m = degree + 1;
    // normal equations A c = b with A_jk = sum x^(j+k)
    std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0), b(m, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> powers(2 * m - 1);
        powers[0] = 1.0;
        for (int k = 1; k < 2 * m - 1; ++k) powers[k] = powers[k - 1] * x[i];
        for (int j = 0; j < m; ++j) {
            b[j] += powers[j] * y[i];
            for (int k = 0; k < m; ++k) a[static_cast<std::size_t>(j) * m + k] += powers[j + k];
        }
    }
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * m + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * m + col]))
                piv = r;
        for (int k = 0; k < m; ++k)
            std::swap(a[static_cast<std::size_t>(col) * m + k], a[static_cast<std::size_t>(piv) * m + k]);
        std::swap(b[col], b[piv]);
        const double d = a[static_cast<std::size_t>(col) * m + col];
        if (std::abs(d) < 1e-300) throw NumericError("polyfit: singular normal equations");
        for (int r = col + 1; r < m; ++r) {
            const double f = a[static_cast<std::size_t>(r) * m + col] / d;
            for (int k = col; k < m; ++k)
                a[static_cast<std::size_t>(r) * m + k] -= f * a[static_cast<std::size_t>(col) * m + k];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> c(m, 0.0);
    for (int r = m - 1; r >= 0; --r) {
        double acc = b[r];
        for (int k = r + 1; k < m; ++k) acc -= a[static_cast<std::size_t>(r) * m + k] * c[k];
        c[r] = acc / a[static_cast<std::size_t>(r) * m + r];
    }
    return c;
}

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

MinimizeResult bfgs_minimize(const ObjectiveFn& obj, const GradientFn& grad,
                             const std::vector<double>& x0, const MinimizeOptions& opts) {
    const int n = static_cast<int>(x0.size());
    MinimizeResult res;
    res.x = x0;
    if (n == 0) {
        res.fun = obj(x0);
        res.n_evals = 1;
        res.converged = true;
        return res;
    }

    int evals = 0;
    auto f = [&](const std::vector<double>& x) {
        ++evals;
        return obj(x);
    };
    auto g = [&](const std::vector<double>& x) {
        if (grad) return grad(x);
        std::vector<double> out(n);
        std::vector<double> xp = x;
        for (int i = 0; i < n; ++i) {
            const double h = opts.fd_step;
            xp[i] = x[i] + h;
            const double fp = f(xp);
            xp[i] = x[i] - h;
            const double fm = f(xp);
            xp[i] = x[i];
            out[i] = (fp - fm) / (2.0 * h);
        }
        return out;
    };

    std::vector<double> x = x0;
    double fx = f(x);
    std::vector<double> gx = g(x);
    // inverse Hessian approximation, row-major identity
    std::vector<double> hinv(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) hinv[static_cast<std::size_t>(i) * n + i] = 1.0;

    std::vector<double> best_x = x;
    double best_f = fx;
    bool converged = false;
    bool scaled = false;
    int plateau = 0;

    const int max_iters = 2000;
    for (int iter = 0; iter < max_iters && evals < opts.max_evals; ++iter) {
        if (inf_norm(gx) < opts.tol) {
            converged = true;
            break;
        }
        // direction d = -Hinv g
        std::vector<double> d(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc -= hinv[static_cast<std::size_t>(i) * n + j] * gx[j];
            d[i] = acc;
        }
        double dg = 0.0;
        for (int i = 0; i < n; ++i) dg += d[i] * gx[i];
        if (dg >= 0.0) { // not a descent direction; reset
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    hinv[static_cast<std::size_t>(i) * n + j] = (i == j) ? 1.0 : 0.0;
            for (int i = 0; i < n; ++i) d[i] = -gx[i];
            dg = -std::inner_product(gx.begin(), gx.end(), gx.begin(), 0.0);
        }

        // backtracking Armijo line search
        double alpha = 1.0;
        std::vector<double> xn(n);
        double fn = fx;
        bool ok = false;
        for (int ls = 0; ls < 40 && evals < opts.max_evals; ++ls) {
            for (int i = 0; i < n; ++i) xn[i] = x[i] + alpha * d[i];
            fn = f(xn);
            if (fn <= fx + 1e-4 * alpha * dg) {
                ok = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!ok) break;

        std::vector<double> gn = g(xn);
        std::vector<double> s(n), yv(n);
        for (int i = 0; i < n; ++i) {
            s[i] = xn[i] - x[i];
            yv[i] = gn[i] - gx[i];
        }
        const double sy = std::inner_product(s.begin(), s.end(), yv.begin(), 0.0);
        if (sy > 1e-14) {
            if (!scaled) {
                // size the initial inverse Hessian from the first secant pair
                const double yy = std::inner_product(yv.begin(), yv.end(), yv.begin(), 0.0);
                if (yy > 0.0) {
                    const double scale = sy / yy;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            hinv[static_cast<std::size_t>(i) * n + j] = (i == j) ? scale : 0.0;
                }
                scaled = true;
            }
            // BFGS inverse update
            const double rho = 1.0 / sy;
            std::vector<double> hy(n, 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    hy[i] += hinv[static_cast<std::size_t>(i) * n + j] * yv[j];
            const double yhy = std::inner_product(yv.begin(), yv.end(), hy.begin(), 0.0);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    hinv[static_cast<std::size_t>(i) * n + j] +=
                        (1.0 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        const double drop = fx - fn;
        x = xn;
        fx = fn;
        gx = std::move(gn);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
        // objective plateau: repeated decreases below the tolerance scale
        plateau = (drop < opts.tol * std::max(1.0, std::abs(fx))) ? plateau + 1 : 0;
        if (plateau >= 3) {
            converged = true;
            break;
        }
        const double step = inf_norm(s);
        if (step < 1e-12) {
            converged = inf_norm(gx) < 10 * opts.tol;
            break;
        }
    }
    if (fx < best_f) {
        best_f = fx;
        best_x = x;
    }
    if (inf_norm(gx) < opts.tol) converged = true;

    res.x = std::move(best_x);
    res.fun = best_f;
    res.n_evals = evals;
    res.converged = converged;
    return res;
}

} // namespace spinonsim
