#pragma once

#include <functional>
#include <vector>

namespace spinonsim {

// Dense symmetric matrix in row-major order.
struct SymmetricEigen {
    std::vector<double> values;  // ascending
    std::vector<double> vectors; // row-major, row k = eigenvector of values[k]
};

// Cyclic Jacobi; fine for the dimensions used here (<= a few thousand).
SymmetricEigen eigh(const std::vector<double>& a, int n);

// Least-squares fit y ~ sum_k c_k x^k of degree `degree`, returns c_0..c_degree.
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree);

struct MinimizeOptions {
    double tol = 1e-8;     // gradient inf-norm target
    int max_evals = 10000; // objective evaluation budget
    double fd_step = 1e-6; // central-difference step when no gradient is given
};

struct MinimizeResult {
    std::vector<double> x;
    double fun = 0.0;
    int n_evals = 0;
    bool converged = false;
};

using ObjectiveFn = std::function<double(const std::vector<double>&)>;
using GradientFn = std::function<std::vector<double>(const std::vector<double>&)>;
using MinimizerFn = std::function<MinimizeResult(const ObjectiveFn&, const GradientFn&,
                                                 const std::vector<double>&, const MinimizeOptions&)>;

// Quasi-Newton (BFGS) with backtracking line search. Falls back to
// central-difference gradients when `grad` is empty.
MinimizeResult bfgs_minimize(const ObjectiveFn& obj, const GradientFn& grad,
                             const std::vector<double>& x0, const MinimizeOptions& opts);

} // namespace spinonsim
