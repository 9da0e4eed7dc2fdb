#pragma once

#include <cstdint>
#include <vector>

#include "spinonsim/models.hpp"
#include "spinonsim/statevector.hpp"

namespace spinonsim {

enum class E0Source { ED, Bethe };
enum class Method { Exact, Lcu, Hadamard };

std::string to_string(E0Source s);
std::string to_string(Method m);

// q_n = 2 pi n / (L+1), n = 0..L.
struct MomentumGrid {
    int L = 0;
    explicit MomentumGrid(int chain_length) : L(chain_length) {}
    int size() const { return L + 1; }
    double point(int n) const;
    std::vector<double> points() const;
    // Parity symmetry N(-q) = N(q) folds the grid onto [0, pi].
    static double fold(double q);
};

struct SpinonResult {
    int L = 0;
    double q = 0.0;
    double norm = 0.0;
    double norm_sigma = 0.0;
    double h_expect = 0.0;
    double h_sigma = 0.0;
    bool h_defined = false;
    double epsilon = 0.0;
    double epsilon_sigma = 0.0;
    bool epsilon_defined = false; // false in the vanishing-norm region
    E0Source e0_source = E0Source::ED;
    Method method = Method::Exact;
    long shots = 0;
    std::uint64_t seed = 0;
    bool sampled_zero = false; // no all-zero counts were seen in sampled mode
};

// Below this the ansatz is unphysical and Eq.-of-dispersion division is refused.
inline double norm_threshold(int L) { return 1e-6 * (L + 1); }

// |Psi(m)>: ground state of L sites with an up spin inserted at site m.
StateVector extend_state(const StateVector& gs, int m);

// (1/sqrt(L+1)) sum_m e^{iqm} |Psi(m)>, flagged unnormalized.
StateVector spinon_state(const StateVector& gs, double q);

double norm_exact(const StateVector& gs, double q);

// Precomputed L+1-site Hamiltonian and reference ground energy for sweeps.
struct DispersionContext {
    SpinModel model;      // the L-site model the ground state belongs to
    CompiledPauliSum h_ext; // Hamiltonian on L+1 sites
    double e0 = 0.0;
    E0Source e0_source = E0Source::ED;
};

DispersionContext make_dispersion_context(const SpinModel& model, E0Source source);

// Default source: ED while the extended chain is tractable, Bethe beyond
// (Heisenberg only).
E0Source default_e0_source(const SpinModel& model);

SpinonResult dispersion_exact(const StateVector& gs, const DispersionContext& ctx, double q);

// Overlap table <Psi(m)|Psi(n)> computed directly from statevectors.
std::vector<std::vector<cplx>> overlap_table_exact(const StateVector& gs);

} // namespace spinonsim
