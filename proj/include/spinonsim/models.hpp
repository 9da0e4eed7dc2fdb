#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinonsim/pauli.hpp"
#include "spinonsim/statevector.hpp"

namespace spinonsim {

enum class ModelKind { Heisenberg, HaldaneShastry, XY };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

struct SpinModel {
    ModelKind kind = ModelKind::Heisenberg;
    double J = 1.0;
    double delta = 1.0; // Z anisotropy, Heisenberg only; accepted but untested off 1
    int L = 2;
    bool periodic = true;

    void validate() const;
    SpinModel with_sites(int sites) const;
};

// Exchange bonds with independent transverse / longitudinal couplings.
// H = sum_b jxy*(Sx Sx + Sy Sy) + jz * Sz Sz on (i, j).
struct Bond {
    int i = 0, j = 0;
    double jxy = 0.0, jz = 0.0;
};

// Each unordered pair once; the L=2 ring contributes the (0,1) bond twice,
// which the Pauli canonicalization collapses to a doubled coefficient.
std::vector<Bond> model_bonds(const SpinModel& model);

PauliSum build_hamiltonian(const SpinModel& model);

// sum_i Sz_i as a diagonal observable, and the total-spin operator S^2.
PauliSum total_sz_operator(int L);
PauliSum total_spin_squared(int L);

struct Spectrum {
    double ground_energy = 0.0;
    StateVector ground_state; // full 2^L register
    int sector_twice_sz = 0;  // 2*Sz of the searched sector
    int iterations = 0;
    double residual = 0.0;
};

// Classical oracle: lowest eigenpair in the relevant Sz sector (Sz=0 for even
// L, Sz=+1/2 for odd L). Iterative for large sectors, dense below ~500 states.
Spectrum ground_state_ed(const SpinModel& model);

// Thermodynamic-limit Bethe energy J*(L+1)*(1/4 - ln 2) for the Heisenberg chain.
double bethe_gs_energy(int l_plus_1, double J);

// Reference spinon dispersions: Heisenberg J*pi/2*cos(q), HS J/2*(q - pi/2)^2.
double analytic_dispersion(ModelKind kind, double q, double J);

// Qubit-wise commuting partition, greedy largest-degree-first coloring.
std::vector<PauliSum> commuting_groups(const PauliSum& h);

// --- Sz-sector machinery (shared with tests) ---

struct SectorBasis {
    int L = 0;
    int n_down = 0;
    std::vector<std::uint32_t> states;   // bit patterns with popcount == n_down
    std::vector<std::int32_t> index_of;  // 2^L entries, -1 when outside sector
};

SectorBasis make_sector_basis(int L, int n_down);

// y = H x within the sector.
void sector_matvec(const SectorBasis& basis, const std::vector<Bond>& bonds,
                   const std::vector<double>& diag, const std::vector<double>& x,
                   std::vector<double>& y);

std::vector<double> sector_diagonal(const SectorBasis& basis, const std::vector<Bond>& bonds);

// JSON export of a Hamiltonian term list, for debugging.
std::string hamiltonian_to_json(const PauliSum& h);

} // namespace spinonsim
