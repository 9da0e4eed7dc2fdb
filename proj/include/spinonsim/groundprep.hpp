#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinonsim/linalg.hpp"
#include "spinonsim/models.hpp"
#include "spinonsim/statevector.hpp"

namespace spinonsim {

double fidelity(const StateVector& a, const StateVector& b);

struct PrepResult {
    StateVector state;
    int L = 0;
    double energy = 0.0;
    double infidelity = 0.0;
    double rel_energy_error = 0.0;
    double success_probability = 1.0; // < 1 only for post-selected routes
    std::string route;
    std::vector<double> params;
    std::uint64_t seed = 0;
    bool converged = true;
};

// Product of nearest-neighbor singlets on pairs (0,1), (2,3), ...
StateVector vbc_state(int L);

// Real orthonormal L x (L/2) orbital matrix of the half-filled ring Fermi sea:
// consecutive symmetric momenta (integer or half-integer grid by filling parity).
std::vector<std::vector<double>> fermi_sea_orbitals(int L);

// Compiles a Slater determinant with real orbital columns Q into X gates plus
// adjacent Givens rotations acting on qubits [offset, offset + n_modes).
std::vector<Gate> slater_prep_gates(const std::vector<std::vector<double>>& q_cols, int n_modes,
                                    int offset, int n_total);

// Ground state of H_XY at half filling. Circuit mode builds the Givens network;
// ED mode diagonalizes. `infidelity` reports the circuit-vs-ED mismatch.
PrepResult xy_ground_state(int L, bool as_circuit);

// Layered variational circuit: per layer an even-bond block then an odd-bond
// block, each block RZZ(theta_a) followed by RXXplusYY(theta_b); 4 shared
// parameters per layer.
Circuit hva_circuit(int L, const std::vector<double>& params);

enum class InitScheme { NearIdentity, Supplied };
enum class WarmStart { VBC, XY };

struct VqeConfig {
    int layers = -1; // -1 selects L/2
    InitScheme init = InitScheme::NearIdentity;
    std::vector<double> supplied_params;
    MinimizerFn minimizer; // empty -> BFGS
    int restarts = 10;
    std::uint64_t seed = 0;
    MinimizeOptions opt;
    int jobs = 1;
};

// Energy and analytic gradient of the HVA ansatz via reverse-mode sweeps.
double hva_energy(const StateVector& warm, int L, const std::vector<double>& params,
                  const CompiledPauliSum& h);
double hva_energy_grad(const StateVector& warm, int L, const std::vector<double>& params,
                       const CompiledPauliSum& h, std::vector<double>& grad);

PrepResult vqe_optimize(const SpinModel& model, const VqeConfig& cfg, WarmStart warm_start);

// Half-filled tight-binding Fermi sea on 2L qubits; up modes occupy qubits
// 0..L-1 and down modes L..2L-1.
StateVector fermi_sea_state(int L);

// Zeroes doubly occupied configurations of a block-ordered 2L-qubit fermion
// state; returns the unnormalized projection.
StateVector gutzwiller_project(const StateVector& fermion_state);

struct GutzwillerMode {
    bool sampled = false;
    long n_shots = 0;
    std::uint64_t seed = 0;
};

// Fermi sea + fermionic-swap interleave + CNOTs + all-|1> post-selection on the
// measured register, producing the Haldane-Shastry ground state on L qubits.
PrepResult gutzwiller_ground_state(int L, const GutzwillerMode& mode = {});

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

} // namespace spinonsim
