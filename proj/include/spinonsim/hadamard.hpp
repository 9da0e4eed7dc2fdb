#pragma once

#include <cstdint>
#include <vector>

#include "spinonsim/models.hpp"
#include "spinonsim/spinon.hpp"
#include "spinonsim/statevector.hpp"

namespace spinonsim {

enum class Part { Re, Im };

struct HadamardMode {
    bool sampled = false;
    long n_shots = 0;
    std::uint64_t seed = 0;
    int jobs = 1; // (m, n) grid parallelism when assembling matrices
};

struct MeasuredValue {
    cplx value{0.0, 0.0};
    double sigma_re = 0.0;
    double sigma_im = 0.0;
    long shots = 0;
};

// <Psi(m)|Psi(n)> and t_mn = <Psi(m)|H_{L+1}|Psi(n)> with per-entry shot
// metadata; the lower triangle mirrors the upper by conjugation.
struct OverlapMatrix {
    int L = 0;
    std::vector<std::vector<MeasuredValue>> s;
    std::vector<std::vector<MeasuredValue>> t;
    bool has_t = false;
};

// Precompiled extended Hamiltonian and its measurement groups.
struct HadamardContext {
    SpinModel model; // L-site model
    CompiledPauliSum h_ext;
    std::vector<PauliSum> groups;
    int n_groups() const { return static_cast<int>(groups.size()); }
};

HadamardContext make_hadamard_context(const SpinModel& model);

// One Hadamard-test circuit: ancilla difference probability p0 - p1, equal to
// Re (or Im, with an S^dagger insertion) of <Psi(m)|Psi(n)>, m < n.
MeasuredValue hadamard_overlap(const StateVector& gs, int m, int n, Part part,
                               const HadamardMode& mode);

// Transition amplitude t_mn from the collapsed +/- branches; the diagonal is an
// ordinary expectation without the ancilla.
MeasuredValue transition_amplitude(const StateVector& gs, const HadamardContext& ctx, int m, int n,
                                   const HadamardMode& mode);

OverlapMatrix measure_matrices(const StateVector& gs, const HadamardContext& ctx,
                               const HadamardMode& mode, bool with_transitions);

MeasuredValue reconstruct_norm(const OverlapMatrix& m, double q);

SpinonResult reconstruct_energy(const OverlapMatrix& m, double q, const DispersionContext& ctx);

// Pauli decomposition of the SWAP ladder moving site m to site n, over the
// n-m+1 qubits it touches. Term count is exactly 4^(n-m); capped at n-m <= 8.
PauliSum swap_string_pauli(int m, int n);

struct CircuitCounts {
    long norm_circuits = 0;   // L(L+1)/2
    long energy_circuits = 0; // N_g (L+1)(L+2)/2
    long fredkin_end = 0;     // per LCU circuit, end insertion
    long fredkin_middle = 0;  // per LCU circuit, middle insertion
};

CircuitCounts circuit_counts(int L, int n_groups);

} // namespace spinonsim
