#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "spinonsim/spinon.hpp"
#include "spinonsim/statevector.hpp"

namespace spinonsim {

enum class Insertion { End, Middle };

struct LcuCircuitSpec {
    int L = 2;
    double q = 0.0;
    Insertion insertion = Insertion::End;

    int n_system() const { return L + 1; }
    int n_ancilla() const { return L; }
    int n_total() const { return 2 * L + 1; }
    // site the injected up spin starts at
    int origin() const { return insertion == Insertion::End ? 0 : L / 2; }
    void validate() const;
};

// Ancilla preparation V(L): equal superposition of the all-zero state and the
// L one-hot states. 2L-3 controlled operations for L >= 2.
Circuit v_circuit(int L);
StateVector v_state(int L);

// Full protocol on system qubits [0, L] and ancillas [L+1, 2L]: V(L), the
// controlled phased-SWAP ladders realizing U_m = e^{imq} SWAP ladders from the
// origin, then V^dagger(L).
Circuit build_lcu_circuit(const LcuCircuitSpec& spec);

struct LcuMode {
    bool sampled = false;
    long n_shots = 0;
    std::uint64_t seed = 0;
};

struct LcuRun {
    SpinonResult result;
    std::map<std::string, long> histogram; // ancilla bitstrings (sampled mode)
    StateVector post_state;                // conditional system state, normalized
    double p_all_zero = 0.0;               // exact all-zero ancilla probability
};

LcuRun run_lcu(const StateVector& gs, double q, const LcuMode& mode = {},
               Insertion insertion = Insertion::End);

} // namespace spinonsim
