#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spinonsim/pauli.hpp"

namespace spinonsim {

// Dense statevector engine. Hard cap keeps allocations sane.
inline constexpr int kMaxQubits = 25;

// Qubit-ordering convention, fixed project-wide: qubit 0 is chain site 0 and
// occupies the MOST SIGNIFICANT bit of the basis index. Bit value 0 is spin up,
// 1 is spin down. All modules inherit this through site_mask().
inline std::uint64_t site_mask(int n_qubits, int site) {
    return std::uint64_t{1} << (n_qubits - 1 - site);
}

enum class GateKind {
    RY,         // exp(-i theta/2 Y)
    RZZ,        // exp(-i theta/2 Z.Z)
    RXXplusYY,  // exp(-i theta/2 (X.X + Y.Y))
    H,
    Sdg,        // diag(1, -i)
    S,          // diag(1, i)
    X,
    CNOT,
    SWAP,
    PhasedSWAP, // e^{i q} * SWAP, the modified swap with a global prefactor
    Fredkin,    // controlled SWAP
    Givens,     // two-mode rotation: {|01>,|10>} block [[c, -e^{i phi} s], [e^{-i phi} s, c]]
    FSWAP,      // SWAP with a -1 phase on |11>
    Phase,      // diag(1, e^{i phi})
};

struct Gate {
    GateKind kind;
    std::vector<int> targets;
    std::vector<int> controls;
    double theta = 0.0;
    double phi = 0.0;

    static Gate ry(int q, double theta);
    static Gate rzz(int a, int b, double theta);
    static Gate rxx_plus_yy(int a, int b, double theta);
    static Gate h(int q);
    static Gate sdg(int q);
    static Gate s(int q);
    static Gate x(int q);
    static Gate cnot(int control, int target);
    static Gate swap(int a, int b);
    static Gate phased_swap(int a, int b, double q);
    static Gate fredkin(int control, int a, int b);
    static Gate givens(int a, int b, double theta, double phi = 0.0);
    static Gate fswap(int a, int b);
    static Gate phase(int q, double phi);

    // Adds an extra control wire to any gate.
    static Gate controlled(Gate g, int control);

    bool is_controlled() const { return !controls.empty(); }
    Gate adjoint() const;
};

struct Circuit {
    int n_system = 0;
    int n_ancilla = 0;
    std::vector<Gate> gates;

    int n_total() const { return n_system + n_ancilla; }
    void add(Gate g); // validates indices against the register
    std::size_t count_controlled() const;
    std::size_t count_kind(GateKind k) const;
};

Circuit inverse(const Circuit& c);

struct StateVector {
    int n = 0;
    std::vector<cplx> amp;
    bool normalized = true; // advisory; the momentum ansatz is built unnormalized
    bool valid = true;      // cleared when a zero-probability branch was selected

    StateVector() = default;
    explicit StateVector(int n_qubits);
    static StateVector basis_state(int n_qubits, std::uint64_t index);

    std::size_t dim() const { return amp.size(); }
    double norm2() const;   // sum of |a_i|^2
    void renormalize();
    void check_normalized(double tol = 1e-10) const;
};

struct ShotEstimate {
    long n_shots = 0;
    std::map<std::string, long> counts; // bitstring (qubit-list order) -> count
    std::uint64_t seed = 0;
};

void apply_gate(StateVector& state, const Gate& g);
void apply_circuit(StateVector& state, const Circuit& c);

// U_m ladder: adjacent SWAPs moving the spin content of `from` to `to`
// (from <= to), times the accumulated global phase e^{i (to-from) q}.
void apply_swap_ladder(StateVector& state, int from, int to, double q);

cplx inner_product(const StateVector& a, const StateVector& b);

// Pauli strings compiled to bit masks for fast repeated evaluation.
struct CompiledPauliSum {
    int n_qubits = 0;
    struct Term {
        std::uint64_t x_mask = 0;    // X or Y positions (flip)
        std::uint64_t sign_mask = 0; // Y or Z positions (sign of input bit)
        int n_y = 0;
        cplx coeff;
    };
    std::vector<Term> terms;
};

CompiledPauliSum compile(const PauliSum& h);

// <state|h|state> for Hermitian h; throws if h is not Hermitian.
// Requires a normalized state; raw variants skip both checks.
double expectation(const StateVector& state, const PauliSum& h);
double expectation(const StateVector& state, const CompiledPauliSum& h);
cplx raw_expectation(const StateVector& state, const CompiledPauliSum& h);
cplx raw_matrix_element(const StateVector& a, const CompiledPauliSum& h, const StateVector& b);

StateVector pauli_apply(const StateVector& state, const CompiledPauliSum& h);

// Marginal Born probabilities of the listed qubits; index packs qubits[0] as
// the most significant bit, matching the bitstring order used everywhere.
std::vector<double> marginal_probs(const StateVector& state, const std::vector<int>& qubits);

ShotEstimate sample(const StateVector& state, const std::vector<int>& qubits, long n_shots,
                    std::uint64_t seed);

// Raw packed-index counts backing sample(); identical draws for the same seed.
std::map<std::uint64_t, long> sample_counts(const StateVector& state, const std::vector<int>& qubits,
                                            long n_shots, std::uint64_t seed);

// Conditional state on measuring `outcome` (chars '0'/'1', aligned with the
// qubit list) together with its Born probability. The register is unchanged in
// size; on probability 0 the state comes back flagged invalid unless strict.
std::pair<StateVector, double> post_select(const StateVector& state, const std::vector<int>& qubits,
                                           const std::string& outcome, bool strict = false);

// Post-select and drop the measured qubits. The returned state keeps the
// relative order of the remaining sites. `normalize=false` keeps the raw
// branch amplitudes (norm^2 equals the branch probability).
std::pair<StateVector, double> collapse_and_remove(const StateVector& state,
                                                   const std::vector<int>& qubits,
                                                   const std::string& outcome,
                                                   bool normalize = true);

// Tensor product; qubits of `high` become the leading sites.
StateVector kron(const StateVector& high, const StateVector& low);

std::string to_bitstring(std::uint64_t value, int n_bits);

} // namespace spinonsim
