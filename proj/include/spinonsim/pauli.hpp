#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace spinonsim {

using cplx = std::complex<double>;

// Single-qubit Pauli product a*b -> (phase, result), e.g. X*Y = (i, Z).
std::pair<cplx, char> pauli_mul(char a, char b);

bool is_pauli_char(char c);

struct PauliTerm {
    cplx coeff;
    std::string ops; // one of I,X,Y,Z per qubit, ops[q] acts on qubit q
};

/// Weighted sum of Pauli strings on a fixed number of qubits.
struct PauliSum {
    int n_qubits = 0;
    std::vector<PauliTerm> terms;

    PauliSum() = default;
    explicit PauliSum(int n) : n_qubits(n) {}

    void add(cplx coeff, std::string ops);
    std::size_t size() const { return terms.size(); }

    // Sorts terms, merges duplicate strings, drops |coeff| < drop_tol.
    PauliSum& canonicalize(double drop_tol = 1e-14);

    // Pauli strings are self-adjoint, so the sum is Hermitian iff every
    // canonical coefficient is real.
    bool is_hermitian(double tol = 1e-12) const;
};

// Operator product a*b, canonicalized. Term count can grow as |a|*|b|.
PauliSum multiply(const PauliSum& a, const PauliSum& b);

// True if the strings commute qubit by qubit (equal or identity everywhere).
bool qubitwise_commute(const std::string& a, const std::string& b);

std::string identity_string(int n);

} // namespace spinonsim
