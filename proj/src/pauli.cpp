#include "spinonsim/pauli.hpp"

#include <algorithm>
#include <cmath>

#include "spinonsim/errors.hpp"

namespace spinonsim {

bool is_pauli_char(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

std::pair<cplx, char> pauli_mul(char a, char b) {
    if (a == 'I') return {1.0, b};
    if (b == 'I') return {1.0, a};
    if (a == b) return {1.0, 'I'};
    const cplx i(0.0, 1.0);
    // cyclic: XY=iZ, YZ=iX, ZX=iY; reversed order picks up a sign
    auto cyc = [](char x, char y) {
        return (x == 'X' && y == 'Y') || (x == 'Y' && y == 'Z') || (x == 'Z' && y == 'X');
    };
    char rest = 'I';
    for (char c : {'X', 'Y', 'Z'})
        if (c != a && c != b) rest = c;
    return cyc(a, b) ? std::make_pair(i, rest) : std::make_pair(-i, rest);
}

void PauliSum::add(cplx coeff, std::string ops) {
    if (static_cast<int>(ops.size()) != n_qubits)
        throw ConfigError("PauliSum::add: string length does not match qubit count");
    for (char c : ops)
        if (!is_pauli_char(c)) throw ConfigError("PauliSum::add: invalid Pauli character");
    terms.push_back({coeff, std::move(ops)});
}

PauliSum& PauliSum::canonicalize(double drop_tol) {
    std::sort(terms.begin(), terms.end(),
              [](const PauliTerm& a, const PauliTerm& b) { return a.ops < b.ops; });
    std::vector<PauliTerm> merged;
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().ops == t.ops)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [&](const PauliTerm& t) { return std::abs(t.coeff) < drop_tol; }),
                 merged.end());
    terms = std::move(merged);
    return *this;
}

bool PauliSum::is_hermitian(double tol) const {
    PauliSum copy = *this;
    copy.canonicalize();
    for (const auto& t : copy.terms)
        if (std::abs(t.coeff.imag()) > tol) return false;
    return true;
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
    if (a.n_qubits != b.n_qubits) throw ConfigError("multiply: qubit count mismatch");
    PauliSum out(a.n_qubits);
    out.terms.reserve(a.terms.size() * b.terms.size());
    for (const auto& ta : a.terms) {
        for (const auto& tb : b.terms) {
            cplx coeff = ta.coeff * tb.coeff;
            std::string ops(a.n_qubits, 'I');
            for (int q = 0; q < a.n_qubits; ++q) {
                auto [ph, c] = pauli_mul(ta.ops[q], tb.ops[q]);
                coeff *= ph;
                ops[q] = c;
            }
            out.terms.push_back({coeff, std::move(ops)});
        }
    }
    out.canonicalize();
    return out;
}

bool qubitwise_commute(const std::string& a, const std::string& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t q = 0; q < n; ++q)
        if (a[q] != 'I' && b[q] != 'I' && a[q] != b[q]) return false;
    return true;
}

std::string identity_string(int n) { return std::string(static_cast<std::size_t>(n), 'I'); }

} // namespace spinonsim
