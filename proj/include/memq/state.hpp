#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memq/linalg.hpp"

namespace memq {

// Qubit 0 is the most significant tensor factor: the basis index of
// |q0 q1 ... q_{n-1}> is sum_i q_i * 2^(n-1-i). A two-qubit register
// holding current qubit C = qubit 0 and resistance qubit R = qubit 1
// therefore orders its basis |00>, |01>, |10>, |11>.
//
// States hold either a statevector or a density matrix and switch to the
// density representation when a channel makes them mixed. Registers are
// capped at 10 qubits; everything is dense.
class QuantumState {
public:
    static constexpr int kMaxQubits = 10;
    static constexpr double kValidationTol = 1e-10;

    static QuantumState pure(int qubits, std::vector<cplx> amplitudes);
    static QuantumState basis(int qubits, std::uint64_t index);
    static QuantumState plus(int qubits);
    static QuantumState mixed(int qubits, CMatrix rho);

    int qubits() const { return qubits_; }
    bool is_pure() const { return pure_; }
    std::uint64_t dim() const { return std::uint64_t{1} << qubits_; }

    // Statevector access; only valid for pure states.
    const std::vector<cplx>& amplitudes() const;

    // Density matrix; materialised from the statevector for pure states.
    CMatrix density() const;

    // Diagonal of the density matrix in the computational basis.
    std::vector<double> probabilities() const;

    // Applies a unitary on the given distinct target qubits. targets[0]
    // addresses the most significant bit of the gate's own index space.
    void apply_gate(const CMatrix& u, const std::vector<int>& targets);

    // Applies a Kraus channel {K_i} on the target qubits. The state becomes
    // mixed; completeness sum K^dag K = 1 is required. The result is
    // re-symmetrised to suppress Hermiticity drift.
    void apply_kraus(const std::vector<CMatrix>& ops, const std::vector<int>& targets);

    // Reduced state on `keep` (result qubit i is old qubit keep[i]).
    QuantumState partial_trace(const std::vector<int>& keep) const;

    // Expectation of a Pauli string such as "ZI" (one letter per qubit).
    double expect_pauli(const std::string& paulis) const;

    // <this|other>; both states must be pure and of equal size.
    cplx overlap(const QuantumState& other) const;

    // Reorders qubits; new_position[q] is where old qubit q ends up.
    QuantumState permuted(const std::vector<int>& new_position) const;

    static QuantumState tensor(const QuantumState& a, const QuantumState& b);

    double norm_error() const;

private:
    QuantumState() = default;

    void ensure_mixed();

    int qubits_ = 0;
    bool pure_ = true;
    std::vector<cplx> amp_;
    CMatrix rho_;
};

}  // namespace memq
