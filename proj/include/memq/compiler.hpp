#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memq/linalg.hpp"
#include "memq/state.hpp"

namespace memq {

// One gate application on the register machine: Ry(phi) on the current
// wire followed by the memristive gate on (current, resistance).
struct ProgramConnection {
    int current = 0;
    int resistance = 0;
    double phi = 0.0;
    double theta = 0.0;
};

// A compiled register-machine routine. Current wires start in |0> and
// resistance wires in |+> unless the wire is listed as a logical input.
// Wires not listed as outputs end in the declared final ('0' or '+'),
// disentangled from the logical data; that is part of what verification
// checks.
struct ConnectionProgram {
    std::string name;
    int n_current = 0;
    int n_resistance = 0;
    std::vector<ProgramConnection> connections;

    std::vector<int> input_current;
    std::vector<int> input_resistance;
    std::vector<int> output_current;
    std::vector<int> output_resistance;

    // Final state of each non-output wire: '0', '+', or 'L' for wires
    // carrying logical output.
    std::vector<char> final_current;
    std::vector<char> final_resistance;

    bool visit_once = false;

    // Action on the logical qubits, up to global phase.
    CMatrix target;
};

// Moves a state from the current wire into a fresh resistance wire.
ConnectionProgram compile_write();

// Moves a state from the resistance wire onto a fresh current wire,
// leaving the resistance wire in |0>.
ConnectionProgram compile_read();

// Rz(theta) Ry(phi) on a logical qubit stored in the resistance register.
// The plain form revisits one (current, resistance) pair; the visit-once
// form spends three current and two ancilla resistance wires so that no
// pair interacts twice.
ConnectionProgram compile_single_qubit(double phi, double theta, bool visit_once);

// Controlled-NOT between two stored qubits; the result lands on the
// second input wire (control) and a fresh resistance wire (target).
ConnectionProgram compile_cnot();

struct ResourceCount {
    int currents = 0;
    int resistances = 0;
    int connections = 0;
};

ResourceCount resource_count(const ConnectionProgram& program);

// Runs the program on the full register. The input state spans the
// declared input wires, current wires first, in listed order.
QuantumState simulate_program(const ConnectionProgram& program, const QuantumState& input);

// Reduced state on the output wires, current wires first.
QuantumState logical_output(const ConnectionProgram& program, const QuantumState& full);

// Simulates basis inputs plus seeded random pure inputs and compares the
// full register against target (x) declared ancilla finals, up to global
// phase.
struct VerifyReport {
    bool verified = false;
    double max_error = 0.0;
    int cases = 0;
};

VerifyReport verify_program(const ConnectionProgram& program, int random_cases = 20,
                            std::uint64_t seed = 1);

std::string program_to_json(const ConnectionProgram& program);

}  // namespace memq
