#include "memq/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "memq/gates.hpp"

namespace memq {

namespace {

QuantumState wire_state(char c) {
    if (c == '0') return QuantumState::basis(1, 0);
    if (c == '+') return QuantumState::plus(1);
    throw std::logic_error("wire_state: unknown initial");
}

int total_qubits(const ConnectionProgram& p) { return p.n_current + p.n_resistance; }

int current_qubit(const ConnectionProgram&, int wire) { return wire; }

int resistance_qubit(const ConnectionProgram& p, int wire) { return p.n_current + wire; }

void check_program(const ConnectionProgram& p) {
    if (p.n_current < 1 || p.n_resistance < 1) {
        throw std::invalid_argument("program: needs at least one wire of each kind");
    }
    if (total_qubits(p) > QuantumState::kMaxQubits) {
        throw std::invalid_argument("program: too many wires");
    }
    for (const ProgramConnection& c : p.connections) {
        if (c.current < 0 || c.current >= p.n_current || c.resistance < 0 ||
            c.resistance >= p.n_resistance) {
            throw std::invalid_argument("program: connection wire out of range");
        }
    }
    if (p.visit_once) {
        std::set<std::pair<int, int>> seen;
        for (const ProgramConnection& c : p.connections) {
            if (!seen.insert({c.current, c.resistance}).second) {
                throw std::invalid_argument("program: visit-once program revisits a pair");
            }
        }
    }
    if (p.final_current.size() != static_cast<size_t>(p.n_current) ||
        p.final_resistance.size() != static_cast<size_t>(p.n_resistance)) {
        throw std::invalid_argument("program: finals must cover every wire");
    }
}

// Places `factors` (a k-qubit logical block followed by single ancilla
// qubits) onto the listed register positions.
QuantumState place(const QuantumState& logical, const std::vector<int>& logical_positions,
                   const std::vector<std::pair<int, QuantumState>>& ancillas, int total) {
    QuantumState state = logical;
    std::vector<int> new_position(static_cast<size_t>(total));
    int k = logical.qubits();
    for (int j = 0; j < k; ++j) new_position[static_cast<size_t>(j)] = logical_positions[static_cast<size_t>(j)];
    int q = k;
    for (const auto& [pos, anc] : ancillas) {
        state = QuantumState::tensor(state, anc);
        new_position[static_cast<size_t>(q)] = pos;
        ++q;
    }
    if (q != total) throw std::logic_error("place: wire count mismatch");
    return state.permuted(new_position);
}

std::vector<int> input_positions(const ConnectionProgram& p) {
    std::vector<int> pos;
    for (int w : p.input_current) pos.push_back(current_qubit(p, w));
    for (int w : p.input_resistance) pos.push_back(resistance_qubit(p, w));
    return pos;
}

std::vector<int> output_positions(const ConnectionProgram& p) {
    std::vector<int> pos;
    for (int w : p.output_current) pos.push_back(current_qubit(p, w));
    for (int w : p.output_resistance) pos.push_back(resistance_qubit(p, w));
    return pos;
}

// Ancilla wires and their states for the initial register (non-input
// wires) or the expected final register (non-output wires).
std::vector<std::pair<int, QuantumState>> ancilla_states(const ConnectionProgram& p,
                                                         bool initial) {
    std::vector<std::pair<int, QuantumState>> anc;
    const std::vector<int>& skip_c = initial ? p.input_current : p.output_current;
    const std::vector<int>& skip_r = initial ? p.input_resistance : p.output_resistance;
    for (int w = 0; w < p.n_current; ++w) {
        if (std::find(skip_c.begin(), skip_c.end(), w) != skip_c.end()) continue;
        char c = initial ? '0' : p.final_current[static_cast<size_t>(w)];
        anc.push_back({current_qubit(p, w), wire_state(c)});
    }
    for (int w = 0; w < p.n_resistance; ++w) {
        if (std::find(skip_r.begin(), skip_r.end(), w) != skip_r.end()) continue;
        char c = initial ? '+' : p.final_resistance[static_cast<size_t>(w)];
        anc.push_back({resistance_qubit(p, w), wire_state(c)});
    }
    return anc;
}

double max_abs_diff_up_to_phase(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    size_t ref = 0;
    for (size_t i = 0; i < b.size(); ++i) {
        if (std::abs(b[i]) > std::abs(b[ref])) ref = i;
    }
    cplx phase(1.0, 0.0);
    if (std::abs(b[ref]) > 1e-14 && std::abs(a[ref]) > 1e-14) {
        phase = (a[ref] / b[ref]) / std::abs(a[ref] / b[ref]);
    }
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - phase * b[i]));
    }
    return worst;
}

QuantumState random_pure(int qubits, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> amp(std::size_t{1} << qubits);
    double norm2 = 0.0;
    for (cplx& a : amp) {
        a = cplx(g(rng), g(rng));
        norm2 += std::norm(a);
    }
    double scale = 1.0 / std::sqrt(norm2);
    for (cplx& a : amp) a *= scale;
    return QuantumState::pure(qubits, std::move(amp));
}

}  // namespace

ConnectionProgram compile_write() {
    ConnectionProgram p;
    p.name = "write";
    p.n_current = 1;
    p.n_resistance = 1;
    p.connections = {{0, 0, 0.0, 0.0}};
    p.input_current = {0};
    p.output_resistance = {0};
    p.final_current = {'+'};
    p.final_resistance = {'L'};
    p.visit_once = true;
    p.target = CMatrix::identity(2);
    return p;
}

ConnectionProgram compile_read() {
    ConnectionProgram p;
    p.name = "read";
    p.n_current = 1;
    p.n_resistance = 1;
    p.connections = {{0, 0, 0.0, 0.0}};
    p.input_resistance = {0};
    p.output_current = {0};
    p.final_current = {'L'};
    p.final_resistance = {'0'};
    p.visit_once = true;
    p.target = CMatrix::identity(2);
    return p;
}

ConnectionProgram compile_single_qubit(double phi, double theta, bool visit_once) {
    ConnectionProgram p;
    p.target = gates::rz(theta) * gates::ry(phi);
    if (!visit_once) {
        p.name = "single-qubit";
        p.n_current = 1;
        p.n_resistance = 1;
        p.connections = {{0, 0, 0.0, 0.0}, {0, 0, phi, 0.0}, {0, 0, 0.0, theta}};
        p.input_resistance = {0};
        p.output_resistance = {0};
        p.final_current = {'0'};
        p.final_resistance = {'L'};
        p.visit_once = false;
        return p;
    }
    p.name = "single-qubit-visit-once";
    p.n_current = 3;
    p.n_resistance = 3;
    p.connections = {{0, 1, 0.0, 0.0}, {1, 0, 0.0, 0.0}, {1, 1, phi, 0.0},
                     {1, 2, 0.0, 0.0}, {2, 2, 0.0, 0.0}, {2, 1, 0.0, theta}};
    p.input_resistance = {0};
    p.output_resistance = {1};
    p.final_current = {'+', '+', '0'};
    p.final_resistance = {'0', 'L', '0'};
    p.visit_once = true;
    return p;
}

ConnectionProgram compile_cnot() {
    ConnectionProgram p;
    p.name = "cnot";
    p.n_current = 1;
    p.n_resistance = 3;
    p.connections = {{0, 0, 0.0, 0.0}, {0, 1, 0.0, 0.0}, {0, 2, 0.0, 0.0}};
    p.input_resistance = {0, 1};
    p.output_resistance = {1, 2};
    p.final_current = {'+'};
    p.final_resistance = {'0', 'L', 'L'};
    p.visit_once = true;
    p.target = gates::cnot();
    return p;
}

ResourceCount resource_count(const ConnectionProgram& program) {
    return ResourceCount{program.n_current, program.n_resistance,
                         static_cast<int>(program.connections.size())};
}

QuantumState simulate_program(const ConnectionProgram& program, const QuantumState& input) {
    check_program(program);
    const size_t n_inputs = program.input_current.size() + program.input_resistance.size();
    if (static_cast<size_t>(input.qubits()) != n_inputs) {
        throw std::invalid_argument("simulate_program: input qubit count mismatch");
    }

    QuantumState state =
        place(input, input_positions(program), ancilla_states(program, true),
              total_qubits(program));
    for (const ProgramConnection& c : program.connections) {
        int cq = current_qubit(program, c.current);
        int rq = resistance_qubit(program, c.resistance);
        if (c.phi != 0.0) state.apply_gate(gates::ry(c.phi), {cq});
        state.apply_gate(m_theta(c.theta), {cq, rq});
    }
    return state;
}

QuantumState logical_output(const ConnectionProgram& program, const QuantumState& full) {
    if (full.qubits() != total_qubits(program)) {
        throw std::invalid_argument("logical_output: register size mismatch");
    }
    return full.partial_trace(output_positions(program));
}

VerifyReport verify_program(const ConnectionProgram& program, int random_cases,
                            std::uint64_t seed) {
    check_program(program);
    const int k = static_cast<int>(program.input_current.size() + program.input_resistance.size());
    VerifyReport report;
    std::mt19937_64 rng(seed);

    std::vector<QuantumState> cases;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << k); ++b) {
        cases.push_back(QuantumState::basis(k, b));
    }
    for (int i = 0; i < random_cases; ++i) {
        cases.push_back(random_pure(k, rng));
    }

    for (const QuantumState& in : cases) {
        QuantumState got = simulate_program(program, in);
        QuantumState logical = in;
        logical.apply_gate(program.target, [&] {
            std::vector<int> all(static_cast<size_t>(k));
            for (int j = 0; j < k; ++j) all[static_cast<size_t>(j)] = j;
            return all;
        }());
        QuantumState want =
            place(logical, output_positions(program), ancilla_states(program, false),
                  total_qubits(program));
        double err = max_abs_diff_up_to_phase(got.amplitudes(), want.amplitudes());
        report.max_error = std::max(report.max_error, err);
        ++report.cases;
    }
    report.verified = report.max_error < 1e-10;
    return report;
}

std::string program_to_json(const ConnectionProgram& program) {
    nlohmann::ordered_json j;
    j["name"] = program.name;
    j["currents"] = program.n_current;
    j["resistances"] = program.n_resistance;
    j["visit_once"] = program.visit_once;
    j["input_current"] = program.input_current;
    j["input_resistance"] = program.input_resistance;
    j["output_current"] = program.output_current;
    j["output_resistance"] = program.output_resistance;
    j["connections"] = nlohmann::json::array();
    for (const ProgramConnection& c : program.connections) {
        j["connections"].push_back({{"current", c.current},
                                    {"resistance", c.resistance},
                                    {"phi", c.phi},
                                    {"theta", c.theta}});
    }
    ResourceCount rc = resource_count(program);
    j["resources"] = {{"currents", rc.currents},
                      {"resistances", rc.resistances},
                      {"connections", rc.connections}};
    return j.dump(2) + "\n";
}

}  // namespace memq
