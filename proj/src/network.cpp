#include "memq/network.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "memq/gates.hpp"

namespace memq {

NetworkSpec fully_connected(int m, int n) {
    if (m < 1 || n < 1) {
        throw std::invalid_argument("fully_connected: m and n must be at least 1");
    }
    if (m + n > QuantumState::kMaxQubits) {
        throw std::invalid_argument("fully_connected: m + n exceeds the supported qubit count");
    }
    NetworkSpec spec;
    spec.m = m;
    spec.n = n;
    for (int a = 1; a <= m; ++a) {
        for (int b = 1; b <= n; ++b) {
            spec.connections.push_back(Connection{n * (a - 1) + b, a, b});
        }
    }
    spec.phi.assign(spec.connections.size() + static_cast<size_t>(n), 0.0);
    spec.theta.assign(spec.connections.size(), 0.0);
    return spec;
}

void validate(const NetworkSpec& spec) {
    if (spec.m < 1 || spec.n < 1) {
        throw std::invalid_argument("network: m and n must be at least 1");
    }
    if (spec.m + spec.n > QuantumState::kMaxQubits) {
        throw std::invalid_argument("network: m + n exceeds the supported qubit count");
    }
    if (spec.connections.empty()) {
        throw std::invalid_argument("network: no connections");
    }
    for (size_t p = 0; p < spec.connections.size(); ++p) {
        const Connection& c = spec.connections[p];
        if (c.index != static_cast<int>(p) + 1) {
            throw std::invalid_argument("network: connection labels must be 1,2,... in order");
        }
        if (c.current < 1 || c.current > spec.m) {
            throw std::invalid_argument("network: connection input qubit out of range");
        }
        if (c.resistance < 1 || c.resistance > spec.n) {
            throw std::invalid_argument("network: connection hidden qubit out of range");
        }
    }
    if (spec.phi.size() != spec.connections.size() + static_cast<size_t>(spec.n)) {
        throw std::invalid_argument("network: phi must have one entry per connection plus n");
    }
    if (spec.theta.size() != spec.connections.size()) {
        throw std::invalid_argument("network: theta must have one entry per connection");
    }
    for (double v : spec.phi) {
        if (!std::isfinite(v)) throw std::invalid_argument("network: phi must be finite");
    }
    for (double v : spec.theta) {
        if (!std::isfinite(v)) throw std::invalid_argument("network: theta must be finite");
    }
}

std::string network_to_json(const NetworkSpec& spec) {
    validate(spec);
    nlohmann::ordered_json j;
    j["m"] = spec.m;
    j["n"] = spec.n;
    j["connections"] = nlohmann::json::array();
    for (const Connection& c : spec.connections) {
        j["connections"].push_back({c.index, c.current, c.resistance});
    }
    j["phi"] = spec.phi;
    j["theta"] = spec.theta;
    return j.dump(2) + "\n";
}

NetworkSpec network_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("network: bad JSON: ") + e.what());
    }
    NetworkSpec spec;
    try {
        spec.m = j.at("m").get<int>();
        spec.n = j.at("n").get<int>();
        for (const auto& row : j.at("connections")) {
            if (!row.is_array() || row.size() != 3) {
                throw std::invalid_argument("network: each connection must be [i, a, b]");
            }
            spec.connections.push_back(
                Connection{row[0].get<int>(), row[1].get<int>(), row[2].get<int>()});
        }
        spec.phi = j.at("phi").get<std::vector<double>>();
        spec.theta = j.at("theta").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("network: bad JSON: ") + e.what());
    }
    validate(spec);
    return spec;
}

namespace {

// In-place statevector kernels for the forward pass. Gate bit order matches
// QuantumState::apply_gate: the first target is the most significant gate bit.
void apply_1q(std::vector<cplx>& amp, int qubits, int q, const cplx g[4]) {
    const std::uint64_t dim = std::uint64_t{1} << qubits;
    const std::uint64_t bit = std::uint64_t{1} << (qubits - 1 - q);
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & bit) continue;
        const cplx a0 = amp[base];
        const cplx a1 = amp[base | bit];
        amp[base] = g[0] * a0 + g[1] * a1;
        amp[base | bit] = g[2] * a0 + g[3] * a1;
    }
}

void apply_2q(std::vector<cplx>& amp, int qubits, int q1, int q2, const cplx g[16]) {
    const std::uint64_t dim = std::uint64_t{1} << qubits;
    const std::uint64_t b1 = std::uint64_t{1} << (qubits - 1 - q1);
    const std::uint64_t b2 = std::uint64_t{1} << (qubits - 1 - q2);
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & (b1 | b2)) continue;
        const cplx a0 = amp[base];
        const cplx a1 = amp[base | b2];
        const cplx a2 = amp[base | b1];
        const cplx a3 = amp[base | b1 | b2];
        amp[base] = g[0] * a0 + g[1] * a1 + g[2] * a2 + g[3] * a3;
        amp[base | b2] = g[4] * a0 + g[5] * a1 + g[6] * a2 + g[7] * a3;
        amp[base | b1] = g[8] * a0 + g[9] * a1 + g[10] * a2 + g[11] * a3;
        amp[base | b1 | b2] = g[12] * a0 + g[13] * a1 + g[14] * a2 + g[15] * a3;
    }
}

void ry_entries(double angle, cplx g[4]) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    g[0] = c;
    g[1] = -s;
    g[2] = s;
    g[3] = c;
}

void interaction_entries(double theta, cplx g[16]) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx phase(std::cos(theta), std::sin(theta));
    for (int i = 0; i < 16; ++i) g[i] = 0.0;
    g[0] = 1.0;
    g[7] = phase;
    g[9] = c;
    g[10] = cplx(0.0, s);
    g[13] = cplx(0.0, s) * std::conj(phase);
    g[14] = c * std::conj(phase);
}

OutcomeDistribution forward_pure(const NetworkSpec& spec, const QuantumState& input) {
    const int qubits = spec.m + spec.n;
    const std::uint64_t dim = std::uint64_t{1} << qubits;
    const std::vector<cplx> in_amp = input.amplitudes();
    const double scale = std::pow(0.5, spec.n / 2.0);
    std::vector<cplx> amp(dim);
    for (std::uint64_t i = 0; i < in_amp.size(); ++i) {
        const cplx v = in_amp[i] * scale;
        for (std::uint64_t j = 0; j < (std::uint64_t{1} << spec.n); ++j) {
            amp[(i << spec.n) | j] = v;
        }
    }

    cplx g1[4];
    cplx g2[16];
    for (size_t p = 0; p < spec.connections.size(); ++p) {
        const Connection& c = spec.connections[p];
        const int cq = c.current - 1;
        const int rq = spec.m + c.resistance - 1;
        if (spec.phi[p] != 0.0) {
            ry_entries(spec.phi[p], g1);
            apply_1q(amp, qubits, cq, g1);
        }
        interaction_entries(spec.theta[p], g2);
        apply_2q(amp, qubits, cq, rq, g2);
    }
    for (int j = 0; j < spec.n; ++j) {
        const double angle = spec.phi[spec.connections.size() + static_cast<size_t>(j)];
        if (angle != 0.0) {
            ry_entries(angle, g1);
            apply_1q(amp, qubits, spec.m + j, g1);
        }
    }

    const std::uint64_t mask = (std::uint64_t{1} << spec.n) - 1;
    OutcomeDistribution out(std::size_t{1} << spec.n, 0.0);
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        out[idx & mask] += std::norm(amp[idx]);
    }
    return out;
}

}  // namespace

OutcomeDistribution forward(const NetworkSpec& spec, const QuantumState& input) {
    validate(spec);
    if (input.qubits() != spec.m) {
        throw std::invalid_argument("forward: input must have exactly m qubits");
    }
    if (input.is_pure()) {
        return forward_pure(spec, input);
    }

    QuantumState state = QuantumState::tensor(input, QuantumState::plus(spec.n));
    for (size_t p = 0; p < spec.connections.size(); ++p) {
        const Connection& c = spec.connections[p];
        int cq = c.current - 1;
        int rq = spec.m + c.resistance - 1;
        if (spec.phi[p] != 0.0) {
            state.apply_gate(gates::ry(spec.phi[p]), {cq});
        }
        state.apply_gate(m_theta(spec.theta[p]), {cq, rq});
    }
    for (int j = 0; j < spec.n; ++j) {
        double angle = spec.phi[spec.connections.size() + static_cast<size_t>(j)];
        if (angle != 0.0) {
            state.apply_gate(gates::ry(angle), {spec.m + j});
        }
    }

    std::vector<double> probs = state.probabilities();
    const std::uint64_t mask = (std::uint64_t{1} << spec.n) - 1;
    OutcomeDistribution out(std::size_t{1} << spec.n, 0.0);
    for (std::uint64_t idx = 0; idx < probs.size(); ++idx) {
        out[idx & mask] += probs[idx];
    }
    return out;
}

double distribution_distance(const OutcomeDistribution& p, const OutcomeDistribution& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("distribution_distance: size mismatch");
    }
    double total = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        total += std::abs(p[i] - q[i]);
    }
    return 0.5 * total;
}

}  // namespace memq
