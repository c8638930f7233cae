#pragma once

#include <string>
#include <vector>

#include "memq/state.hpp"

namespace memq {

// One input-to-hidden connection. index is the 1-based time-order label i,
// current/resistance are the 1-based input-qubit (a) and hidden-qubit (b)
// positions. Connections are applied in list order; for the canonical
// fully-connected layout the label satisfies i = n*(a-1) + b.
struct Connection {
    int index = 0;
    int current = 0;
    int resistance = 0;
};

struct NetworkSpec {
    int m = 0;
    int n = 0;
    std::vector<Connection> connections;
    std::vector<double> phi;    // one per connection, then n output rotations
    std::vector<double> theta;  // one per connection
};

// Canonical fully-connected topology with all parameters zero.
NetworkSpec fully_connected(int m, int n);

// Throws std::invalid_argument when sizes, labels or wiring are malformed.
void validate(const NetworkSpec& spec);

std::string network_to_json(const NetworkSpec& spec);
NetworkSpec network_from_json(const std::string& text);

// Probabilities over the N-bit measurement outcomes mu = (mu_1..mu_N);
// bit mu_j indexes the j-th hidden qubit, mu_1 most significant, and
// mu_j = 0 corresponds to the +1 eigenvalue of Z.
using OutcomeDistribution = std::vector<double>;

// Exact Born distribution of the hidden-layer measurement: hidden qubits
// start in |+>, each connection applies Ry(phi_i) on its input qubit then
// the memristive gate on (input, hidden), output rotations Ry(phi_{mn+j})
// precede the measurement, and input qubits are marginalised out.
OutcomeDistribution forward(const NetworkSpec& spec, const QuantumState& input);

// (1/2) sum_mu |p - q|.
double distribution_distance(const OutcomeDistribution& p, const OutcomeDistribution& q);

}  // namespace memq
