#pragma once

#include <vector>

#include "memq/linalg.hpp"
#include "memq/state.hpp"

namespace memq {

// Bloch-space view of the single-qubit channels induced on the resistance
// qubit by one gate application. With v = (<X>, <Y>, <Z>) of the resistance
// qubit and (cx, cy, cz) the Bloch components of the current qubit state,
// one step acts as v -> E v + k.
using Bloch = Vec3;

Bloch bloch_vector(const QuantumState& one_qubit);
QuantumState state_from_bloch(Bloch v);

struct AffineMap {
    Mat3 e;
    Vec3 k;
};

// Plain interaction: apply m_theta, discard the current qubit.
AffineMap ptm_plasticity(double theta, Bloch current);

// Encoding interaction: apply m_theta, measure the current qubit along X,
// apply Z to the resistance qubit on outcome "-", discard the current qubit.
AffineMap ptm_encoding(double theta, Bloch current);

Bloch apply(const AffineMap& map, Bloch v);

// Trajectory [v0, f(v0), f(f(v0)), ...] with steps applications.
std::vector<Bloch> iterate(const AffineMap& map, Bloch v0, int steps);

// Fixed point of the affine map, from (1 - E) v = k by direct 3x3
// elimination with partial pivoting. A singular system is reported as a
// fixed-point family: a particular solution plus a null-space basis.
struct SteadyState {
    Vec3 point;
    bool degenerate = false;
    int family_dim = 0;
    std::array<Vec3, 3> family_basis{};
    double residual = 0.0;
    double condition = 0.0;
};

SteadyState steady_state(const AffineMap& map);

// Choi matrix of the channel; complete positivity holds when its smallest
// eigenvalue is nonnegative (checked against a -1e-9 roundoff floor).
CMatrix choi_matrix(const AffineMap& map);
double min_choi_eigenvalue(const AffineMap& map);
bool is_cptp(const AffineMap& map, double eigenvalue_floor = -1e-9);

}  // namespace memq
