#include "memq/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace memq {

Bloch bloch_vector(const QuantumState& one_qubit) {
    if (one_qubit.qubits() != 1) {
        throw std::invalid_argument("bloch_vector: expected a single-qubit state");
    }
    return Bloch{one_qubit.expect_pauli("X"), one_qubit.expect_pauli("Y"),
                 one_qubit.expect_pauli("Z")};
}

QuantumState state_from_bloch(Bloch v) {
    if (norm(v) > 1.0 + 1e-10) {
        throw std::invalid_argument("state_from_bloch: Bloch vector outside the unit ball");
    }
    CMatrix rho(2, 2);
    rho(0, 0) = 0.5 * (1.0 + v.z);
    rho(1, 1) = 0.5 * (1.0 - v.z);
    rho(0, 1) = 0.5 * cplx(v.x, -v.y);
    rho(1, 0) = 0.5 * cplx(v.x, v.y);
    return QuantumState::mixed(1, rho);
}

namespace {

void require_unit_ball(const Bloch& current, const char* who) {
    if (norm(current) > 1.0 + 1e-10) {
        throw std::invalid_argument(std::string(who) + ": current Bloch vector outside the unit ball");
    }
}

}  // namespace

AffineMap ptm_plasticity(double theta, Bloch current) {
    require_unit_ball(current, "ptm_plasticity");
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double cx = current.x;
    const double cy = current.y;
    const double cz = current.z;

    AffineMap map;
    map.k = Vec3{cz * c * s * s, cz * c * c * s, cz * c * c};

    map.e(0, 0) = cx * c - cy * s * s * s;
    map.e(0, 1) = -cx * c * c * s;
    map.e(0, 2) = -c * s * s;
    map.e(1, 0) = cy * c * c * c;
    map.e(1, 1) = cx * c * s * s - cy * s;
    map.e(1, 2) = -c * c * s;
    map.e(2, 0) = -cy * c * s;
    map.e(2, 1) = cx * c * s;
    map.e(2, 2) = s * s;
    return map;
}

AffineMap ptm_encoding(double theta, Bloch current) {
    require_unit_ball(current, "ptm_encoding");
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double cx = current.x;
    const double cy = current.y;
    const double cz = current.z;

    AffineMap map;
    map.k = Vec3{c * c * cx, c * c * cy, c * c * cz};

    map.e(0, 0) = s * s;
    map.e(0, 1) = -cz * c * s;
    map.e(0, 2) = cy * c * s;
    map.e(1, 0) = cz * c * s;
    map.e(1, 1) = s * s;
    map.e(1, 2) = -cx * c * s;
    map.e(2, 0) = -cy * c * s;
    map.e(2, 1) = cx * c * s;
    map.e(2, 2) = s * s;
    return map;
}

Bloch apply(const AffineMap& map, Bloch v) {
    return map.e * v + map.k;
}

std::vector<Bloch> iterate(const AffineMap& map, Bloch v0, int steps) {
    if (steps < 0) {
        throw std::invalid_argument("iterate: steps must be nonnegative");
    }
    std::vector<Bloch> out;
    out.reserve(static_cast<size_t>(steps) + 1);
    out.push_back(v0);
    Bloch v = v0;
    for (int i = 0; i < steps; ++i) {
        v = apply(map, v);
        out.push_back(v);
    }
    return out;
}

SteadyState steady_state(const AffineMap& map) {
    Mat3 a = Mat3::identity() - map.e;
    Solve3Result r = solve3(a, map.k);

    SteadyState st;
    st.point = r.solution;
    st.condition = r.condition;
    if (r.singular) {
        st.degenerate = true;
        st.family_dim = r.nullity;
        st.family_basis = r.null_basis;
    }
    Bloch res = apply(map, st.point) - st.point;
    st.residual = norm(res);
    return st;
}

CMatrix choi_matrix(const AffineMap& map) {
    // Images of the Pauli basis under the channel, as 2x2 matrices.
    std::array<CMatrix, 4> sigma = {CMatrix::identity(2), CMatrix(2, 2), CMatrix(2, 2),
                                    CMatrix(2, 2)};
    sigma[1](0, 1) = 1.0;
    sigma[1](1, 0) = 1.0;
    sigma[2](0, 1) = cplx(0.0, -1.0);
    sigma[2](1, 0) = cplx(0.0, 1.0);
    sigma[3](0, 0) = 1.0;
    sigma[3](1, 1) = -1.0;

    std::array<CMatrix, 4> image;
    image[0] = sigma[0] + map.k.x * sigma[1] + map.k.y * sigma[2] + map.k.z * sigma[3];
    for (int j = 0; j < 3; ++j) {
        CMatrix m(2, 2);
        for (int i = 0; i < 3; ++i) {
            m = m + map.e(i, j) * sigma[i + 1];
        }
        image[j + 1] = m;
    }

    // C = (1/2) sum_{a,b} |a><b| (x) Lambda(|a><b|), with
    // |a><b| = (1/2) sum_P P_{ba} P over the Pauli basis.
    CMatrix choi(4, 4);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            CMatrix block(2, 2);
            for (int p = 0; p < 4; ++p) {
                block = block + (0.5 * sigma[p](b, a)) * image[p];
            }
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                    choi(2 * a + r, 2 * b + c) = 0.5 * block(r, c);
                }
            }
        }
    }
    return choi;
}

double min_choi_eigenvalue(const AffineMap& map) {
    std::vector<double> ev = hermitian_eigenvalues(choi_matrix(map));
    return ev.front();
}

bool is_cptp(const AffineMap& map, double eigenvalue_floor) {
    return min_choi_eigenvalue(map) >= eigenvalue_floor;
}

}  // namespace memq
