#include "memq/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace memq {

namespace gates {

namespace {
const cplx kI(0.0, 1.0);
}

CMatrix identity2() { return CMatrix::identity(2); }

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

CMatrix pauli_y() {
    CMatrix m(2, 2);
    m(0, 1) = -kI;
    m(1, 0) = kI;
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

CMatrix hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix m(2, 2);
    m(0, 0) = s;
    m(0, 1) = s;
    m(1, 0) = s;
    m(1, 1) = -s;
    return m;
}

CMatrix rx(double angle) {
    const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
    CMatrix m(2, 2);
    m(0, 0) = c;
    m(0, 1) = -kI * s;
    m(1, 0) = -kI * s;
    m(1, 1) = c;
    return m;
}

CMatrix ry(double angle) {
    const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
    CMatrix m(2, 2);
    m(0, 0) = c;
    m(0, 1) = -s;
    m(1, 0) = s;
    m(1, 1) = c;
    return m;
}

CMatrix rz(double angle) {
    CMatrix m(2, 2);
    m(0, 0) = std::exp(-kI * (angle / 2.0));
    m(1, 1) = std::exp(kI * (angle / 2.0));
    return m;
}

CMatrix cnot() {
    CMatrix m(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return m;
}

CMatrix swap_gate() {
    CMatrix m(4, 4);
    m(0, 0) = 1.0;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(3, 3) = 1.0;
    return m;
}

CMatrix controlled(const CMatrix& u) {
    if (u.rows() != u.cols()) throw std::invalid_argument("controlled: gate must be square");
    const std::size_t d = u.rows();
    CMatrix m(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(d + i, d + j) = u(i, j);
    return m;
}

}  // namespace gates

namespace {
const cplx kI(0.0, 1.0);
}

CMatrix m_theta(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const cplx eip = std::exp(kI * theta), eim = std::exp(-kI * theta);
    CMatrix m(4, 4);
    m(0, 0) = 1.0;
    m(1, 3) = eip;
    m(2, 1) = c;
    m(2, 2) = kI * s;
    m(3, 1) = kI * eim * s;
    m(3, 2) = eim * c;
    return m;
}

std::vector<ElementaryGate> m_theta_decomposition(double theta) {
    using Kind = ElementaryGate::Kind;
    const double pi = std::numbers::pi;
    return {
        {Kind::Cnot, 1, 0, 0.0},
        {Kind::ControlledRx, 0, 1, pi - 2.0 * theta},
        {Kind::Cnot, 0, 1, 0.0},
        {Kind::Rz, -1, 1, theta},
        {Kind::Rz, -1, 0, pi / 2.0 - theta},
        {Kind::Cnot, 0, 1, 0.0},
    };
}

CMatrix elementary_matrix(const ElementaryGate& g) {
    using Kind = ElementaryGate::Kind;
    auto on_qubit = [](const CMatrix& u, int q) {
        return q == 0 ? kron(u, CMatrix::identity(2)) : kron(CMatrix::identity(2), u);
    };
    switch (g.kind) {
        case Kind::Rz:
            return on_qubit(gates::rz(g.angle), g.target);
        case Kind::Cnot: {
            if (g.control == 0 && g.target == 1) return gates::cnot();
            // control on the resistance qubit
            CMatrix m(4, 4);
            m(0, 0) = 1.0;
            m(1, 3) = 1.0;
            m(2, 2) = 1.0;
            m(3, 1) = 1.0;
            return m;
        }
        case Kind::ControlledRx: {
            if (g.control == 0 && g.target == 1) return gates::controlled(gates::rx(g.angle));
            CMatrix m = CMatrix::identity(4);
            const CMatrix r = gates::rx(g.angle);
            // control on qubit 1, target qubit 0: acts on |01>, |11>
            m(1, 1) = r(0, 0);
            m(1, 3) = r(0, 1);
            m(3, 1) = r(1, 0);
            m(3, 3) = r(1, 1);
            return m;
        }
    }
    throw std::logic_error("unreachable");
}

CMatrix decomposition_matrix(const std::vector<ElementaryGate>& seq) {
    CMatrix u = CMatrix::identity(4);
    for (const ElementaryGate& g : seq) u = elementary_matrix(g) * u;
    return u;
}

CMatrix m_tilde(double theta) {
    // |0>_C = |10>_AB lives at A B indices 4, 5 (R = 0, 1);
    // |1>_C = |01>_AB lives at indices 2, 3.
    static constexpr int embed[4] = {4, 5, 2, 3};
    const CMatrix m = m_theta(theta);
    CMatrix out(8, 8);
    out(0, 0) = 1.0;
    out(1, 1) = 1.0;
    out(6, 6) = 1.0;
    out(7, 7) = 1.0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out(embed[r], embed[c]) = m(r, c);
    return out;
}

std::vector<CMatrix> encoding_kraus(double theta) {
    CMatrix plus(2, 2), minus(2, 2);
    plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
    minus(0, 0) = minus(1, 1) = 0.5;
    minus(0, 1) = minus(1, 0) = -0.5;
    const CMatrix m = m_theta(theta);
    return {kron(plus, CMatrix::identity(2)) * m, kron(minus, gates::pauli_z()) * m};
}

CMatrix encoding_cnot_form(double theta) {
    CMatrix cnot_rc(4, 4);
    cnot_rc(0, 0) = 1.0;
    cnot_rc(1, 3) = 1.0;
    cnot_rc(2, 2) = 1.0;
    cnot_rc(3, 1) = 1.0;
    return cnot_rc * m_theta(theta);
}

}  // namespace memq
