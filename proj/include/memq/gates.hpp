#pragma once

#include <vector>

#include "memq/linalg.hpp"

namespace memq {

// Standard gate matrices. Rotation conventions: rx(a) = exp(-i a X / 2),
// ry(a) = exp(-i a Y / 2), rz(a) = exp(-i a Z / 2). Controlled gates put
// the control on the first (more significant) qubit.
namespace gates {

CMatrix identity2();
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CMatrix hadamard();
CMatrix rx(double angle);
CMatrix ry(double angle);
CMatrix rz(double angle);
CMatrix cnot();
CMatrix swap_gate();
CMatrix controlled(const CMatrix& u);

}  // namespace gates

// The memristive two-qubit gate on |current, resistance>:
//
//   M_theta = [ 1        0                      0                    0        ]
//             [ 0        0                      0                    e^{i t}  ]
//             [ 0        cos t                  i sin t              0        ]
//             [ 0        i e^{-i t} sin t       e^{-i t} cos t       0        ]
//
// At theta = 0 it permutes |01> -> |10>, |10> -> |11>, |11> -> |01>; at
// theta = pi/2 the resistance qubit is left untouched.
CMatrix m_theta(double theta);

// One step of the elementary-gate realisation of m_theta. Qubit ids refer
// to the two-qubit register: 0 = current, 1 = resistance.
struct ElementaryGate {
    enum class Kind { Cnot, Rz, ControlledRx };
    Kind kind;
    int control;  // -1 for uncontrolled gates
    int target;
    double angle;  // 0 for Cnot
};

// Elementary-gate sequence (application order) whose product equals
// m_theta(theta) up to a global phase. Uses two rotation families:
// rz(theta) = exp(-i theta Z / 2) and a controlled exp(-i (pi/2 - theta) X).
std::vector<ElementaryGate> m_theta_decomposition(double theta);

// 4x4 matrix of one elementary gate, and of a whole sequence in
// application order (later gates multiply from the left).
CMatrix elementary_matrix(const ElementaryGate& g);
CMatrix decomposition_matrix(const std::vector<ElementaryGate>& seq);

// Three-qubit extension on |A B R>: the current qubit is carried by the
// dual-rail pair A, B (|0>_C = |10>_AB, |1>_C = |01>_AB) and the gate acts
// as the identity on the unpopulated |00>_AB and |11>_AB subspaces.
CMatrix m_tilde(double theta);

// Measurement-and-feedback modification used for state encoding: after
// m_theta, the current qubit is measured along X and Z is applied to the
// resistance qubit on outcome "-". Returned as the two-element Kraus set
// {(|+><+| x 1) M_theta, (|-><-| x Z) M_theta}.
std::vector<CMatrix> encoding_kraus(double theta);

// Unitary stand-in for the feedback: m_theta followed by a CNOT whose
// control is the resistance qubit and whose target is the current qubit.
// Gives the same reduced state on the resistance qubit as the Kraus form.
CMatrix encoding_cnot_form(double theta);

}  // namespace memq
