#pragma once

#include <vector>

#include "memq/linalg.hpp"
#include "memq/state.hpp"

namespace memq {

// How the resistance qubit is updated after each gate: keep the plain
// reduced state (plasticity), or measure the current qubit along X and
// apply the conditional Z correction first (encoding).
enum class UpdateRule { Plasticity, Encoding };

struct DriveSchedule {
    double theta = 0.0;
    QuantumState initial_resistance = QuantumState::plus(1);
    std::vector<QuantumState> currents;
    UpdateRule mode = UpdateRule::Plasticity;
};

// Oscillatory drive |psi(t)> = cos(dphi t/2)|0> + eta sin(dphi t/2)|1>,
// t = 0..n_steps-1, resistance initialised to |+>. eta must be 1 or i.
DriveSchedule oscillatory_schedule(double theta, double delta_phi, cplx eta, int n_steps);

// Four-segment drive: 100 steps each of |1>, |0>, |1>, |+>.
DriveSchedule ltp_ltd_schedule(double theta);

DriveSchedule constant_schedule(double theta, const QuantumState& current, int n_steps,
                                UpdateRule mode);

// Row t describes the t-th gate application: zc_in is the voltage of the
// incoming current qubit, zc_out the current-qubit Z after the gate, and
// xr/yr/zr the resistance Bloch vector after the full update (zr_out is
// an alias for zr kept as the conductance column). fidelity compares the
// updated resistance state against the driving current state and is NaN
// when the current state is not pure.
struct TraceRow {
    int t = 0;
    double zc_in = 0.0;
    double zc_out = 0.0;
    double zr_out = 0.0;
    double xr = 0.0;
    double yr = 0.0;
    double zr = 0.0;
    double fidelity = 0.0;
};

struct ExperimentTrace {
    std::vector<TraceRow> rows;
    QuantumState final_resistance = QuantumState::plus(1);
};

ExperimentTrace run_trace(const DriveSchedule& schedule);

struct LoopPoint {
    int t = 0;
    double zc_in = 0.0;
    double zc_out = 0.0;
    double zr_out = 0.0;
};

// Loop points for t in [0, n_periods * 2*pi/delta_phi).
std::vector<LoopPoint> hysteresis_loop(double theta, double delta_phi, cplx eta,
                                       int n_periods);

// The final ceil(2*pi/delta_phi)+1 points of an emitted loop.
std::vector<LoopPoint> last_cycle(const std::vector<LoopPoint>& loop, double delta_phi);

// Split-run reproduction of the last loop cycle: four segments starting at
// t0-7, t0-5, t0-3, t0-1 with t0 = round(20*pi/delta_phi), each preparing
// the resistance qubit in the exact trajectory state rho_R^(s) and then
// applying three gates. Run without noise this reproduces the full-trace
// values at the same t.
struct SegmentRow {
    int segment = 0;
    int t = 0;
    double zc_in = 0.0;
    double zc_out = 0.0;
    double zr_out = 0.0;
};

std::vector<SegmentRow> hardware_segments(double theta, double delta_phi, cplx eta);

// sqrt(Tr(rho_c rho_r)) for a pure rho_c; agrees with the Bloch form
// sqrt((1 + vc.vr)/2).
double state_fidelity(const QuantumState& rho_c, const QuantumState& rho_r);

}  // namespace memq
