#include "memq/experiments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "memq/gates.hpp"

namespace memq {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_eta(cplx eta) {
    if (std::abs(eta - cplx(1.0, 0.0)) > 1e-12 && std::abs(eta - cplx(0.0, 1.0)) > 1e-12) {
        throw std::invalid_argument("eta must be 1 or i");
    }
}

void check_one_qubit(const QuantumState& s, const char* who) {
    if (s.qubits() != 1) {
        throw std::invalid_argument(std::string(who) + ": expected a single-qubit state");
    }
}

// X-basis measurement of the current qubit with conditional Z on the
// resistance qubit, as a Kraus pair on the post-gate two-qubit state.
std::vector<CMatrix> phase_fix_kraus() {
    CMatrix kp(4, 4);
    CMatrix km(4, 4);
    // |+><+| (x) I and |-><-| (x) Z in the |C R> basis.
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            kp(2 * r + 0, 2 * c + 0) = 0.5;
            kp(2 * r + 1, 2 * c + 1) = 0.5;
            double sign = (r == c) ? 0.5 : -0.5;
            km(2 * r + 0, 2 * c + 0) = sign;
            km(2 * r + 1, 2 * c + 1) = -sign;
        }
    }
    return {kp, km};
}

bool effectively_pure(const QuantumState& s) {
    if (s.is_pure()) return true;
    CMatrix rho = s.density();
    return std::real(trace(rho * rho)) >= 1.0 - 1e-6;
}

struct StepResult {
    double zc_out = 0.0;
    QuantumState resistance = QuantumState::plus(1);
};

StepResult interact(const CMatrix& gate, const QuantumState& current,
                    const QuantumState& resistance, UpdateRule mode) {
    QuantumState joint = QuantumState::tensor(current, resistance);
    joint.apply_gate(gate, {0, 1});
    StepResult out;
    out.zc_out = joint.expect_pauli("ZI");
    if (mode == UpdateRule::Encoding) {
        static const std::vector<CMatrix> kraus = phase_fix_kraus();
        joint.apply_kraus(kraus, {0, 1});
    }
    out.resistance = joint.partial_trace({1});
    return out;
}

}  // namespace

DriveSchedule oscillatory_schedule(double theta, double delta_phi, cplx eta, int n_steps) {
    check_eta(eta);
    if (n_steps < 1) {
        throw std::invalid_argument("oscillatory_schedule: need at least one step");
    }
    DriveSchedule sched;
    sched.theta = theta;
    sched.initial_resistance = QuantumState::plus(1);
    sched.mode = UpdateRule::Plasticity;
    sched.currents.reserve(static_cast<size_t>(n_steps));
    for (int t = 0; t < n_steps; ++t) {
        double half = 0.5 * delta_phi * t;
        sched.currents.push_back(
            QuantumState::pure(1, {cplx(std::cos(half), 0.0), eta * std::sin(half)}));
    }
    return sched;
}

DriveSchedule ltp_ltd_schedule(double theta) {
    DriveSchedule sched;
    sched.theta = theta;
    sched.initial_resistance = QuantumState::plus(1);
    sched.mode = UpdateRule::Plasticity;
    sched.currents.reserve(400);
    const QuantumState one = QuantumState::basis(1, 1);
    const QuantumState zero = QuantumState::basis(1, 0);
    const QuantumState plus = QuantumState::plus(1);
    for (int t = 0; t < 100; ++t) sched.currents.push_back(one);
    for (int t = 0; t < 100; ++t) sched.currents.push_back(zero);
    for (int t = 0; t < 100; ++t) sched.currents.push_back(one);
    for (int t = 0; t < 100; ++t) sched.currents.push_back(plus);
    return sched;
}

DriveSchedule constant_schedule(double theta, const QuantumState& current, int n_steps,
                                UpdateRule mode) {
    check_one_qubit(current, "constant_schedule");
    if (n_steps < 1) {
        throw std::invalid_argument("constant_schedule: need at least one step");
    }
    DriveSchedule sched;
    sched.theta = theta;
    sched.initial_resistance = QuantumState::plus(1);
    sched.mode = mode;
    sched.currents.assign(static_cast<size_t>(n_steps), current);
    return sched;
}

ExperimentTrace run_trace(const DriveSchedule& schedule) {
    if (schedule.currents.empty()) {
        throw std::invalid_argument("run_trace: schedule has no steps");
    }
    check_one_qubit(schedule.initial_resistance, "run_trace");
    const CMatrix gate = m_theta(schedule.theta);

    ExperimentTrace trace;
    trace.rows.reserve(schedule.currents.size());
    QuantumState resistance = schedule.initial_resistance;
    for (size_t t = 0; t < schedule.currents.size(); ++t) {
        const QuantumState& current = schedule.currents[t];
        check_one_qubit(current, "run_trace");
        StepResult step = interact(gate, current, resistance, schedule.mode);
        resistance = step.resistance;

        TraceRow row;
        row.t = static_cast<int>(t);
        row.zc_in = current.expect_pauli("Z");
        row.zc_out = step.zc_out;
        row.xr = resistance.expect_pauli("X");
        row.yr = resistance.expect_pauli("Y");
        row.zr = resistance.expect_pauli("Z");
        row.zr_out = row.zr;
        row.fidelity = effectively_pure(current)
                           ? state_fidelity(current, resistance)
                           : std::numeric_limits<double>::quiet_NaN();
        trace.rows.push_back(row);
    }
    trace.final_resistance = resistance;
    return trace;
}

std::vector<LoopPoint> hysteresis_loop(double theta, double delta_phi, cplx eta,
                                       int n_periods) {
    check_eta(eta);
    if (!(delta_phi > 0.0)) {
        throw std::invalid_argument("hysteresis_loop: delta_phi must be positive");
    }
    if (n_periods < 1) {
        throw std::invalid_argument("hysteresis_loop: need at least one period");
    }
    double span = n_periods * 2.0 * kPi / delta_phi;
    int n_steps = static_cast<int>(std::ceil(span - 1e-9));
    ExperimentTrace trace = run_trace(oscillatory_schedule(theta, delta_phi, eta, n_steps));
    std::vector<LoopPoint> loop;
    loop.reserve(trace.rows.size());
    for (const TraceRow& row : trace.rows) {
        loop.push_back(LoopPoint{row.t, row.zc_in, row.zc_out, row.zr_out});
    }
    return loop;
}

std::vector<LoopPoint> last_cycle(const std::vector<LoopPoint>& loop, double delta_phi) {
    if (!(delta_phi > 0.0)) {
        throw std::invalid_argument("last_cycle: delta_phi must be positive");
    }
    size_t count = static_cast<size_t>(std::ceil(2.0 * kPi / delta_phi - 1e-9)) + 1;
    if (count >= loop.size()) return loop;
    return std::vector<LoopPoint>(loop.end() - static_cast<long>(count), loop.end());
}

std::vector<SegmentRow> hardware_segments(double theta, double delta_phi, cplx eta) {
    check_eta(eta);
    if (!(delta_phi > 0.0)) {
        throw std::invalid_argument("hardware_segments: delta_phi must be positive");
    }
    long t0 = std::lround(20.0 * kPi / delta_phi);
    if (t0 < 8) {
        throw std::invalid_argument("hardware_segments: delta_phi too large for the protocol");
    }
    const int n_steps = static_cast<int>(t0) + 2;
    DriveSchedule sched = oscillatory_schedule(theta, delta_phi, eta, n_steps);
    const CMatrix gate = m_theta(theta);

    const long starts[4] = {t0 - 7, t0 - 5, t0 - 3, t0 - 1};
    // Resistance trajectory, recorded at the segment start times.
    QuantumState resistance = sched.initial_resistance;
    QuantumState prepared[4] = {resistance, resistance, resistance, resistance};
    for (long t = 0; t < starts[3]; ++t) {
        for (int seg = 0; seg < 4; ++seg) {
            if (t == starts[seg]) prepared[seg] = resistance;
        }
        resistance = interact(gate, sched.currents[static_cast<size_t>(t)], resistance,
                              UpdateRule::Plasticity)
                         .resistance;
    }
    prepared[3] = resistance;

    std::vector<SegmentRow> rows;
    rows.reserve(12);
    for (int seg = 0; seg < 4; ++seg) {
        QuantumState r = prepared[seg];
        for (long t = starts[seg]; t < starts[seg] + 3; ++t) {
            const QuantumState& current = sched.currents[static_cast<size_t>(t)];
            StepResult step = interact(gate, current, r, UpdateRule::Plasticity);
            r = step.resistance;
            SegmentRow row;
            row.segment = seg + 1;
            row.t = static_cast<int>(t);
            row.zc_in = current.expect_pauli("Z");
            row.zc_out = step.zc_out;
            row.zr_out = r.expect_pauli("Z");
            rows.push_back(row);
        }
    }
    return rows;
}

double state_fidelity(const QuantumState& rho_c, const QuantumState& rho_r) {
    check_one_qubit(rho_c, "state_fidelity");
    check_one_qubit(rho_r, "state_fidelity");
    CMatrix c = rho_c.density();
    double purity = std::real(trace(c * c));
    if (purity < 1.0 - 1e-6) {
        throw std::invalid_argument("state_fidelity: reference state must be pure");
    }
    double f2 = std::real(trace(c * rho_r.density()));
    if (f2 < 0.0) f2 = 0.0;
    if (f2 > 1.0) f2 = 1.0;
    return std::sqrt(f2);
}

}  // namespace memq
