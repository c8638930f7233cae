#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "memq/channels.hpp"
#include "memq/experiments.hpp"
#include "memq/gates.hpp"
#include "memq/state.hpp"

using namespace memq;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const cplx kI(0.0, 1.0);

QuantumState drive_state(double delta_phi, cplx eta, int t) {
    const double half = 0.5 * delta_phi * t;
    return QuantumState::pure(1, {cplx(std::cos(half)), eta * std::sin(half)});
}

}  // namespace

TEST_CASE("constant drive reproduces the affine iteration") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (UpdateRule mode : {UpdateRule::Plasticity, UpdateRule::Encoding}) {
        const double theta = u(rng);
        QuantumState current = QuantumState::pure(
            1, {cplx(std::cos(0.4)), std::polar(std::sin(0.4), 0.9)});
        DriveSchedule sched = constant_schedule(theta, current, 40, mode);
        ExperimentTrace trace = run_trace(sched);
        REQUIRE(trace.rows.size() == 40);

        Bloch cur = bloch_vector(current);
        AffineMap map = mode == UpdateRule::Encoding ? ptm_encoding(theta, cur)
                                                     : ptm_plasticity(theta, cur);
        Bloch v = bloch_vector(QuantumState::plus(1));
        for (int t = 0; t < 40; ++t) {
            v = apply(map, v);
            CHECK(std::abs(trace.rows[t].xr - v.x) < 1e-12);
            CHECK(std::abs(trace.rows[t].yr - v.y) < 1e-12);
            CHECK(std::abs(trace.rows[t].zr - v.z) < 1e-12);
            CHECK(trace.rows[t].zr_out == trace.rows[t].zr);
            CHECK(std::abs(trace.rows[t].zc_in - cur.z) < 1e-12);
        }
        CHECK(max_abs_component(bloch_vector(trace.final_resistance) - v) < 1e-12);
    }
}

TEST_CASE("conductance column obeys the transmission law") {
    // zc_out at step t equals zr (before the gate) times zc_in.
    DriveSchedule sched = constant_schedule(0.7, QuantumState::basis(1, 1), 25,
                                            UpdateRule::Plasticity);
    ExperimentTrace trace = run_trace(sched);
    double zr_before = bloch_vector(sched.initial_resistance).z;
    for (const TraceRow& row : trace.rows) {
        CHECK(std::abs(row.zc_out - zr_before * row.zc_in) < 1e-12);
        zr_before = row.zr;
    }
}

TEST_CASE("potentiation and depression staircase") {
    const double theta = 7.0 * kPi / 16.0;
    ExperimentTrace trace = run_trace(ltp_ltd_schedule(theta));
    REQUIRE(trace.rows.size() == 400);

    // Segment endpoints approach the drive conductances but the finite
    // 100-step segments leave a visible gap at this angle.
    const double ends[4] = {trace.rows[99].zr, trace.rows[199].zr,
                            trace.rows[299].zr, trace.rows[399].zr};
    CHECK(ends[0] < -0.97);
    CHECK(ends[1] > 0.95);
    CHECK(ends[2] < -0.95);
    CHECK(std::abs(ends[3]) < 0.02);

    // Cross-check each segment against the affine iteration.
    const Bloch drives[4] = {Bloch{0, 0, -1}, Bloch{0, 0, 1}, Bloch{0, 0, -1},
                             Bloch{1, 0, 0}};
    Bloch v = bloch_vector(QuantumState::plus(1));
    int idx = 0;
    for (const Bloch& d : drives) {
        AffineMap map = ptm_plasticity(theta, d);
        for (int s = 0; s < 100; ++s, ++idx) {
            v = apply(map, v);
            CHECK(std::abs(trace.rows[idx].zr - v.z) < 1e-12);
            CHECK(std::abs(trace.rows[idx].xr - v.x) < 1e-12);
        }
    }
}

TEST_CASE("hysteresis loop pinches at the origin and depends on the drive phase") {
    const double theta = 7.0 * kPi / 16.0;
    const double dphi = kPi / 32.0;
    auto real_loop = hysteresis_loop(theta, dphi, cplx(1.0), 10);
    auto imag_loop = hysteresis_loop(theta, dphi, kI, 10);
    REQUIRE(real_loop.size() == 640);
    REQUIRE(imag_loop.size() == 640);

    double max_gap = 0.0;
    for (std::size_t t = 0; t < real_loop.size(); ++t) {
        CHECK(real_loop[t].t == static_cast<int>(t));
        CHECK(std::abs(real_loop[t].zc_in - std::cos(dphi * static_cast<double>(t))) <
              1e-12);
        if (std::abs(real_loop[t].zc_in) < 1e-12) {
            CHECK(std::abs(real_loop[t].zc_out) < 1e-10);
        }
        max_gap = std::max(max_gap,
                           std::abs(real_loop[t].zc_out - imag_loop[t].zc_out));
    }
    CHECK(max_gap > 0.05);
}

TEST_CASE("hysteresis loop matches a direct density matrix simulation") {
    const double theta = 3.0 * kPi / 8.0;
    const double dphi = kPi / 4.0;
    auto loop = hysteresis_loop(theta, dphi, kI, 10);
    REQUIRE(loop.size() == 80);

    QuantumState res = QuantumState::plus(1);
    for (const LoopPoint& p : loop) {
        QuantumState cur = drive_state(dphi, kI, p.t);
        QuantumState joint = QuantumState::tensor(cur, res);
        joint.apply_gate(m_theta(theta), {0, 1});
        CHECK(std::abs(p.zc_out - joint.expect_pauli("ZI")) < 1e-12);
        res = joint.partial_trace({1});
        CHECK(std::abs(p.zr_out - bloch_vector(res).z) < 1e-12);
    }
}

TEST_CASE("last cycle is the closing window of the loop") {
    const double dphi = kPi / 4.0;
    auto loop = hysteresis_loop(3.0 * kPi / 8.0, dphi, cplx(1.0), 10);
    auto cycle = last_cycle(loop, dphi);
    const std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * kPi / dphi)) + 1;
    REQUIRE(cycle.size() == n);
    REQUIRE(cycle.size() == 9);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(cycle[i].t == loop[loop.size() - n + i].t);
        CHECK(cycle[i].zc_out == loop[loop.size() - n + i].zc_out);
    }
    CHECK(std::abs(cycle.front().zc_in - cycle.back().zc_in) < 1e-9);
}

TEST_CASE("segment runs reproduce the full trace") {
    const double theta = 7.0 * kPi / 16.0;
    const double dphi = kPi / 32.0;
    auto segments = hardware_segments(theta, dphi, cplx(1.0));
    REQUIRE(segments.size() == 12);

    // The last segment runs two steps past the nominal 10 periods, so take
    // the reference from a longer trace; both are functions of t alone.
    auto loop = hysteresis_loop(theta, dphi, cplx(1.0), 11);
    const int t0 = static_cast<int>(std::lround(20.0 * kPi / dphi));
    const int starts[4] = {t0 - 7, t0 - 5, t0 - 3, t0 - 1};
    for (int s = 0; s < 4; ++s) {
        for (int g = 0; g < 3; ++g) {
            const SegmentRow& row = segments[static_cast<std::size_t>(3 * s + g)];
            CHECK(row.segment == s + 1);
            CHECK(row.t == starts[s] + g);
            const LoopPoint& ref = loop[static_cast<std::size_t>(row.t)];
            CHECK(std::abs(row.zc_in - ref.zc_in) < 1e-12);
            CHECK(std::abs(row.zc_out - ref.zc_out) < 1e-12);
            CHECK(std::abs(row.zr_out - ref.zr_out) < 1e-12);
        }
    }

    // A drive too coarse to fit the replay window is rejected.
    CHECK_THROWS_AS(hardware_segments(theta, 9.0, cplx(1.0)), std::invalid_argument);
}

TEST_CASE("encoding drive converges to the driving state") {
    const double theta = 7.0 * kPi / 16.0;
    QuantumState target = QuantumState::basis(1, 0);
    {
        QuantumState s = target;
        s.apply_gate(gates::rx(2.0 * 3.0 * kPi / 10.0), {0});
        s.apply_gate(gates::rz(2.0 * 7.0 * kPi / 22.0), {0});
        target = s;
    }
    DriveSchedule sched = constant_schedule(theta, target, 400, UpdateRule::Encoding);
    ExperimentTrace trace = run_trace(sched);
    REQUIRE(trace.rows.size() == 400);

    double prev = 0.0;
    for (const TraceRow& row : trace.rows) {
        CHECK(row.fidelity >= prev - 1e-12);
        prev = row.fidelity;
    }
    CHECK(trace.rows[49].fidelity == doctest::Approx(0.995143).epsilon(1e-4));
    CHECK(trace.rows.back().fidelity >= 0.999);
    CHECK(std::abs(state_fidelity(target, trace.final_resistance) -
                   trace.rows.back().fidelity) < 1e-12);
}

TEST_CASE("state fidelity agrees with the bloch form") {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(0.0, kPi);
    for (int it = 0; it < 10; ++it) {
        const double a = u(rng), b = u(rng);
        QuantumState c = QuantumState::basis(1, 0);
        c.apply_gate(gates::rx(a), {0});
        QuantumState r = QuantumState::basis(1, 0);
        r.apply_gate(gates::ry(b), {0});
        Bloch vc = bloch_vector(c), vr = bloch_vector(r);
        CHECK(std::abs(state_fidelity(c, r) - std::sqrt(0.5 * (1.0 + dot(vc, vr)))) <
              1e-12);
    }
}

TEST_CASE("oscillatory schedule rejects other drive phases") {
    CHECK_THROWS_AS(oscillatory_schedule(0.3, 0.1, cplx(0.5, 0.5), 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(hysteresis_loop(0.3, -0.1, cplx(1.0), 10), std::invalid_argument);
}
