#include <cmath>
#include <random>

#include <doctest.h>

#include "memq/channels.hpp"
#include "memq/gates.hpp"
#include "memq/state.hpp"

using namespace memq;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Bloch random_ball(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Bloch v{u(rng), u(rng), u(rng)};
        if (norm(v) <= 1.0) return v;
    }
}

// One step of the channel on the resistance qubit, computed from the full
// two-qubit state instead of the affine map.
Bloch brute_step(double theta, Bloch current, Bloch resistance, bool encoding) {
    QuantumState joint = QuantumState::tensor(state_from_bloch(current),
                                              state_from_bloch(resistance));
    if (encoding) {
        joint.apply_kraus(encoding_kraus(theta), {0, 1});
    } else {
        joint.apply_gate(m_theta(theta), {0, 1});
    }
    return bloch_vector(joint.partial_trace({1}));
}

}  // namespace

TEST_CASE("bloch vector round trip") {
    std::mt19937_64 rng(41);
    for (int it = 0; it < 20; ++it) {
        Bloch v = random_ball(rng);
        Bloch w = bloch_vector(state_from_bloch(v));
        CHECK(max_abs_component(w - v) < 1e-12);
    }
    CHECK(std::abs(bloch_vector(QuantumState::plus(1)).x - 1.0) < 1e-12);
    CHECK(std::abs(bloch_vector(QuantumState::basis(1, 1)).z + 1.0) < 1e-12);
    CHECK_THROWS_AS(state_from_bloch(Bloch{1.0, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("affine maps match the two-qubit computation") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int it = 0; it < 50; ++it) {
        const double theta = u(rng);
        Bloch cur = random_ball(rng);
        Bloch res = random_ball(rng);
        for (bool encoding : {false, true}) {
            AffineMap map = encoding ? ptm_encoding(theta, cur) : ptm_plasticity(theta, cur);
            Bloch direct = brute_step(theta, cur, res, encoding);
            Bloch affine = apply(map, res);
            CHECK(max_abs_component(direct - affine) < 1e-12);
        }
    }
}

TEST_CASE("iterate returns the trajectory including the start") {
    AffineMap map = ptm_plasticity(0.9, Bloch{0.2, -0.1, 0.5});
    Bloch v0{0.0, 0.0, 1.0};
    auto traj = iterate(map, v0, 5);
    REQUIRE(traj.size() == 6);
    CHECK(max_abs_component(traj[0] - v0) < 1e-15);
    Bloch v = v0;
    for (int t = 1; t <= 5; ++t) {
        v = apply(map, v);
        CHECK(max_abs_component(traj[t] - v) < 1e-15);
    }
}

TEST_CASE("plasticity steady state stores only the z component of the current") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int it = 0; it < 30; ++it) {
        double theta = u(rng);
        if (std::abs(std::cos(theta)) < 0.05) continue;
        Bloch cur = random_ball(rng);
        SteadyState ss = steady_state(ptm_plasticity(theta, cur));
        if (ss.degenerate) continue;
        CHECK(std::abs(ss.point.x) < 1e-9);
        CHECK(std::abs(ss.point.y) < 1e-9);
        CHECK(std::abs(ss.point.z - cur.z) < 1e-9);
        CHECK(ss.residual < 1e-10);
    }
}

TEST_CASE("encoding steady state copies the current state") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int it = 0; it < 30; ++it) {
        double theta = u(rng);
        if (std::abs(std::cos(theta)) < 0.05 || std::abs(std::sin(theta)) < 0.05) continue;
        Bloch cur = random_ball(rng);
        SteadyState ss = steady_state(ptm_encoding(theta, cur));
        if (ss.degenerate) continue;
        CHECK(max_abs_component(ss.point - cur) < 1e-9);
        CHECK(ss.residual < 1e-10);
    }
}

TEST_CASE("plasticity at zero angle with a transverse current is degenerate") {
    SteadyState ss = steady_state(ptm_plasticity(0.0, Bloch{1.0, 0.0, 0.0}));
    CHECK(ss.degenerate);
    CHECK(ss.family_dim == 1);
    Bloch b = ss.family_basis[0];
    CHECK(std::abs(std::abs(b.x) - 1.0) < 1e-9);
    CHECK(std::abs(b.y) < 1e-9);
    CHECK(std::abs(b.z) < 1e-9);
    // Every member of the reported family really is fixed.
    AffineMap map = ptm_plasticity(0.0, Bloch{1.0, 0.0, 0.0});
    for (double s : {-0.5, 0.25, 0.9}) {
        Bloch v = ss.point + s * b;
        CHECK(max_abs_component(apply(map, v) - v) < 1e-10);
    }
}

TEST_CASE("iteration converges to the steady state") {
    const double theta = 7.0 * kPi / 16.0;
    Bloch cur{0.0, 0.0, 1.0};
    AffineMap map = ptm_plasticity(theta, cur);
    SteadyState ss = steady_state(map);
    auto traj = iterate(map, Bloch{1.0, 0.0, 0.0}, 800);
    CHECK(max_abs_component(traj.back() - ss.point) < 1e-6);
    // Distance to the fixed point contracts by sin^2 theta per step.
    const double rate = std::sin(theta) * std::sin(theta);
    double prev = norm(traj[100] - ss.point);
    double next = norm(traj[101] - ss.point);
    CHECK(next == doctest::Approx(rate * prev).epsilon(1e-6));
}

TEST_CASE("both channel families are completely positive") {
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int it = 0; it < 25; ++it) {
        const double theta = u(rng);
        Bloch cur = random_ball(rng);
        CHECK(is_cptp(ptm_plasticity(theta, cur)));
        CHECK(is_cptp(ptm_encoding(theta, cur)));
    }
}

TEST_CASE("choi matrix flags a non physical map") {
    AffineMap bad;
    bad.e = Mat3::identity();
    bad.e(0, 0) = 1.2;
    CHECK_FALSE(is_cptp(bad));
    CHECK(min_choi_eigenvalue(bad) < -1e-3);
}

TEST_CASE("choi matrix of the identity map is the bell projector") {
    AffineMap id;
    id.e = Mat3::identity();
    CMatrix choi = choi_matrix(id);
    REQUIRE(choi.rows() == 4);
    // |phi+><phi+| has entries 1/2 at the four corners of the {00, 11} block.
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const bool corner = (r == 0 || r == 3) && (c == 0 || c == 3);
            CHECK(std::abs(choi(r, c) - (corner ? cplx(0.5) : cplx(0.0))) < 1e-12);
        }
}

TEST_CASE("ptm construction rejects currents outside the bloch ball") {
    CHECK_THROWS_AS(ptm_plasticity(0.3, Bloch{1.5, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(ptm_encoding(0.3, Bloch{0.0, 1.5, 0.0}), std::invalid_argument);
}
