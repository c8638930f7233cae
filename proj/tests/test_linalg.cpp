#include <cmath>
#include <random>

#include <doctest.h>

#include "memq/linalg.hpp"

using namespace memq;

namespace {

CMatrix pauli_z2() {
    CMatrix z(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return z;
}

CMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) a(r, c) = cplx(g(rng), g(rng));
    return a;
}

}  // namespace

TEST_CASE("identity multiplication leaves a matrix unchanged") {
    std::mt19937_64 rng(11);
    CMatrix a = random_matrix(4, rng);
    CHECK(max_abs_diff(CMatrix::identity(4) * a, a) == 0.0);
    CHECK(max_abs_diff(a * CMatrix::identity(4), a) == 0.0);
}

TEST_CASE("adjoint reverses products") {
    std::mt19937_64 rng(12);
    CMatrix a = random_matrix(3, rng);
    CMatrix b = random_matrix(3, rng);
    CHECK(max_abs_diff(adjoint(a * b), adjoint(b) * adjoint(a)) < 1e-12);
}

TEST_CASE("kronecker product matches the block definition") {
    CMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(1, 0) = cplx(0.0, 1.0);
    a(1, 1) = -1.0;
    CMatrix b = pauli_z2();
    CMatrix k = kron(a, b);
    REQUIRE(k.rows() == 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            cplx expected = a(r / 2, c / 2) * b(r % 2, c % 2);
            CHECK(std::abs(k(r, c) - expected) == 0.0);
        }
}

TEST_CASE("trace is linear and basis independent") {
    std::mt19937_64 rng(13);
    CMatrix a = random_matrix(4, rng);
    CMatrix b = random_matrix(4, rng);
    CHECK(std::abs(trace(a + b) - trace(a) - trace(b)) < 1e-12);
    CHECK(std::abs(trace(a * b) - trace(b * a)) < 1e-10);
}

TEST_CASE("unitarity and hermiticity predicates") {
    CMatrix h(2, 2);
    h(0, 0) = 2.0;
    h(0, 1) = cplx(1.0, -3.0);
    h(1, 0) = cplx(1.0, 3.0);
    h(1, 1) = -1.0;
    CHECK(is_hermitian(h, 1e-12));
    CHECK_FALSE(is_unitary(h, 1e-12));

    const double s = 1.0 / std::sqrt(2.0);
    CMatrix u(2, 2);
    u(0, 0) = s;
    u(0, 1) = s;
    u(1, 0) = s;
    u(1, 1) = -s;
    CHECK(is_unitary(u, 1e-12));
}

TEST_CASE("global phase comparison ignores a common phase and nothing else") {
    std::mt19937_64 rng(14);
    CMatrix a = random_matrix(3, rng);
    const cplx phase = std::polar(1.0, 0.823);
    CMatrix b = phase * a;
    CHECK(diff_up_to_global_phase(a, b) < 1e-12);
    b(2, 2) += 0.5;
    CHECK(diff_up_to_global_phase(a, b) > 0.1);
}

TEST_CASE("hermitian eigenvalues of a known 2x2") {
    CMatrix h(2, 2);
    h(0, 0) = 1.0;
    h(0, 1) = cplx(0.0, -2.0);
    h(1, 0) = cplx(0.0, 2.0);
    h(1, 1) = 1.0;
    auto ev = hermitian_eigenvalues(h);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("hermitian eigenvalues sum to the trace on random inputs") {
    std::mt19937_64 rng(15);
    for (int it = 0; it < 20; ++it) {
        CMatrix a = random_matrix(4, rng);
        CMatrix h = cplx(0.5) * (a + adjoint(a));
        auto ev = hermitian_eigenvalues(h);
        double sum = 0.0;
        for (double v : ev) sum += v;
        CHECK(std::abs(sum - trace(h).real()) < 1e-10);
        for (std::size_t i = 1; i < ev.size(); ++i) CHECK(ev[i - 1] <= ev[i] + 1e-14);
    }
}

TEST_CASE("vector helpers") {
    Vec3 a{1.0, -2.0, 3.0};
    Vec3 b{0.5, 0.5, 0.5};
    CHECK(dot(a, b) == doctest::Approx(1.0));
    CHECK(norm(Vec3{3.0, 4.0, 0.0}) == doctest::Approx(5.0));
    CHECK(max_abs_component(a) == doctest::Approx(3.0));
    Vec3 c = a - 2.0 * b;
    CHECK(c.x == doctest::Approx(0.0));
    CHECK(c.y == doctest::Approx(-3.0));
    CHECK(c.z == doctest::Approx(2.0));
}

TEST_CASE("3x3 solve on a nonsingular system") {
    Mat3 a;
    a(0, 0) = 2.0;
    a(0, 1) = 1.0;
    a(0, 2) = -1.0;
    a(1, 0) = -3.0;
    a(1, 1) = -1.0;
    a(1, 2) = 2.0;
    a(2, 0) = -2.0;
    a(2, 1) = 1.0;
    a(2, 2) = 2.0;
    Vec3 b{8.0, -11.0, -3.0};
    auto res = solve3(a, b);
    REQUIRE_FALSE(res.singular);
    CHECK(norm(a * res.solution - b) < 1e-12);
    CHECK(res.solution.x == doctest::Approx(2.0));
    CHECK(res.solution.y == doctest::Approx(3.0));
    CHECK(res.solution.z == doctest::Approx(-1.0));
    CHECK(res.condition > 1.0);
}

TEST_CASE("3x3 solve reports a consistent singular family") {
    // Rank 2: third row is the sum of the first two.
    Mat3 a;
    a(0, 0) = 1.0;
    a(0, 1) = 0.0;
    a(0, 2) = 1.0;
    a(1, 0) = 0.0;
    a(1, 1) = 1.0;
    a(1, 2) = 1.0;
    a(2, 0) = 1.0;
    a(2, 1) = 1.0;
    a(2, 2) = 2.0;
    Vec3 b{1.0, 2.0, 3.0};
    auto res = solve3(a, b);
    REQUIRE(res.singular);
    REQUIRE(res.consistent);
    REQUIRE(res.nullity == 1);
    CHECK(norm(a * res.solution - b) < 1e-12);
    Vec3 dir = res.null_basis[0];
    CHECK(norm(dir) > 1e-12);
    CHECK(norm(a * dir - Vec3{}) < 1e-12);
    Vec3 shifted = res.solution + 0.37 * dir;
    CHECK(norm(a * shifted - b) < 1e-12);
}

TEST_CASE("3x3 solve flags an inconsistent singular system") {
    Mat3 a;
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(0, 2) = 3.0;
    a(1, 0) = 2.0;
    a(1, 1) = 4.0;
    a(1, 2) = 6.0;
    a(2, 0) = 0.0;
    a(2, 1) = 0.0;
    a(2, 2) = 1.0;
    Vec3 b{1.0, 3.0, 0.0};
    auto res = solve3(a, b);
    REQUIRE(res.singular);
    CHECK_FALSE(res.consistent);
}

TEST_CASE("3x3 solve random round trips") {
    std::mt19937_64 rng(16);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int it = 0; it < 50; ++it) {
        Mat3 a;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) a(r, c) = g(rng);
        Vec3 x{g(rng), g(rng), g(rng)};
        Vec3 b = a * x;
        auto res = solve3(a, b);
        if (res.singular) continue;
        CHECK(norm(res.solution - x) < 1e-8 * res.condition);
    }
}
