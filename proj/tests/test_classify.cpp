#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "memq/classify.hpp"
#include "memq/network.hpp"
#include "memq/state.hpp"

using namespace memq;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("labeled state constructors") {
    QuantumState b1 = bell_state(1);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(b1.amplitudes()[0] - r) < 1e-15);
    CHECK(std::abs(b1.amplitudes()[3] - r) < 1e-15);
    QuantumState b2 = bell_state(2);
    CHECK(std::abs(b2.amplitudes()[0] - r) < 1e-15);
    CHECK(std::abs(b2.amplitudes()[3] + r) < 1e-15);
    QuantumState b3 = bell_state(3);
    CHECK(std::abs(b3.amplitudes()[1] - r) < 1e-15);
    CHECK(std::abs(b3.amplitudes()[2] - r) < 1e-15);
    QuantumState b4 = bell_state(4);
    CHECK(std::abs(b4.amplitudes()[1] - r) < 1e-15);
    CHECK(std::abs(b4.amplitudes()[2] + r) < 1e-15);
    CHECK_THROWS_AS(bell_state(0), std::invalid_argument);
    CHECK_THROWS_AS(bell_state(5), std::invalid_argument);

    // Orthonormal family.
    for (int a = 1; a <= 4; ++a)
        for (int b = 1; b <= 4; ++b) {
            const double want = a == b ? 1.0 : 0.0;
            CHECK(std::abs(std::abs(bell_state(a).overlap(bell_state(b))) - want) <
                  1e-12);
        }

    // ghz(m) against the uniform superposition: overlap 2^((1-m)/2).
    for (int m = 1; m <= 6; ++m) {
        cplx ov = plus_state(m).overlap(ghz_state(m));
        CHECK(std::abs(ov - std::pow(2.0, 0.5 * (1.0 - m))) < 1e-12);
    }
}

TEST_CASE("distance bounds") {
    CHECK(quantum_upper_bound(bell_state(1), bell_state(2)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quantum_upper_bound(ghz_state(5), plus_state(5)) ==
          doctest::Approx(std::sqrt(15.0) / 4.0).epsilon(1e-12));
    CHECK(quantum_upper_bound(ghz_state(2), plus_state(2)) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(classical_baseline(1) == doctest::Approx(0.0));
    CHECK(classical_baseline(2) == doctest::Approx(0.5));
    CHECK(classical_baseline(5) == doctest::Approx(0.9375));
}

TEST_CASE("classical baseline equals the direct product measurement distance") {
    // Independent Z measurements of each qubit: ghz gives half the weight to
    // all-zeros and half to all-ones, the uniform superposition is flat.
    for (int m = 2; m <= 6; ++m) {
        const std::size_t dim = std::size_t{1} << m;
        std::vector<double> pg(dim, 0.0), pp(dim, 1.0 / static_cast<double>(dim));
        pg.front() = 0.5;
        pg.back() = 0.5;
        double dist = 0.0;
        for (std::size_t i = 0; i < dim; ++i) dist += std::abs(pg[i] - pp[i]);
        dist *= 0.5;
        CHECK(std::abs(classical_baseline(m) - dist) < 1e-12);
    }
}

TEST_CASE("task construction") {
    ClassificationTask bell = classification_task(TaskKind::BellPairs, 2, 5);
    CHECK(bell.class_states.size() == 4);
    CHECK(class_pair_count(bell) == 6);
    CHECK(parameter_dimension(bell) == 10 + 15);
    CHECK_THROWS_AS(classification_task(TaskKind::BellPairs, 3, 5),
                    std::invalid_argument);

    ClassificationTask gp = classification_task(TaskKind::GhzVsPlus, 5, 5, true);
    CHECK(gp.class_states.size() == 2);
    CHECK(class_pair_count(gp) == 1);
    CHECK(gp.frozen_phi);
    CHECK(parameter_dimension(gp) == 25);
    CHECK(std::string(task_kind_name(TaskKind::BellPairs)) == "bell");
    CHECK(std::string(task_kind_name(TaskKind::GhzVsPlus)) == "ghz-plus");
}

TEST_CASE("objective is bounded by the state overlap") {
    std::mt19937_64 rng(81);
    ClassificationTask task = classification_task(TaskKind::BellPairs, 2, 2);
    double bound = 0.0;
    for (std::size_t a = 0; a < task.class_states.size(); ++a)
        for (std::size_t b = a + 1; b < task.class_states.size(); ++b)
            bound += quantum_upper_bound(task.class_states[a], task.class_states[b]);
    for (int it = 0; it < 10; ++it) {
        auto phi = random_vector(task.network.phi.size(), rng);
        auto theta = random_vector(task.network.theta.size(), rng);
        const double val = objective(task, phi, theta);
        CHECK(val >= 0.0);
        CHECK(val <= bound + 1e-9);
    }
    CHECK_THROWS_AS(objective(task, std::vector<double>(3, 0.0),
                              std::vector<double>(4, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("identical class states cannot be separated") {
    ClassificationTask task = classification_task(TaskKind::GhzVsPlus, 2, 1);
    task.class_states[1] = task.class_states[0];
    std::mt19937_64 rng(82);
    auto phi = random_vector(task.network.phi.size(), rng);
    auto theta = random_vector(task.network.theta.size(), rng);
    CHECK(objective(task, phi, theta) < 1e-14);
}

TEST_CASE("bell discrimination anchor parameters") {
    ClassificationTask task = classification_task(TaskKind::BellPairs, 2, 2, true);
    std::vector<double> phi(6, 0.0);
    std::vector<double> theta{0.0, -1.3065, 0.0, 0.0};
    phi[1] = -0.31973;
    phi[4] = -1.5708;
    const double val = objective(task, phi, theta);
    CHECK(val / 6.0 == doctest::Approx(0.9999999999977511).epsilon(1e-12));
    CHECK(std::abs(val / 6.0 - 1.0) < 1e-4);
}

TEST_CASE("two input anchor parameters") {
    ClassificationTask task = classification_task(TaskKind::GhzVsPlus, 2, 1);
    std::vector<double> phi{kPi / 2.0, kPi / 2.0, -kPi / 4.0};
    std::vector<double> theta{0.0, 0.0};
    CHECK(objective(task, phi, theta) ==
          doctest::Approx(0.7071067811865472).epsilon(1e-10));
}

TEST_CASE("optimizer is deterministic and thread count invariant") {
    ClassificationTask task = classification_task(TaskKind::BellPairs, 2, 1, true);
    OptimizeOptions opt;
    opt.budget = 800;
    opt.restarts = 4;
    opt.seed = 7;
    opt.threads = 1;
    OptimizationResult a = optimize(task, opt);
    OptimizationResult b = optimize(task, opt);
    opt.threads = 4;
    OptimizationResult c = optimize(task, opt);
    CHECK(a.best_objective == b.best_objective);
    CHECK(a.best_objective == c.best_objective);
    CHECK(a.best_restart == c.best_restart);
    CHECK(a.evaluations == c.evaluations);
    REQUIRE(a.best_theta.size() == c.best_theta.size());
    for (std::size_t i = 0; i < a.best_theta.size(); ++i)
        CHECK(a.best_theta[i] == c.best_theta[i]);
}

TEST_CASE("optimizer output is consistent") {
    ClassificationTask task = classification_task(TaskKind::GhzVsPlus, 2, 1);
    OptimizeOptions opt;
    opt.budget = 1500;
    opt.restarts = 3;
    opt.seed = 3;
    opt.refine_rounds = 1;
    opt.refine_budget = 500;
    OptimizationResult res = optimize(task, opt);

    CHECK(res.best_restart >= 0);
    CHECK(res.best_restart < opt.restarts);
    CHECK(res.evaluations >= opt.restarts * (parameter_dimension(task) + 1));
    REQUIRE(!res.trajectory.empty());
    for (std::size_t i = 1; i < res.trajectory.size(); ++i)
        CHECK(res.trajectory[i] >= res.trajectory[i - 1]);
    CHECK(res.trajectory.back() == doctest::Approx(res.best_objective).epsilon(1e-15));
    CHECK(objective(task, res.best_phi, res.best_theta) ==
          doctest::Approx(res.best_objective).epsilon(1e-12));
    // This small instance reliably reaches a strong separator.
    CHECK(res.best_objective > 0.5);
}

TEST_CASE("freezing the input rotations cannot help") {
    OptimizeOptions opt;
    opt.budget = 2000;
    opt.restarts = 3;
    opt.seed = 11;
    ClassificationTask frozen = classification_task(TaskKind::GhzVsPlus, 2, 1, true);
    ClassificationTask free_task = classification_task(TaskKind::GhzVsPlus, 2, 1);
    OptimizationResult rf = optimize(frozen, opt);
    OptimizationResult rl = optimize(free_task, opt);
    CHECK(rf.best_objective <= rl.best_objective + 1e-9);
    for (double p : rf.best_phi) CHECK(p == 0.0);
}

TEST_CASE("result serialisation") {
    ClassificationTask task = classification_task(TaskKind::GhzVsPlus, 2, 1);
    OptimizeOptions opt;
    opt.budget = 400;
    opt.restarts = 2;
    opt.seed = 5;
    OptimizationResult res = optimize(task, opt);

    nlohmann::json j = nlohmann::json::parse(result_to_json(task, res));
    CHECK(j.at("task").get<std::string>() == "ghz-plus");
    CHECK(j.at("m").get<int>() == 2);
    CHECK(j.at("n").get<int>() == 1);
    CHECK_FALSE(j.at("frozen_phi").get<bool>());
    CHECK(j.at("pairs").get<int>() == 1);
    CHECK(j.at("best_objective").get<double>() ==
          doctest::Approx(res.best_objective).epsilon(1e-15));
    CHECK(j.at("best_phi").size() == task.network.phi.size());
    CHECK(j.at("best_theta").size() == task.network.theta.size());
    CHECK(j.at("trajectory").size() == res.trajectory.size());

    std::istringstream csv(trajectory_csv(res));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "iteration,objective");
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == res.trajectory.size());

    nlohmann::json tj = nlohmann::json::parse(task_to_json(task));
    CHECK(tj.at("task").get<std::string>() == "ghz-plus");
    CHECK(tj.at("classes").get<int>() == 2);
}

TEST_CASE("thread cap honours the environment override") {
    setenv("MEMRISTORQ_THREADS", "1", 1);
    CHECK(thread_cap() == 1);
    setenv("MEMRISTORQ_THREADS", "0", 1);
    CHECK(thread_cap() >= 1);
    unsetenv("MEMRISTORQ_THREADS");
    CHECK(thread_cap() >= 1);
}

TEST_CASE("optimizer validates its options") {
    ClassificationTask task = classification_task(TaskKind::GhzVsPlus, 2, 1);
    OptimizeOptions opt;
    opt.budget = 0;
    CHECK_THROWS_AS(optimize(task, opt), std::invalid_argument);
    opt.budget = 100;
    opt.restarts = 0;
    CHECK_THROWS_AS(optimize(task, opt), std::invalid_argument);
}

TEST_CASE("gradient refinement climbs from a suboptimal point") {
    ClassificationTask task = classification_task(TaskKind::GhzVsPlus, 2, 1);
    std::vector<double> phi{0.9, 1.1, -0.4};
    std::vector<double> theta{0.2, -0.1};
    const double start = objective(task, phi, theta);

    GradientOptions opt;
    opt.steps = 150;
    OptimizationResult res = refine_gradient(task, phi, theta, opt);

    CHECK(res.best_objective > start + 1e-3);
    const double bound =
        quantum_upper_bound(ghz_state(2), plus_state(2)) * class_pair_count(task);
    CHECK(res.best_objective <= bound + 1e-9);
    CHECK(objective(task, res.best_phi, res.best_theta) ==
          doctest::Approx(res.best_objective).epsilon(1e-12));

    CHECK(res.trajectory.size() == static_cast<std::size_t>(opt.steps) + 1);
    CHECK(std::is_sorted(res.trajectory.begin(), res.trajectory.end()));
    CHECK(res.trajectory.back() == res.best_objective);
    const long long dim = 5;
    CHECK(res.evaluations == 1 + opt.steps * (2 * dim + 1));
    CHECK(res.best_restart == 0);

    OptimizationResult again = refine_gradient(task, phi, theta, opt);
    CHECK(again.best_objective == res.best_objective);
    CHECK(again.best_phi == res.best_phi);
    CHECK(again.best_theta == res.best_theta);
}

TEST_CASE("gradient refinement keeps phi fixed on a frozen task") {
    ClassificationTask task = classification_task(TaskKind::GhzVsPlus, 2, 1, true);
    std::vector<double> phi(task.network.phi.size(), 0.0);
    std::vector<double> theta{0.4, 0.3};
    const double start = objective(task, phi, theta);

    GradientOptions opt;
    opt.steps = 120;
    OptimizationResult res = refine_gradient(task, phi, theta, opt);

    CHECK(res.best_phi == phi);
    CHECK(res.best_objective >= start);
    CHECK(res.best_theta != theta);
    CHECK(res.evaluations == 1 + opt.steps * (2 * 2 + 1));
}

TEST_CASE("gradient refinement validates its arguments") {
    ClassificationTask task = classification_task(TaskKind::GhzVsPlus, 2, 1);
    std::vector<double> phi{0.0, 0.0, 0.0};
    std::vector<double> theta{0.0, 0.0};
    GradientOptions opt;

    CHECK_THROWS_AS(refine_gradient(task, {0.0}, theta, opt), std::invalid_argument);
    CHECK_THROWS_AS(refine_gradient(task, phi, {0.0}, opt), std::invalid_argument);
    opt.steps = -1;
    CHECK_THROWS_AS(refine_gradient(task, phi, theta, opt), std::invalid_argument);
    opt.steps = 5;
    opt.learning_rate = 0.0;
    CHECK_THROWS_AS(refine_gradient(task, phi, theta, opt), std::invalid_argument);
    opt.learning_rate = 0.02;
    opt.fd_step = 0.0;
    CHECK_THROWS_AS(refine_gradient(task, phi, theta, opt), std::invalid_argument);

    opt.fd_step = 1e-5;
    opt.steps = 0;
    OptimizationResult res = refine_gradient(task, phi, theta, opt);
    CHECK(res.evaluations == 1);
    CHECK(res.trajectory.size() == 1);
    CHECK(res.best_objective == doctest::Approx(objective(task, phi, theta)));
}
