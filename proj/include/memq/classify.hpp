#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memq/network.hpp"
#include "memq/state.hpp"

namespace memq {

// State classification: prepare a labeled family of input states, feed each
// through a memristive network, and score how well the output distributions
// separate the classes.

enum class TaskKind { BellPairs, GhzVsPlus };

const char* task_kind_name(TaskKind kind);

// The four maximally entangled two-qubit states, k in 1..4.
QuantumState bell_state(int k);
QuantumState ghz_state(int m);
QuantumState plus_state(int m);

struct ClassificationTask {
    TaskKind kind = TaskKind::GhzVsPlus;
    bool frozen_phi = false;
    std::vector<QuantumState> class_states;
    NetworkSpec network;
};

// Builds the task on a fully connected m x n network with zeroed parameters.
// BellPairs requires m == 2 and uses all four bell_state(k) classes;
// GhzVsPlus uses {ghz_state(m), plus_state(m)}.
ClassificationTask classification_task(TaskKind kind, int m, int n, bool frozen_phi = false);

// Number of free parameters the optimizer searches over: theta only when
// frozen_phi, otherwise phi followed by theta.
int parameter_dimension(const ClassificationTask& task);

// Sum of pairwise distribution distances over unordered class pairs.
double objective(const ClassificationTask& task, const std::vector<double>& phi,
                 const std::vector<double>& theta);

int class_pair_count(const ClassificationTask& task);

// sqrt(1 - |<a|b>|^2); upper-bounds the distance between any measurement
// distributions of the two pure states.
double quantum_upper_bound(const QuantumState& a, const QuantumState& b);

// Distance attainable by independent Z measurements of ghz(m) vs plus(m):
// 1 - 1/2^(m-1).
double classical_baseline(int m);

struct OptimizeOptions {
    long long budget = 50000;   // objective evaluations per restart
    int restarts = 20;
    std::uint64_t seed = 1;
    int threads = 0;            // 0: hardware limit (see thread_cap)
    double step = 0.8;          // initial simplex edge length
    int refine_rounds = 0;      // extra local runs seeded at the incumbent
    long long refine_budget = 0;  // evaluations per refine round (0: budget)
    // Optional warm start: when sized to the parameter dimension, the first
    // restart begins here instead of at a random point.
    std::vector<double> initial;
};

struct OptimizationResult {
    std::vector<double> best_phi;
    std::vector<double> best_theta;
    double best_objective = 0.0;
    int best_restart = -1;
    long long evaluations = 0;
    // Best objective seen so far, one entry per simplex iteration of the
    // winning restart (refine rounds append); non-decreasing.
    std::vector<double> trajectory;
};

// Derivative-free simplex search with uniform random restarts in [-pi, pi]^d.
// Restarts run in parallel but each consumes its own RNG stream, so the
// result depends only on the task, options, and seed. Ties between restarts
// break toward the lowest index.
OptimizationResult optimize(const ClassificationTask& task, const OptimizeOptions& options);

struct GradientOptions {
    int steps = 500;
    double learning_rate = 0.02;
    double fd_step = 1e-5;  // central-difference probe size
};

// Adam ascent with central-difference gradients, starting from the given
// point. Deterministic and single-threaded. On a frozen-phi task phi stays
// as passed and only theta moves. Returns the best point seen; trajectory
// holds the best objective after each step (steps + 1 entries).
OptimizationResult refine_gradient(const ClassificationTask& task,
                                   const std::vector<double>& phi,
                                   const std::vector<double>& theta,
                                   const GradientOptions& options = {});

// Hardware concurrency, capped by the MEMRISTORQ_THREADS environment variable.
int thread_cap();

std::string task_to_json(const ClassificationTask& task);
std::string result_to_json(const ClassificationTask& task, const OptimizationResult& result);
// CSV with header "iteration,objective".
std::string trajectory_csv(const OptimizationResult& result);

}
