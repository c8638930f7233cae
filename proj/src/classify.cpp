#include "memq/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

namespace memq {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

uint64_t splitmix64(uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Independent per-restart seed stream: restart r always gets the same seed
// no matter how restarts are scheduled across threads.
uint64_t stream_seed(uint64_t seed, uint64_t index) {
    uint64_t s = seed;
    uint64_t v = 0;
    for (uint64_t i = 0; i <= index; ++i) v = splitmix64(s);
    return v;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

void check_lengths(const NetworkSpec& spec, const std::vector<double>& phi,
                   const std::vector<double>& theta) {
    const size_t conns = spec.connections.size();
    if (phi.size() != conns + static_cast<size_t>(spec.n))
        throw std::invalid_argument("objective: phi length does not match network");
    if (theta.size() != conns)
        throw std::invalid_argument("objective: theta length does not match network");
}

double pairwise_distance_sum(const std::vector<OutcomeDistribution>& dists) {
    double total = 0.0;
    for (size_t a = 0; a < dists.size(); ++a)
        for (size_t b = a + 1; b < dists.size(); ++b)
            total += distribution_distance(dists[a], dists[b]);
    return total;
}

// Reusable evaluation context: one per optimizer worker so parallel restarts
// never share mutable state.
struct Evaluator {
    const ClassificationTask* task;
    NetworkSpec spec;
    std::vector<OutcomeDistribution> dists;

    explicit Evaluator(const ClassificationTask& t) : task(&t), spec(t.network) {
        std::fill(spec.phi.begin(), spec.phi.end(), 0.0);
        std::fill(spec.theta.begin(), spec.theta.end(), 0.0);
    }

    double operator()(const std::vector<double>& x) {
        if (task->frozen_phi) {
            std::copy(x.begin(), x.end(), spec.theta.begin());
        } else {
            const size_t np = spec.phi.size();
            std::copy(x.begin(), x.begin() + np, spec.phi.begin());
            std::copy(x.begin() + np, x.end(), spec.theta.begin());
        }
        dists.clear();
        for (const auto& state : task->class_states) dists.push_back(forward(spec, state));
        return pairwise_distance_sum(dists);
    }
};

struct SearchRun {
    std::vector<double> best_x;
    double best_value = -std::numeric_limits<double>::infinity();
    long long evaluations = 0;
    std::vector<double> trajectory;
};

// Adaptive Nelder-Mead (expansion/contraction/shrink coefficients scaled with
// dimension), maximizing f. A collapsed simplex is re-seeded around its best
// vertex with randomized edge lengths instead of terminating, so the full
// evaluation budget is always spent.
template <typename F>
SearchRun simplex_search(F&& f, std::vector<double> x0, double step, long long budget,
                         std::mt19937_64& rng) {
    const int n = static_cast<int>(x0.size());
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / n;
    const double gamma = 0.75 - 1.0 / (2.0 * n);
    const double delta = 1.0 - 1.0 / n;

    std::vector<std::vector<double>> simplex;
    simplex.reserve(n + 1);
    simplex.push_back(x0);
    for (int i = 0; i < n; ++i) {
        auto xi = x0;
        xi[i] += step;
        simplex.push_back(std::move(xi));
    }
    std::vector<double> vals(n + 1);
    for (int i = 0; i <= n; ++i) vals[i] = f(simplex[i]);
    long long evals = n + 1;

    SearchRun run;
    auto record = [&] {
        int bi = 0;
        for (int i = 1; i <= n; ++i)
            if (vals[i] > vals[bi]) bi = i;
        if (vals[bi] > run.best_value) {
            run.best_value = vals[bi];
            run.best_x = simplex[bi];
        }
        run.trajectory.push_back(run.best_value);
    };
    record();

    std::vector<int> order(n + 1);
    std::vector<double> centroid(n), candidate(n);
    while (evals < budget) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] > vals[b]; });
        {
            std::vector<std::vector<double>> tmp(n + 1);
            std::vector<double> tvals(n + 1);
            for (int i = 0; i <= n; ++i) {
                tmp[i] = std::move(simplex[order[i]]);
                tvals[i] = vals[order[i]];
            }
            simplex.swap(tmp);
            vals.swap(tvals);
        }

        if (std::abs(vals[0] - vals[n]) < 1e-12) {
            for (int i = 1; i <= n; ++i) {
                simplex[i] = simplex[0];
                const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
                simplex[i][i - 1] += step * uniform(rng, 0.1, 0.5) * sign;
                vals[i] = f(simplex[i]);
            }
            evals += n;
            record();
            continue;
        }

        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += simplex[i][j];
            centroid[j] = s / n;
        }
        for (int j = 0; j < n; ++j) candidate[j] = centroid[j] + alpha * (centroid[j] - simplex[n][j]);
        double fr = f(candidate);
        ++evals;
        if (fr > vals[0]) {
            std::vector<double> expanded(n);
            for (int j = 0; j < n; ++j) expanded[j] = centroid[j] + beta * (candidate[j] - centroid[j]);
            double fe = f(expanded);
            ++evals;
            if (fe > fr) {
                simplex[n] = std::move(expanded);
                vals[n] = fe;
            } else {
                simplex[n] = candidate;
                vals[n] = fr;
            }
        } else if (fr > vals[n - 1]) {
            simplex[n] = candidate;
            vals[n] = fr;
        } else {
            std::vector<double> contracted(n);
            for (int j = 0; j < n; ++j) contracted[j] = centroid[j] + gamma * (simplex[n][j] - centroid[j]);
            double fc = f(contracted);
            ++evals;
            if (fc > vals[n]) {
                simplex[n] = std::move(contracted);
                vals[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    for (int j = 0; j < n; ++j)
                        simplex[i][j] = simplex[0][j] + delta * (simplex[i][j] - simplex[0][j]);
                    vals[i] = f(simplex[i]);
                }
                evals += n;
            }
        }
        record();
    }
    run.evaluations = evals;
    return run;
}

void check_task(const ClassificationTask& task) {
    validate(task.network);
    if (task.class_states.size() < 2)
        throw std::invalid_argument("classification task needs at least 2 class states");
    for (const auto& s : task.class_states) {
        if (s.qubits() != task.network.m)
            throw std::invalid_argument("class state qubit count does not match network inputs");
    }
}

nlohmann::ordered_json result_json(const ClassificationTask& task, const OptimizationResult& result) {
    nlohmann::ordered_json j;
    j["task"] = task_kind_name(task.kind);
    j["m"] = task.network.m;
    j["n"] = task.network.n;
    j["frozen_phi"] = task.frozen_phi;
    j["classes"] = task.class_states.size();
    j["pairs"] = class_pair_count(task);
    j["best_objective"] = result.best_objective;
    j["mean_pairwise_distance"] = result.best_objective / class_pair_count(task);
    j["best_restart"] = result.best_restart;
    j["evaluations"] = result.evaluations;
    j["best_phi"] = result.best_phi;
    j["best_theta"] = result.best_theta;
    j["trajectory"] = result.trajectory;
    return j;
}

}  // namespace

const char* task_kind_name(TaskKind kind) {
    switch (kind) {
        case TaskKind::BellPairs: return "bell";
        case TaskKind::GhzVsPlus: return "ghz-plus";
    }
    throw std::invalid_argument("unknown task kind");
}

QuantumState bell_state(int k) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (k) {
        case 1: return QuantumState::pure(2, {r, 0.0, 0.0, r});
        case 2: return QuantumState::pure(2, {r, 0.0, 0.0, -r});
        case 3: return QuantumState::pure(2, {0.0, r, r, 0.0});
        case 4: return QuantumState::pure(2, {0.0, r, -r, 0.0});
        default: throw std::invalid_argument("bell_state: k must be in 1..4");
    }
}

QuantumState ghz_state(int m) {
    if (m < 1) throw std::invalid_argument("ghz_state: m must be >= 1");
    std::vector<cplx> amps(size_t{1} << m, 0.0);
    amps.front() = 1.0 / std::sqrt(2.0);
    amps.back() = 1.0 / std::sqrt(2.0);
    return QuantumState::pure(m, std::move(amps));
}

QuantumState plus_state(int m) {
    if (m < 1) throw std::invalid_argument("plus_state: m must be >= 1");
    return QuantumState::plus(m);
}

ClassificationTask classification_task(TaskKind kind, int m, int n, bool frozen_phi) {
    ClassificationTask task;
    task.kind = kind;
    task.frozen_phi = frozen_phi;
    task.network = fully_connected(m, n);
    switch (kind) {
        case TaskKind::BellPairs:
            if (m != 2) throw std::invalid_argument("bell_pairs task requires m == 2");
            for (int k = 1; k <= 4; ++k) task.class_states.push_back(bell_state(k));
            break;
        case TaskKind::GhzVsPlus:
            task.class_states.push_back(ghz_state(m));
            task.class_states.push_back(plus_state(m));
            break;
    }
    check_task(task);
    return task;
}

int parameter_dimension(const ClassificationTask& task) {
    const int conns = static_cast<int>(task.network.connections.size());
    const int phi_dim = conns + task.network.n;
    return task.frozen_phi ? conns : phi_dim + conns;
}

double objective(const ClassificationTask& task, const std::vector<double>& phi,
                 const std::vector<double>& theta) {
    check_task(task);
    check_lengths(task.network, phi, theta);
    NetworkSpec spec = task.network;
    spec.phi = phi;
    spec.theta = theta;
    std::vector<OutcomeDistribution> dists;
    dists.reserve(task.class_states.size());
    for (const auto& state : task.class_states) dists.push_back(forward(spec, state));
    return pairwise_distance_sum(dists);
}

int class_pair_count(const ClassificationTask& task) {
    const int k = static_cast<int>(task.class_states.size());
    return k * (k - 1) / 2;
}

double quantum_upper_bound(const QuantumState& a, const QuantumState& b) {
    if (!a.is_pure() || !b.is_pure())
        throw std::invalid_argument("quantum_upper_bound requires pure states");
    if (a.qubits() != b.qubits())
        throw std::invalid_argument("quantum_upper_bound requires equal qubit counts");
    const double f = std::norm(a.overlap(b));
    return std::sqrt(std::max(0.0, 1.0 - f));
}

double classical_baseline(int m) {
    if (m < 1) throw std::invalid_argument("classical_baseline: m must be >= 1");
    return 1.0 - std::pow(2.0, -(m - 1));
}

OptimizationResult optimize(const ClassificationTask& task, const OptimizeOptions& options) {
    check_task(task);
    if (options.budget < 1) throw std::invalid_argument("optimize: budget must be >= 1");
    if (options.restarts < 1) throw std::invalid_argument("optimize: restarts must be >= 1");
    if (!(options.step > 0.0)) throw std::invalid_argument("optimize: step must be positive");

    const int dim = parameter_dimension(task);
    const int restarts = options.restarts;
    if (!options.initial.empty() && options.initial.size() != static_cast<size_t>(dim))
        throw std::invalid_argument("optimize: initial point has the wrong dimension");

    auto run_restart = [&](int r) {
        std::mt19937_64 rng(stream_seed(options.seed, static_cast<uint64_t>(r)));
        std::vector<double> x0(dim);
        if (r == 0 && !options.initial.empty()) {
            x0 = options.initial;
        } else {
            for (auto& v : x0) v = uniform(rng, -kPi, kPi);
        }
        Evaluator eval(task);
        return simplex_search(eval, std::move(x0), options.step, options.budget, rng);
    };

    int threads = thread_cap();
    if (options.threads > 0) threads = std::min(threads, options.threads);
    threads = std::max(1, std::min(threads, restarts));

    std::vector<SearchRun> runs(restarts);
    if (threads == 1) {
        for (int r = 0; r < restarts; ++r) runs[r] = run_restart(r);
    } else {
        std::vector<std::future<void>> futures;
        futures.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            futures.push_back(std::async(std::launch::async, [&, t] {
                for (int r = t; r < restarts; r += threads) runs[r] = run_restart(r);
            }));
        }
        for (auto& f : futures) f.get();
    }

    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (runs[r].best_value > runs[best].best_value) best = r;

    OptimizationResult result;
    result.best_restart = best;
    result.best_objective = runs[best].best_value;
    result.trajectory = runs[best].trajectory;
    std::vector<double> best_x = runs[best].best_x;
    for (const auto& run : runs) result.evaluations += run.evaluations;

    const long long refine_budget = options.refine_budget > 0 ? options.refine_budget : options.budget;
    for (int round = 0; round < options.refine_rounds; ++round) {
        std::mt19937_64 rng(stream_seed(options.seed, static_cast<uint64_t>(restarts + round)));
        Evaluator eval(task);
        const double step = options.step * std::pow(0.25, round + 1);
        SearchRun run = simplex_search(eval, best_x, step, refine_budget, rng);
        result.evaluations += run.evaluations;
        result.trajectory.insert(result.trajectory.end(), run.trajectory.begin(), run.trajectory.end());
        if (run.best_value > result.best_objective) {
            result.best_objective = run.best_value;
            best_x = run.best_x;
        }
    }

    const size_t phi_dim = task.network.phi.size();
    if (task.frozen_phi) {
        result.best_phi.assign(phi_dim, 0.0);
        result.best_theta = best_x;
    } else {
        result.best_phi.assign(best_x.begin(), best_x.begin() + phi_dim);
        result.best_theta.assign(best_x.begin() + phi_dim, best_x.end());
    }
    return result;
}

OptimizationResult refine_gradient(const ClassificationTask& task,
                                   const std::vector<double>& phi,
                                   const std::vector<double>& theta,
                                   const GradientOptions& options) {
    check_task(task);
    if (phi.size() != task.network.phi.size())
        throw std::invalid_argument("refine_gradient: phi length does not match network");
    if (theta.size() != task.network.theta.size())
        throw std::invalid_argument("refine_gradient: theta length does not match network");
    if (options.steps < 0)
        throw std::invalid_argument("refine_gradient: steps must be >= 0");
    if (!(options.learning_rate > 0.0))
        throw std::invalid_argument("refine_gradient: learning rate must be positive");
    if (!(options.fd_step > 0.0))
        throw std::invalid_argument("refine_gradient: probe step must be positive");

    Evaluator eval(task);
    std::copy(phi.begin(), phi.end(), eval.spec.phi.begin());

    std::vector<double> x;
    if (task.frozen_phi) {
        x = theta;
    } else {
        x = phi;
        x.insert(x.end(), theta.begin(), theta.end());
    }
    const std::size_t n = x.size();

    OptimizationResult result;
    result.best_restart = 0;
    result.best_objective = eval(x);
    result.evaluations = 1;
    result.trajectory.push_back(result.best_objective);
    std::vector<double> best_x = x;

    std::vector<double> m(n, 0.0), v(n, 0.0), g(n);
    const double h = options.fd_step;
    for (int t = 1; t <= options.steps; ++t) {
        for (std::size_t j = 0; j < n; ++j) {
            const double xj = x[j];
            x[j] = xj + h;
            const double fp = eval(x);
            x[j] = xj - h;
            const double fm = eval(x);
            x[j] = xj;
            g[j] = (fp - fm) / (2.0 * h);
        }
        for (std::size_t j = 0; j < n; ++j) {
            m[j] = 0.9 * m[j] + 0.1 * g[j];
            v[j] = 0.999 * v[j] + 0.001 * g[j] * g[j];
            const double mh = m[j] / (1.0 - std::pow(0.9, t));
            const double vh = v[j] / (1.0 - std::pow(0.999, t));
            x[j] += options.learning_rate * mh / (std::sqrt(vh) + 1e-12);
        }
        const double f = eval(x);
        result.evaluations += 2 * static_cast<long long>(n) + 1;
        if (f > result.best_objective) {
            result.best_objective = f;
            best_x = x;
        }
        result.trajectory.push_back(result.best_objective);
    }

    const std::size_t phi_dim = task.network.phi.size();
    if (task.frozen_phi) {
        result.best_phi = phi;
        result.best_theta = best_x;
    } else {
        result.best_phi.assign(best_x.begin(), best_x.begin() + phi_dim);
        result.best_theta.assign(best_x.begin() + phi_dim, best_x.end());
    }
    return result;
}

int thread_cap() {
    unsigned hc = std::thread::hardware_concurrency();
    int cap = hc == 0 ? 1 : static_cast<int>(hc);
    if (const char* env = std::getenv("MEMRISTORQ_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) cap = static_cast<int>(std::min<long>(cap, v));
    }
    return std::max(1, cap);
}

std::string task_to_json(const ClassificationTask& task) {
    nlohmann::ordered_json j;
    j["task"] = task_kind_name(task.kind);
    j["frozen_phi"] = task.frozen_phi;
    j["classes"] = task.class_states.size();
    j["parameter_dimension"] = parameter_dimension(task);
    j["network"] = nlohmann::ordered_json::parse(network_to_json(task.network));
    return j.dump(2) + "\n";
}

std::string result_to_json(const ClassificationTask& task, const OptimizationResult& result) {
    return result_json(task, result).dump(2) + "\n";
}

std::string trajectory_csv(const OptimizationResult& result) {
    std::ostringstream out;
    out << "iteration,objective\n";
    char line[64];
    for (size_t i = 0; i < result.trajectory.size(); ++i) {
        std::snprintf(line, sizeof(line), "%zu,%.12g\n", i, result.trajectory[i]);
        out << line;
    }
    return out.str();
}

}
