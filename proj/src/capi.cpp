#include "memristorq.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "memq/channels.hpp"
#include "memq/classify.hpp"
#include "memq/compiler.hpp"
#include "memq/experiments.hpp"
#include "memq/gates.hpp"
#include "memq/network.hpp"
#include "memq/state.hpp"

#ifndef MQ_VERSION
#define MQ_VERSION "0.0.0"
#endif

struct mq_table {
    std::vector<std::string> names;
    std::vector<double> values;
    int64_t rows = 0;
    int64_t cols = 0;
};

namespace {

thread_local std::string g_last_error;

mq_status fail(mq_status code, const char* message) {
    g_last_error = message;
    return code;
}

template <typename F>
mq_status guarded(F&& body) {
    try {
        return body();
    } catch (const std::invalid_argument& e) {
        return fail(MQ_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(MQ_ERR_RUNTIME, "out of memory");
    } catch (const std::exception& e) {
        return fail(MQ_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(MQ_ERR_RUNTIME, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p == nullptr) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

mq_table* make_table(std::vector<std::string> names, int64_t rows) {
    auto* t = new mq_table;
    t->names = std::move(names);
    t->cols = static_cast<int64_t>(t->names.size());
    t->rows = rows;
    t->values.assign(static_cast<size_t>(rows) * static_cast<size_t>(t->cols), 0.0);
    return t;
}

memq::cplx eta_value(int eta_imag) {
    return eta_imag ? memq::cplx(0.0, 1.0) : memq::cplx(1.0, 0.0);
}

memq::AffineMap map_for_mode(double theta, int mode, const double current[3]) {
    const memq::Vec3 v{current[0], current[1], current[2]};
    if (mode == 0) return memq::ptm_plasticity(theta, v);
    if (mode == 1) return memq::ptm_encoding(theta, v);
    throw std::invalid_argument("mode must be 0 (plasticity) or 1 (encoding)");
}

memq::QuantumState prepared_current(double rz, double rx) {
    memq::QuantumState state = memq::QuantumState::basis(1, 0);
    state.apply_gate(memq::gates::rx(2.0 * rx), {0});
    state.apply_gate(memq::gates::rz(2.0 * rz), {0});
    return state;
}

mq_table* loop_table(const std::vector<memq::LoopPoint>& points) {
    mq_table* t = make_table({"t", "zc_in", "zc_out", "zr_out"}, static_cast<int64_t>(points.size()));
    for (size_t i = 0; i < points.size(); ++i) {
        t->values[4 * i + 0] = static_cast<double>(points[i].t);
        t->values[4 * i + 1] = points[i].zc_in;
        t->values[4 * i + 2] = points[i].zc_out;
        t->values[4 * i + 3] = points[i].zr_out;
    }
    return t;
}

double uniform01(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

memq::TaskKind task_kind_from_name(const char* task) {
    const std::string name(task);
    if (name == "bell") return memq::TaskKind::BellPairs;
    if (name == "ghz-plus") return memq::TaskKind::GhzVsPlus;
    throw std::invalid_argument("task must be \"bell\" or \"ghz-plus\"");
}

}  // namespace

extern "C" {

const char* mq_version(void) { return MQ_VERSION; }

const char* mq_last_error(void) { return g_last_error.c_str(); }

void mq_string_free(char* s) { std::free(s); }

void mq_table_free(mq_table* t) { delete t; }

int64_t mq_table_rows(const mq_table* t) { return t ? t->rows : 0; }

int64_t mq_table_cols(const mq_table* t) { return t ? t->cols : 0; }

const char* mq_table_column_name(const mq_table* t, int64_t col) {
    if (t == nullptr || col < 0 || col >= t->cols) return nullptr;
    return t->names[static_cast<size_t>(col)].c_str();
}

const double* mq_table_data(const mq_table* t) { return t ? t->values.data() : nullptr; }

mq_status mq_table_value(const mq_table* t, int64_t row, int64_t col, double* out) {
    if (t == nullptr || out == nullptr) return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    if (row < 0 || row >= t->rows || col < 0 || col >= t->cols)
        return fail(MQ_ERR_INVALID_ARGUMENT, "table index out of range");
    *out = t->values[static_cast<size_t>(row) * static_cast<size_t>(t->cols) +
                     static_cast<size_t>(col)];
    return MQ_OK;
}

mq_status mq_bloch_from_prep(double rz, double rx, double out[3]) {
    if (out == nullptr) return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        const memq::Vec3 v = memq::bloch_vector(prepared_current(rz, rx));
        out[0] = v.x;
        out[1] = v.y;
        out[2] = v.z;
        return MQ_OK;
    });
}

mq_status mq_channel_map(double theta, int mode, const double current[3], double out_e[9],
                         double out_k[3]) {
    if (current == nullptr || out_e == nullptr || out_k == nullptr)
        return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        const memq::AffineMap map = map_for_mode(theta, mode, current);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out_e[3 * r + c] = map.e(r, c);
        out_k[0] = map.k.x;
        out_k[1] = map.k.y;
        out_k[2] = map.k.z;
        return MQ_OK;
    });
}

mq_status mq_steady_state(double theta, int mode, const double current[3], double out_point[3],
                          int* degenerate, int* family_dim, double* residual) {
    if (current == nullptr || out_point == nullptr)
        return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        const memq::SteadyState s = memq::steady_state(map_for_mode(theta, mode, current));
        out_point[0] = s.point.x;
        out_point[1] = s.point.y;
        out_point[2] = s.point.z;
        if (degenerate != nullptr) *degenerate = s.degenerate ? 1 : 0;
        if (family_dim != nullptr) *family_dim = s.family_dim;
        if (residual != nullptr) *residual = s.residual;
        return MQ_OK;
    });
}

mq_status mq_hysteresis_loop(double theta, double delta_phi, int eta_imag, int64_t periods,
                             mq_table** out) {
    if (out == nullptr) return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        if (periods < 1) throw std::invalid_argument("periods must be >= 1");
        *out = loop_table(memq::hysteresis_loop(theta, delta_phi, eta_value(eta_imag),
                                                static_cast<int>(periods)));
        return MQ_OK;
    });
}

mq_status mq_hysteresis_last_cycle(double theta, double delta_phi, int eta_imag, int64_t periods,
                                   mq_table** out) {
    if (out == nullptr) return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        if (periods < 1) throw std::invalid_argument("periods must be >= 1");
        const auto loop = memq::hysteresis_loop(theta, delta_phi, eta_value(eta_imag),
                                                static_cast<int>(periods));
        *out = loop_table(memq::last_cycle(loop, delta_phi));
        return MQ_OK;
    });
}

mq_status mq_hardware_segments(double theta, double delta_phi, int eta_imag, mq_table** out) {
    if (out == nullptr) return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        const auto rows = memq::hardware_segments(theta, delta_phi, eta_value(eta_imag));
        mq_table* t = make_table({"segment", "t", "zc_in", "zc_out", "zr_out"},
                                 static_cast<int64_t>(rows.size()));
        for (size_t i = 0; i < rows.size(); ++i) {
            t->values[5 * i + 0] = static_cast<double>(rows[i].segment);
            t->values[5 * i + 1] = static_cast<double>(rows[i].t);
            t->values[5 * i + 2] = rows[i].zc_in;
            t->values[5 * i + 3] = rows[i].zc_out;
            t->values[5 * i + 4] = rows[i].zr_out;
        }
        *out = t;
        return MQ_OK;
    });
}

mq_status mq_plasticity_trace(double theta, mq_table** out) {
    if (out == nullptr) return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        const memq::ExperimentTrace trace = memq::run_trace(memq::ltp_ltd_schedule(theta));
        mq_table* t = make_table({"t", "zc_in", "zc_out", "zr_out", "xr", "yr", "zr"},
                                 static_cast<int64_t>(trace.rows.size()));
        for (size_t i = 0; i < trace.rows.size(); ++i) {
            const memq::TraceRow& r = trace.rows[i];
            double* v = t->values.data() + 7 * i;
            v[0] = static_cast<double>(r.t);
            v[1] = r.zc_in;
            v[2] = r.zc_out;
            v[3] = r.zr_out;
            v[4] = r.xr;
            v[5] = r.yr;
            v[6] = r.zr;
        }
        *out = t;
        return MQ_OK;
    });
}

mq_status mq_encoding_trace(double theta, double rz, double rx, int64_t steps, mq_table** out) {
    if (out == nullptr) return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        if (steps < 1) throw std::invalid_argument("steps must be >= 1");
        const memq::DriveSchedule schedule = memq::constant_schedule(
            theta, prepared_current(rz, rx), static_cast<int>(steps), memq::UpdateRule::Encoding);
        const memq::ExperimentTrace trace = memq::run_trace(schedule);
        mq_table* t = make_table({"t", "zc_in", "zc_out", "zr_out", "xr", "yr", "zr", "fidelity"},
                                 static_cast<int64_t>(trace.rows.size()));
        for (size_t i = 0; i < trace.rows.size(); ++i) {
            const memq::TraceRow& r = trace.rows[i];
            double* v = t->values.data() + 8 * i;
            v[0] = static_cast<double>(r.t);
            v[1] = r.zc_in;
            v[2] = r.zc_out;
            v[3] = r.zr_out;
            v[4] = r.xr;
            v[5] = r.yr;
            v[6] = r.zr;
            v[7] = r.fidelity;
        }
        *out = t;
        return MQ_OK;
    });
}

mq_status mq_compile(const char* task, double phi, double theta, int visit_once, int random_cases,
                     uint64_t seed, char** json_out) {
    if (task == nullptr || json_out == nullptr) return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        if (random_cases < 0) throw std::invalid_argument("random_cases must be >= 0");
        const std::string name(task);
        memq::ConnectionProgram program;
        if (name == "write") {
            program = memq::compile_write();
        } else if (name == "read") {
            program = memq::compile_read();
        } else if (name == "rotate") {
            program = memq::compile_single_qubit(phi, theta, visit_once != 0);
        } else if (name == "cnot") {
            program = memq::compile_cnot();
        } else {
            throw std::invalid_argument("task must be one of write, read, rotate, cnot");
        }
        const memq::VerifyReport report = memq::verify_program(program, random_cases, seed);
        nlohmann::ordered_json j = nlohmann::ordered_json::parse(memq::program_to_json(program));
        j["verification"] = {{"verified", report.verified},
                             {"max_error", report.max_error},
                             {"cases", report.cases}};
        *json_out = dup_string(j.dump(2) + "\n");
        return MQ_OK;
    });
}

mq_status mq_network_template(int m, int n, char** json_out) {
    if (json_out == nullptr) return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        *json_out = dup_string(memq::network_to_json(memq::fully_connected(m, n)));
        return MQ_OK;
    });
}

mq_status mq_network_eval(const char* spec_json, const char* state_kind, uint64_t basis_index,
                          mq_table** out) {
    if (spec_json == nullptr || state_kind == nullptr || out == nullptr)
        return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        const memq::NetworkSpec spec = memq::network_from_json(spec_json);
        const std::string kind(state_kind);
        memq::QuantumState input = memq::QuantumState::basis(1, 0);
        if (kind == "ghz") {
            input = memq::ghz_state(spec.m);
        } else if (kind == "plus") {
            input = memq::plus_state(spec.m);
        } else if (kind == "basis") {
            if (basis_index >= (std::uint64_t{1} << spec.m))
                throw std::invalid_argument("basis index out of range for m input qubits");
            input = memq::QuantumState::basis(spec.m, basis_index);
        } else {
            throw std::invalid_argument("state_kind must be one of ghz, plus, basis");
        }
        const memq::OutcomeDistribution dist = memq::forward(spec, input);
        mq_table* t = make_table({"outcome", "probability"}, static_cast<int64_t>(dist.size()));
        for (size_t i = 0; i < dist.size(); ++i) {
            t->values[2 * i + 0] = static_cast<double>(i);
            t->values[2 * i + 1] = dist[i];
        }
        *out = t;
        return MQ_OK;
    });
}

mq_status mq_sample_counts(const mq_table* distribution, int64_t shots, uint64_t seed,
                           mq_table** out) {
    if (distribution == nullptr || out == nullptr)
        return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        if (shots < 1) throw std::invalid_argument("shots must be >= 1");
        if (distribution->cols != 2)
            throw std::invalid_argument("distribution table must have two columns");
        const int64_t n = distribution->rows;
        if (n < 1) throw std::invalid_argument("distribution table is empty");
        double total = 0.0;
        for (int64_t i = 0; i < n; ++i) {
            const double p = distribution->values[2 * i + 1];
            if (!(p >= 0.0)) throw std::invalid_argument("probabilities must be nonnegative");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-6)
            throw std::invalid_argument("probabilities must sum to 1");

        std::vector<int64_t> counts(static_cast<size_t>(n), 0);
        std::uint64_t rng = seed;
        for (int64_t s = 0; s < shots; ++s) {
            const double u = uniform01(rng) * total;
            double acc = 0.0;
            int64_t pick = n - 1;
            for (int64_t i = 0; i < n; ++i) {
                acc += distribution->values[2 * i + 1];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
            ++counts[static_cast<size_t>(pick)];
        }
        mq_table* t = make_table({"outcome", "count"}, n);
        for (int64_t i = 0; i < n; ++i) {
            t->values[2 * i + 0] = distribution->values[2 * i + 0];
            t->values[2 * i + 1] = static_cast<double>(counts[static_cast<size_t>(i)]);
        }
        *out = t;
        return MQ_OK;
    });
}

mq_status mq_classify(const char* task, int m, int n, int frozen_phi, int64_t budget, int restarts,
                      uint64_t seed, int threads, int refine_rounds, int64_t refine_budget,
                      char** result_json, char** trajectory_csv) {
    if (task == nullptr) return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        const memq::ClassificationTask ct =
            memq::classification_task(task_kind_from_name(task), m, n, frozen_phi != 0);
        memq::OptimizeOptions options;
        options.budget = budget;
        options.restarts = restarts;
        options.seed = seed;
        options.threads = threads;
        options.refine_rounds = refine_rounds;
        options.refine_budget = refine_budget;
        const memq::OptimizationResult result = memq::optimize(ct, options);
        if (result_json != nullptr) *result_json = dup_string(memq::result_to_json(ct, result));
        if (trajectory_csv != nullptr) *trajectory_csv = dup_string(memq::trajectory_csv(result));
        return MQ_OK;
    });
}

mq_status mq_classify_objective(const char* task, int m, int n, const double* phi, int64_t phi_len,
                                const double* theta, int64_t theta_len, double* out_objective,
                                double* out_mean_distance) {
    if (task == nullptr || phi == nullptr || theta == nullptr || out_objective == nullptr)
        return fail(MQ_ERR_NULL_ARGUMENT, "null argument");
    return guarded([&] {
        if (phi_len < 0 || theta_len < 0) throw std::invalid_argument("negative parameter length");
        const memq::ClassificationTask ct =
            memq::classification_task(task_kind_from_name(task), m, n, false);
        const std::vector<double> phi_v(phi, phi + phi_len);
        const std::vector<double> theta_v(theta, theta + theta_len);
        const double value = memq::objective(ct, phi_v, theta_v);
        *out_objective = value;
        if (out_mean_distance != nullptr)
            *out_mean_distance = value / memq::class_pair_count(ct);
        return MQ_OK;
    });
}

}  // extern "C"
