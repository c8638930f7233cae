#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "memristorq.h"

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

using ordered_json = nlohmann::ordered_json;

struct TableGuard {
    mq_table* t = nullptr;
    ~TableGuard() { mq_table_free(t); }
};

struct StringGuard {
    char* s = nullptr;
    ~StringGuard() { mq_string_free(s); }
};

[[noreturn]] void api_fail() { throw std::runtime_error(mq_last_error()); }

void check(mq_status status) {
    if (status != MQ_OK) api_fail();
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string table_to_csv(const mq_table* t) {
    std::string out;
    const int64_t rows = mq_table_rows(t);
    const int64_t cols = mq_table_cols(t);
    for (int64_t c = 0; c < cols; ++c) {
        if (c) out += ',';
        out += mq_table_column_name(t, c);
    }
    out += '\n';
    const double* data = mq_table_data(t);
    for (int64_t r = 0; r < rows; ++r) {
        for (int64_t c = 0; c < cols; ++c) {
            if (c) out += ',';
            out += format_value(data[r * cols + c]);
        }
        out += '\n';
    }
    return out;
}

ordered_json json_number(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15)
        return static_cast<int64_t>(v);
    return v;
}

std::string table_to_json(const mq_table* t) {
    ordered_json rows = ordered_json::array();
    const int64_t n_rows = mq_table_rows(t);
    const int64_t cols = mq_table_cols(t);
    const double* data = mq_table_data(t);
    for (int64_t r = 0; r < n_rows; ++r) {
        ordered_json row;
        for (int64_t c = 0; c < cols; ++c)
            row[mq_table_column_name(t, c)] = json_number(data[r * cols + c]);
        rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
}

// The whole payload is assembled before the file is opened, so a failed run
// never leaves a partial output behind.
void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    file.flush();
    if (!file) throw std::runtime_error("failed writing output file: " + out_path);
}

struct CommonOutput {
    std::string out_path;
    std::string format = "csv";
    bool describe = false;
};

void add_output_options(CLI::App* cmd, CommonOutput& common, const char* format_help) {
    cmd->add_option("--out", common.out_path, "Write the result to this file instead of stdout");
    cmd->add_option("--format", common.format, format_help)
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--describe", common.describe,
                  "Print the resolved run configuration as JSON and exit without computing");
}

int finish(const CommonOutput& common, const std::string& subcommand, const ordered_json& params) {
    ordered_json j;
    j["subcommand"] = subcommand;
    j["parameters"] = params;
    j["format"] = common.format;
    emit(j.dump(2) + "\n", common.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for memristive two-qubit interactions: current-voltage loops,\n"
                 "synaptic plasticity and state encoding, gate compilation, and network\n"
                 "classifiers. Results are deterministic for a fixed configuration and seed."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mq_version()));
    int exit_code = 0;

    // hysteresis
    struct {
        double theta = 7.0 * kPi / 16.0;
        double delta_phi = kPi / 32.0;
        std::string eta = "1";
        int64_t periods = 10;
        bool last_cycle = false;
        bool segments = false;
        CommonOutput common;
    } hy;
    {
        auto* cmd = app.add_subcommand(
            "hysteresis", "Current-voltage loop under an oscillatory drive amplitude");
        cmd->add_option("--theta", hy.theta, "Interaction angle")->capture_default_str();
        cmd->add_option("--delta-phi", hy.delta_phi, "Drive phase increment per step")
            ->capture_default_str();
        cmd->add_option("--eta", hy.eta, "Drive amplitude eta: 1 or i")
            ->check(CLI::IsMember({"1", "i"}))
            ->capture_default_str();
        cmd->add_option("--periods", hy.periods, "Number of drive periods")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        auto* lc = cmd->add_flag("--last-cycle", hy.last_cycle, "Keep only the final closed cycle");
        auto* sg = cmd->add_flag("--segments", hy.segments,
                                 "Emit the short per-point gate segments instead of the full loop");
        lc->excludes(sg);
        sg->excludes(lc);
        add_output_options(cmd, hy.common, "csv: data table; json: array of row objects");
        cmd->callback([&] {
            const int eta_imag = hy.eta == "i" ? 1 : 0;
            ordered_json params{{"theta", hy.theta},
                                {"delta_phi", hy.delta_phi},
                                {"eta", hy.eta},
                                {"periods", hy.periods},
                                {"last_cycle", hy.last_cycle},
                                {"segments", hy.segments}};
            if (hy.common.describe) {
                exit_code = finish(hy.common, "hysteresis", params);
                return;
            }
            TableGuard table;
            if (hy.segments) {
                check(mq_hardware_segments(hy.theta, hy.delta_phi, eta_imag, &table.t));
            } else if (hy.last_cycle) {
                check(mq_hysteresis_last_cycle(hy.theta, hy.delta_phi, eta_imag, hy.periods,
                                               &table.t));
            } else {
                check(mq_hysteresis_loop(hy.theta, hy.delta_phi, eta_imag, hy.periods, &table.t));
            }
            emit(hy.common.format == "json" ? table_to_json(table.t) : table_to_csv(table.t),
                 hy.common.out_path);
        });
    }

    // plasticity
    struct {
        double theta = 7.0 * kPi / 16.0;
        CommonOutput common;
    } pl;
    {
        auto* cmd = app.add_subcommand(
            "plasticity",
            "Conductance potentiation/depression staircase: four 100-step constant drives");
        cmd->add_option("--theta", pl.theta, "Interaction angle")->capture_default_str();
        add_output_options(cmd, pl.common, "csv: data table; json: array of row objects");
        cmd->callback([&] {
            ordered_json params{{"theta", pl.theta}};
            if (pl.common.describe) {
                exit_code = finish(pl.common, "plasticity", params);
                return;
            }
            TableGuard table;
            check(mq_plasticity_trace(pl.theta, &table.t));
            emit(pl.common.format == "json" ? table_to_json(table.t) : table_to_csv(table.t),
                 pl.common.out_path);
        });
    }

    // encode
    struct {
        double theta = 7.0 * kPi / 16.0;
        double rz = 7.0 * kPi / 22.0;
        double rx = 3.0 * kPi / 10.0;
        int64_t steps = 400;
        CommonOutput common;
    } en;
    {
        auto* cmd = app.add_subcommand(
            "encode", "Repeated encoding steps driving the resistance toward the current state");
        cmd->add_option("--theta", en.theta, "Interaction angle")->capture_default_str();
        cmd->add_option("--rz", en.rz, "Current preparation: Z rotation half-angle")
            ->capture_default_str();
        cmd->add_option("--rx", en.rx, "Current preparation: X rotation half-angle")
            ->capture_default_str();
        cmd->add_option("--steps", en.steps, "Number of encoding steps")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        add_output_options(cmd, en.common, "csv: data table; json: array of row objects");
        cmd->callback([&] {
            ordered_json params{
                {"theta", en.theta}, {"rz", en.rz}, {"rx", en.rx}, {"steps", en.steps}};
            if (en.common.describe) {
                exit_code = finish(en.common, "encode", params);
                return;
            }
            TableGuard table;
            check(mq_encoding_trace(en.theta, en.rz, en.rx, en.steps, &table.t));
            emit(en.common.format == "json" ? table_to_json(table.t) : table_to_csv(table.t),
                 en.common.out_path);
        });
    }

    // steady
    struct {
        double theta = 7.0 * kPi / 16.0;
        std::string mode = "plasticity";
        double rz = 0.0;
        double rx = kPi / 2.0;
        CommonOutput common;
    } st;
    {
        auto* cmd = app.add_subcommand(
            "steady", "Fixed point of the single-step update map in Bloch coordinates");
        cmd->add_option("--theta", st.theta, "Interaction angle")->capture_default_str();
        cmd->add_option("--mode", st.mode, "Update rule")
            ->check(CLI::IsMember({"plasticity", "encoding"}))
            ->capture_default_str();
        cmd->add_option("--rz", st.rz, "Current preparation: Z rotation half-angle")
            ->capture_default_str();
        cmd->add_option("--rx", st.rx, "Current preparation: X rotation half-angle")
            ->capture_default_str();
        add_output_options(cmd, st.common, "csv: one-row table; json: object");
        cmd->callback([&] {
            ordered_json params{
                {"theta", st.theta}, {"mode", st.mode}, {"rz", st.rz}, {"rx", st.rx}};
            if (st.common.describe) {
                exit_code = finish(st.common, "steady", params);
                return;
            }
            double current[3];
            check(mq_bloch_from_prep(st.rz, st.rx, current));
            double point[3];
            int degenerate = 0;
            int family_dim = 0;
            double residual = 0.0;
            check(mq_steady_state(st.theta, st.mode == "encoding" ? 1 : 0, current, point,
                                  &degenerate, &family_dim, &residual));
            std::string content;
            if (st.common.format == "json") {
                ordered_json j;
                j["current"] = {current[0], current[1], current[2]};
                j["point"] = {point[0], point[1], point[2]};
                j["degenerate"] = degenerate != 0;
                j["family_dim"] = family_dim;
                j["residual"] = residual;
                content = j.dump(2) + "\n";
            } else {
                content = "x,y,z,degenerate,family_dim,residual\n";
                content += format_value(point[0]) + ',' + format_value(point[1]) + ',' +
                           format_value(point[2]) + ',' + std::to_string(degenerate) + ',' +
                           std::to_string(family_dim) + ',' + format_value(residual) + '\n';
            }
            emit(content, st.common.out_path);
        });
    }

    // compile
    struct {
        std::string task;
        double phi = 0.0;
        double theta = 0.0;
        bool visit_once = false;
        int cases = 20;
        uint64_t seed = 1;
        CommonOutput common;
    } co;
    {
        auto* cmd = app.add_subcommand(
            "compile", "Compile a logical operation to a connection program and verify it");
        cmd->add_option("--task", co.task, "write | read | rotate | cnot")
            ->required()
            ->check(CLI::IsMember({"write", "read", "rotate", "cnot"}));
        cmd->add_option("--phi", co.phi, "Rotation parameter (rotate task)")->capture_default_str();
        cmd->add_option("--theta", co.theta, "Interaction parameter (rotate task)")
            ->capture_default_str();
        cmd->add_flag("--visit-once", co.visit_once,
                      "Restrict each current-resistance pair to a single interaction");
        cmd->add_option("--cases", co.cases, "Random verification inputs beyond the basis set")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        cmd->add_option("--seed", co.seed, "Seed for the random verification inputs")
            ->capture_default_str();
        co.common.format = "json";
        add_output_options(cmd, co.common, "json only");
        cmd->callback([&] {
            if (co.common.format != "json")
                throw CLI::ValidationError("--format", "compile emits json only");
            ordered_json params{{"task", co.task},       {"phi", co.phi},
                                {"theta", co.theta},     {"visit_once", co.visit_once},
                                {"cases", co.cases},     {"seed", co.seed}};
            if (co.common.describe) {
                exit_code = finish(co.common, "compile", params);
                return;
            }
            StringGuard json;
            check(mq_compile(co.task.c_str(), co.phi, co.theta, co.visit_once ? 1 : 0, co.cases,
                             co.seed, &json.s));
            emit(json.s, co.common.out_path);
        });
    }

    // classify
    struct {
        std::string task = "bell";
        int m = 2;
        int n = 2;
        bool frozen_phi = false;
        int64_t budget = 50000;
        int restarts = 20;
        uint64_t seed = 1;
        int threads = 0;
        int refine_rounds = 0;
        int64_t refine_budget = 0;
        CommonOutput common;
    } cl;
    {
        auto* cmd = app.add_subcommand(
            "classify", "Train a classifier network on labeled input states");
        cmd->add_option("--task", cl.task, "bell | ghz-plus")
            ->check(CLI::IsMember({"bell", "ghz-plus"}))
            ->capture_default_str();
        cmd->add_option("--m", cl.m, "Input qubits")->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--n", cl.n, "Hidden qubits")->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_flag("--frozen-phi", cl.frozen_phi, "Optimize theta only, with all phi fixed at 0");
        cmd->add_option("--budget", cl.budget, "Objective evaluations per restart")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--restarts", cl.restarts, "Independent random restarts")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--seed", cl.seed, "Optimizer seed")->capture_default_str();
        cmd->add_option("--threads", cl.threads,
                        "Worker thread cap (0: hardware limit; MEMRISTORQ_THREADS also caps)")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        cmd->add_option("--refine-rounds", cl.refine_rounds,
                        "Extra local search rounds from the incumbent")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        cmd->add_option("--refine-budget", cl.refine_budget,
                        "Evaluations per refine round (0: same as --budget)")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        cl.common.format = "json";
        add_output_options(cmd, cl.common,
                           "json: parameters and objective; csv: optimization trajectory");
        cmd->callback([&] {
            ordered_json params{{"task", cl.task},
                                {"m", cl.m},
                                {"n", cl.n},
                                {"frozen_phi", cl.frozen_phi},
                                {"budget", cl.budget},
                                {"restarts", cl.restarts},
                                {"seed", cl.seed},
                                {"threads", cl.threads},
                                {"refine_rounds", cl.refine_rounds},
                                {"refine_budget", cl.refine_budget}};
            if (cl.common.describe) {
                exit_code = finish(cl.common, "classify", params);
                return;
            }
            StringGuard result;
            StringGuard trajectory;
            const bool want_csv = cl.common.format == "csv";
            check(mq_classify(cl.task.c_str(), cl.m, cl.n, cl.frozen_phi ? 1 : 0, cl.budget,
                              cl.restarts, cl.seed, cl.threads, cl.refine_rounds, cl.refine_budget,
                              want_csv ? nullptr : &result.s, want_csv ? &trajectory.s : nullptr));
            emit(want_csv ? trajectory.s : result.s, cl.common.out_path);
        });
    }

    // network-eval
    struct {
        std::string spec_path;
        int m = 2;
        int n = 1;
        std::string state = "plus";
        uint64_t input = 0;
        int64_t shots = 0;
        uint64_t seed = 1;
        CommonOutput common;
    } ne;
    {
        auto* cmd = app.add_subcommand(
            "network-eval", "Evaluate a network on an input state and report outcome statistics");
        auto* spec_opt = cmd->add_option("--spec", ne.spec_path,
                                         "Network description JSON (default: fully connected "
                                         "template with zeroed parameters)")
                             ->check(CLI::ExistingFile);
        cmd->add_option("--m", ne.m, "Template input qubits (ignored with --spec)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str()
            ->excludes(spec_opt);
        cmd->add_option("--n", ne.n, "Template hidden qubits (ignored with --spec)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str()
            ->excludes(spec_opt);
        cmd->add_option("--state", ne.state, "Input state: ghz | plus | basis")
            ->check(CLI::IsMember({"ghz", "plus", "basis"}))
            ->capture_default_str();
        cmd->add_option("--input", ne.input, "Basis state index (with --state basis)")
            ->capture_default_str();
        cmd->add_option("--shots", ne.shots,
                        "Sample this many measurement shots instead of exact probabilities")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        cmd->add_option("--seed", ne.seed, "Sampling seed (with --shots)")->capture_default_str();
        add_output_options(cmd, ne.common, "csv: data table; json: array of row objects");
        cmd->callback([&] {
            if (ne.input != 0 && ne.state != "basis")
                throw CLI::ValidationError("--input", "--input requires --state basis");
            ordered_json params{{"spec", ne.spec_path}, {"m", ne.m},
                                {"n", ne.n},            {"state", ne.state},
                                {"input", ne.input},    {"shots", ne.shots},
                                {"seed", ne.seed}};
            if (ne.common.describe) {
                exit_code = finish(ne.common, "network-eval", params);
                return;
            }
            std::string spec_json;
            if (ne.spec_path.empty()) {
                StringGuard tmpl;
                check(mq_network_template(ne.m, ne.n, &tmpl.s));
                spec_json = tmpl.s;
            } else {
                std::ifstream file(ne.spec_path, std::ios::binary);
                if (!file) throw std::runtime_error("cannot read spec file: " + ne.spec_path);
                std::ostringstream buf;
                buf << file.rdbuf();
                spec_json = buf.str();
            }
            TableGuard dist;
            check(mq_network_eval(spec_json.c_str(), ne.state.c_str(), ne.input, &dist.t));
            TableGuard counts;
            const mq_table* result = dist.t;
            if (ne.shots > 0) {
                check(mq_sample_counts(dist.t, ne.shots, ne.seed, &counts.t));
                result = counts.t;
            }
            emit(ne.common.format == "json" ? table_to_json(result) : table_to_csv(result),
                 ne.common.out_path);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return exit_code;
}
