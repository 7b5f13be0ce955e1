#include "novflow/errors.hpp"
#include "novflow/reports.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace novflow;
using nlohmann::json;

namespace {

int log_level() {
    const char* v = std::getenv("NOVFLOW_LOG");
    if (!v) return 0;
    const std::string s = v;
    if (s == "debug" || s == "2") return 2;
    if (s == "info" || s == "1") return 1;
    return 0;
}

void log(int level, const std::string& msg) {
    if (log_level() >= level) std::cerr << "novflow: " << msg << '\n';
}

void emit(const json& report, const std::string& out_dir, const std::string& file) {
    const std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    std::ofstream(std::filesystem::path(out_dir) / file) << text;
    log(1, "wrote " + (std::filesystem::path(out_dir) / file).string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"novflow: Novikov-type invariants and gradient flows of closed 1-forms"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string out_dir;
    app.add_option("--tol-abs", cfg.tol_abs, "integrator absolute tolerance")->capture_default_str();
    app.add_option("--tol-rel", cfg.tol_rel, "integrator relative tolerance")->capture_default_str();
    app.add_option("--t-max", cfg.t_max, "integration time limit (default depends on the command)");
    app.add_option("--n-floor", cfg.n_floor, "integral cutoff N (default 3 max|period| + 10)");
    app.add_option("--zero-tol", cfg.zero_tol)->capture_default_str();
    app.add_option("--merge-radius", cfg.merge_radius)->capture_default_str();
    app.add_option("--seed-radius", cfg.seed_radius)->capture_default_str();
    app.add_option("--box-delta", cfg.box_delta, "initial Lyapunov box half-width")->capture_default_str();
    app.add_option("--threads", cfg.threads)->capture_default_str();
    app.add_option("--out", out_dir, "also write reports into this directory");
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();

    std::string complex_path, scenario_name, descriptor_path, csv_path;
    int degree = -1;
    std::vector<double> x0;
    bool backward = false;

    auto* homology = app.add_subcommand("homology", "twisted homology over Q[t, 1/t] and Supp");
    homology->add_option("complex", complex_path, "complex JSON file")->required();
    homology->add_option("--degree", degree, "only this degree");

    auto* supp_cmd = app.add_subcommand("supp", "Supp(M, xi)");
    supp_cmd->add_option("complex", complex_path, "complex JSON file")->required();

    auto* cup = app.add_subcommand("cupbound", "cup-product lower bound on cat");
    cup->add_option("complex", complex_path, "simplicial complex JSON file")->required();

    auto* flow = app.add_subcommand("flow", "integrate the negative gradient flow");
    flow->add_option("scenario", scenario_name, "scenario file or built-in name")->required();
    flow->add_option("--x0", x0, "initial point, comma separated")->delimiter(',')->required();
    flow->add_flag("--backward", backward, "integrate backward in time");
    flow->add_option("--csv", csv_path, "trajectory CSV path (- for stdout)");

    auto* zeros = app.add_subcommand("zeros", "zeros of the form and their classification");
    zeros->add_option("scenario", scenario_name, "scenario file or built-in name")->required();

    auto* cycles = app.add_subcommand("cycles", "heteroclinic edges, homoclinic cycles, hypothesis checks");
    cycles->add_option("scenario", scenario_name, "scenario file or built-in name")->required();

    auto* verdict = app.add_subcommand("verdict", "category bound against the zero count");
    verdict->add_option("scenario", scenario_name, "scenario file or built-in name")->required();
    verdict->add_option("descriptor", descriptor_path, "space descriptor JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        validate(cfg);
        if (homology->parsed()) {
            log(1, "homology of " + complex_path);
            const auto f = load_complex_file(complex_path);
            emit(homology_report(f, degree >= 0 ? std::optional<int>(degree) : std::nullopt), out_dir, "homology.json");
        } else if (supp_cmd->parsed()) {
            emit(supp_report(load_complex_file(complex_path)), out_dir, "supp.json");
        } else if (cup->parsed()) {
            emit(cupbound_report(load_complex_file(complex_path)), out_dir, "cupbound.json");
        } else if (flow->parsed()) {
            const Scenario s = resolve_scenario(scenario_name);
            const Eigen::VectorXd start = Eigen::Map<const Eigen::VectorXd>(x0.data(), static_cast<Eigen::Index>(x0.size()));
            if (start.size() != s.dimension())
                throw ValidationError("--x0 needs " + std::to_string(s.dimension()) + " coordinates");
            log(1, "flow on " + s.name());
            Trajectory tr;
            const json report = flow_report(s, start, backward ? -1 : +1, cfg, &tr);
            log(2, std::to_string(tr.steps) + " steps, " + std::to_string(tr.rejected) + " rejected");
            const std::string csv = trajectory_csv(tr);
            if (csv_path == "-") {
                std::cout << csv;
                if (!out_dir.empty()) emit(report, out_dir, "flow.json");
            } else {
                emit(report, out_dir, "flow.json");
                if (!csv_path.empty()) std::ofstream(csv_path) << csv;
            }
            if (!out_dir.empty()) std::ofstream(std::filesystem::path(out_dir) / "trajectory.csv") << csv;
        } else if (zeros->parsed()) {
            emit(zeros_report(resolve_scenario(scenario_name), cfg), out_dir, "zeros.json");
        } else if (cycles->parsed()) {
            const Scenario s = resolve_scenario(scenario_name);
            log(1, "cycles on " + s.name() + " with " + std::to_string(cfg.threads) + " threads");
            emit(cycles_report(s, cfg), out_dir, "cycles.json");
        } else if (verdict->parsed()) {
            const Scenario s = resolve_scenario(scenario_name);
            emit(verdict_report(s, load_descriptor_file(descriptor_path), cfg), out_dir, "verdict.json");
        }
    } catch (const ValidationError& e) {
        std::cerr << "novflow: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "novflow: numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
