// Command-line surface: compute any single bound, run figure-reproduction
// sweeps, or run the property-check suites. Results are CSV or JSON tables
// with a metadata header carrying every parameter and the seed.

#include "dephdisc/bounds.hpp"
#include "dephdisc/figures.hpp"
#include "dephdisc/output.hpp"
#include "dephdisc/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using dephdisc::bounds::BoundReport;
using dephdisc::discrimination::DiscriminationProblem;
using dephdisc::output::Format;
using dephdisc::output::SweepResult;

struct RunConfig {
    double gamma1 = 0.1;
    double gamma2 = 1.0;
    double q1 = 0.5;
    std::optional<double> energy;
    int shots = 1;
    int dim = 8;
    std::int64_t samples = 10000;
    std::uint64_t seed = 42;
    std::string out;
    std::string format = "csv";

    DiscriminationProblem problem() const {
        return DiscriminationProblem::make(gamma1, gamma2, q1);
    }

    double require_energy(const char* command) const {
        if (!energy) throw CLI::ValidationError(std::string(command) + ": --energy is required");
        return *energy;
    }

    Format parsed_format() const {
        return format == "json" ? Format::json : Format::csv;
    }
};

void add_common_flags(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--gamma1", config.gamma1, "First dephasing rate")->capture_default_str();
    cmd->add_option("--gamma2", config.gamma2, "Second dephasing rate")->capture_default_str();
    cmd->add_option("--q1", config.q1, "Prior of the first channel (q2 = 1 - q1)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--energy", config.energy, "Mean photon number budget E");
    cmd->add_option("--shots", config.shots, "Shot count n")->check(CLI::PositiveNumber);
    cmd->add_option("--dim", config.dim, "Fock truncation dimension")
        ->check(CLI::Range(2, 1 << 20))
        ->capture_default_str();
    cmd->add_option("--samples", config.samples, "Sample count for randomized estimators")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", config.seed, "64-bit seed")->capture_default_str();
    cmd->add_option("--format", config.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", config.out, "Output path (default: stdout)");
}

void push_config_meta(SweepResult& result, const RunConfig& config, const std::string& command) {
    SweepResult head;
    head.add_meta("tool", std::string(dephdisc::output::kToolVersion));
    head.add_meta("command", command);
    head.add_meta("gamma1", config.gamma1);
    head.add_meta("gamma2", config.gamma2);
    head.add_meta("q1", config.q1);
    if (config.energy) head.add_meta("energy", *config.energy);
    head.add_meta("shots", static_cast<std::int64_t>(config.shots));
    head.add_meta("dim", static_cast<std::int64_t>(config.dim));
    head.add_meta("samples", config.samples);
    head.add_meta("seed", static_cast<std::int64_t>(config.seed));
    for (auto& [key, value] : result.metadata) {
        const bool present = std::any_of(head.metadata.begin(), head.metadata.end(),
                                         [&](const auto& kv) { return kv.first == key; });
        if (!present) head.metadata.emplace_back(key, std::move(value));
    }
    result.metadata = std::move(head.metadata);
}

SweepResult report_to_result(const BoundReport& report) {
    SweepResult result;
    result.columns = {"value"};
    std::vector<double> row{report.value};
    if (report.argmax_m) {
        result.columns.push_back("argmax_m");
        row.push_back(static_cast<double>(*report.argmax_m));
    }
    if (report.alpha) {
        result.columns.push_back("alpha");
        row.push_back(*report.alpha);
    }
    if (report.estimator_error) {
        result.columns.push_back("estimator_error");
        row.push_back(*report.estimator_error);
    }
    if (report.chernoff_q) {
        result.columns.push_back("chernoff_q");
        row.push_back(*report.chernoff_q);
    }
    if (report.s_star) {
        result.columns.push_back("s_star");
        row.push_back(*report.s_star);
    }
    result.add_meta("kind", std::string(dephdisc::bounds::to_string(report.kind)));
    if (report.regularized) result.add_meta("regularized", std::string("true"));
    result.rows.push_back(std::move(row));
    return result;
}

void emit(SweepResult result, const RunConfig& config, const std::string& command,
          std::chrono::steady_clock::time_point start) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    push_config_meta(result, config, command);
    result.add_meta("wall_time_s", wall);
    if (config.out.empty())
        dephdisc::output::write_result(result, config.parsed_format(), std::cout);
    else
        dephdisc::output::write_result_file(result, config.parsed_format(), config.out);
}

void emit_error(const std::string& message, int code) {
    nlohmann::json j;
    j["error"] = message;
    j["exit_code"] = code;
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrimination quantities for bosonic dephasing channels"};
    app.require_subcommand(1);

    RunConfig config;
    std::string figure_id;
    bool figure_inset = false;
    double e_min = 0.0, e_max = 12.0, e_step = 0.25;
    double g2_min = 0.05, g2_max = 2.0, g2_step = 0.05;
    std::vector<int> shot_list{3, 5};
    std::vector<int> sections{64, 256, 1024};
    int probe_m = 1;
    double probe_r = 0.5;
    std::string suite = "channel";
    std::string method = "auto";

    auto* exact = app.add_subcommand("exact", "Exact unconstrained optimum (Szego limit integral)");
    auto* qubit = app.add_subcommand("qubit-bound", "Qubit-probe lower bound (energy constrained)");
    auto* projector = app.add_subcommand("projector-bound", "Flat-probe section bound, E >= 1/2");
    auto* frobenius = app.add_subcommand("frobenius-bound", "Frobenius relaxation, E >= 1/2");
    auto* ms_exact = app.add_subcommand("multishot-exact", "Exact n-shot optimum");
    auto* ms_bound = app.add_subcommand("multishot-bound", "n-shot lower bound via alpha");
    auto* perr = app.add_subcommand("perr-upper", "Error-probability upper bound (1/2)(1-alpha)^(n/2)");
    auto* chernoff = app.add_subcommand("chernoff", "Chernoff bound for a rank-2 probe");
    auto* szego = app.add_subcommand("szego-sweep", "Szego section values vs the integral");
    auto* figure = app.add_subcommand("figure", "Reproduce a figure data set (1-4)");
    auto* verify = app.add_subcommand("verify", "Run a property-check suite");

    for (auto* cmd : {exact, qubit, projector, frobenius, ms_exact, ms_bound, perr, chernoff,
                      szego, figure, verify})
        add_common_flags(cmd, config);

    ms_exact->add_option("--method", method, "tensor_quadrature | mc_mixture | auto")
        ->check(CLI::IsMember({"tensor_quadrature", "mc_mixture", "auto"}))
        ->capture_default_str();
    chernoff->add_option("--probe-m", probe_m, "Excited Fock level of the probe")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    chernoff->add_option("--probe-r", probe_r, "Excited population r_m")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    szego->add_option("--sections", sections, "Section sizes M")->capture_default_str();
    figure->add_option("id", figure_id, "Figure number (1-4)")->required();
    figure->add_flag("--inset", figure_inset, "Figure 3 inset: gap vs n at fixed energy");
    figure->add_option("--e-min", e_min)->capture_default_str();
    figure->add_option("--e-max", e_max)->capture_default_str();
    figure->add_option("--e-step", e_step)->capture_default_str();
    figure->add_option("--g2-min", g2_min)->capture_default_str();
    figure->add_option("--g2-max", g2_max)->capture_default_str();
    figure->add_option("--g2-step", g2_step)->capture_default_str();
    figure->add_option("--shot-list", shot_list, "Shot counts for figures 3/4")
        ->capture_default_str();
    verify->add_option("suite", suite, "channel|bounds|multilevel|entanglement|unambiguous|all")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error(e.what(), dephdisc::output::kExitUsage);
        std::cerr << app.help() << "\n";
        return dephdisc::output::kExitUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        if (exact->parsed()) {
            emit(report_to_result(dephdisc::bounds::exact_unconstrained(config.problem())), config,
                 "exact", start);
        } else if (qubit->parsed()) {
            emit(report_to_result(dephdisc::bounds::qubit_bound(config.problem(),
                                                                {config.require_energy("qubit-bound")})),
                 config, "qubit-bound", start);
        } else if (projector->parsed()) {
            emit(report_to_result(dephdisc::bounds::projector_bound(
                     config.problem(), {config.require_energy("projector-bound")})),
                 config, "projector-bound", start);
        } else if (frobenius->parsed()) {
            const double energy = config.require_energy("frobenius-bound");
            auto result = report_to_result(dephdisc::bounds::frobenius_bound(config.problem(), {energy}));
            result.columns.push_back("second_line_value");
            result.rows[0].push_back(
                dephdisc::bounds::frobenius_second_line_value(config.problem(), {energy}));
            emit(std::move(result), config, "frobenius-bound", start);
        } else if (ms_exact->parsed()) {
            const auto chosen = method == "auto"
                                    ? (config.shots <= 2
                                           ? dephdisc::bounds::MultishotMethod::tensor_quadrature
                                           : dephdisc::bounds::MultishotMethod::mc_mixture)
                                    : (method == "tensor_quadrature"
                                           ? dephdisc::bounds::MultishotMethod::tensor_quadrature
                                           : dephdisc::bounds::MultishotMethod::mc_mixture);
            auto result = report_to_result(dephdisc::bounds::multishot_exact(
                config.problem(), {config.shots}, chosen, config.samples, config.seed));
            result.add_meta("method",
                            std::string(chosen == dephdisc::bounds::MultishotMethod::tensor_quadrature
                                            ? "tensor_quadrature"
                                            : "mc_mixture"));
            emit(std::move(result), config, "multishot-exact", start);
        } else if (ms_bound->parsed()) {
            emit(report_to_result(dephdisc::bounds::multishot_bound(
                     config.problem(), {config.require_energy("multishot-bound")}, {config.shots})),
                 config, "multishot-bound", start);
        } else if (perr->parsed()) {
            emit(report_to_result(dephdisc::bounds::perr_upper(
                     config.problem(), {config.require_energy("perr-upper")}, {config.shots})),
                 config, "perr-upper", start);
        } else if (chernoff->parsed()) {
            auto result = report_to_result(dephdisc::bounds::chernoff_rank2(
                config.problem(), {probe_m, probe_r}, {config.shots}));
            if (config.energy && probe_m * probe_r > *config.energy + 1e-12)
                result.add_meta("warning", std::string("probe exceeds the energy budget m*r > E"));
            emit(std::move(result), config, "chernoff", start);
        } else if (szego->parsed()) {
            emit(dephdisc::figures::szego_sweep(config.problem(), sections), config, "szego-sweep",
                 start);
        } else if (figure->parsed()) {
            SweepResult result;
            if (figure_id == "1") {
                result = dephdisc::figures::figure1(config.problem(), e_min, e_max, e_step);
            } else if (figure_id == "2") {
                result = dephdisc::figures::figure2(config.gamma1, config.q1,
                                                    config.energy.value_or(2.0), config.dim,
                                                    static_cast<int>(config.samples), config.seed,
                                                    g2_min, g2_max, g2_step);
            } else if (figure_id == "3" && figure_inset) {
                result = dephdisc::figures::figure3_inset(config.problem(),
                                                          config.energy.value_or(12.0), 12,
                                                          config.samples, config.seed);
            } else if (figure_id == "3") {
                result = dephdisc::figures::figure3(config.problem(), shot_list, config.samples,
                                                    config.seed, std::max(0.5, e_min), e_max, e_step);
            } else if (figure_id == "4") {
                result = dephdisc::figures::figure4(config.gamma1, config.q1,
                                                    config.energy.value_or(2.0), shot_list,
                                                    static_cast<int>(config.samples), config.seed,
                                                    g2_min, g2_max, g2_step);
            } else {
                emit_error("figure id must be 1, 2, 3, or 4", dephdisc::output::kExitUsage);
                return dephdisc::output::kExitUsage;
            }
            emit(std::move(result), config, "figure " + figure_id, start);
        } else if (verify->parsed()) {
            std::vector<std::string> suites;
            if (suite == "all")
                suites = {"channel", "bounds", "multilevel", "entanglement", "unambiguous"};
            else
                suites = {suite};
            bool all_pass = true;
            SweepResult combined;
            combined.columns = {"index", "pass", "margin", "threshold"};
            for (const auto& name : suites) {
                const auto checks = dephdisc::verify::run_suite(name, config.seed);
                auto result = dephdisc::verify::to_sweep_result(name, checks, config.seed);
                for (const auto& check : checks) {
                    std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << name << "/" << check.name
                              << "  margin=" << dephdisc::output::format_number(check.margin)
                              << "\n";
                    all_pass = all_pass && check.pass;
                }
                combined.metadata.insert(combined.metadata.end(), result.metadata.begin(),
                                         result.metadata.end());
                combined.rows.insert(combined.rows.end(), result.rows.begin(), result.rows.end());
            }
            if (!config.out.empty())
                dephdisc::output::write_result_file(combined, config.parsed_format(), config.out);
            if (!all_pass) {
                emit_error("verification failure in suite " + suite,
                           dephdisc::output::kExitVerification);
                return dephdisc::output::kExitVerification;
            }
        }
    } catch (const CLI::ValidationError& e) {
        emit_error(e.what(), dephdisc::output::kExitUsage);
        return dephdisc::output::kExitUsage;
    } catch (const dephdisc::numerics::ConvergenceError& e) {
        emit_error(std::string(e.what()) + " (best estimate " +
                       dephdisc::output::format_number(e.best_estimate()) + ", residual " +
                       dephdisc::output::format_number(e.residual()) + ")",
                   dephdisc::output::kExitConvergence);
        return dephdisc::output::kExitConvergence;
    } catch (const dephdisc::numerics::ValidationError& e) {
        emit_error(e.what(), dephdisc::output::kExitUsage);
        return dephdisc::output::kExitUsage;
    } catch (const std::domain_error& e) {
        emit_error(e.what(), dephdisc::output::kExitUsage);
        return dephdisc::output::kExitUsage;
    } catch (const std::exception& e) {
        emit_error(e.what(), 1);
        return 1;
    }
    return dephdisc::output::kExitOk;
}
