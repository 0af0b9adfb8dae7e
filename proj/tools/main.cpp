// main.cpp -- cpbnr command-line driver.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 numerical or
// runtime failure during integration.
#include "CLI11.hpp"

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "cpbnr/errors.hpp"
#include "cpbnr/run.hpp"

namespace {

struct Overrides {
    std::string out;
    std::string format;
    bool raw_entropy = false;
    double step = 0.0;
    double t_end = 0.0;
    bool has_out = false, has_format = false, has_step = false, has_t_end = false;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--out", ov.out, "Output path (run) or directory (sweep)")
        ->each([&](const std::string&) { ov.has_out = true; });
    cmd->add_option("--format", ov.format, "Output format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}))
        ->each([&](const std::string&) { ov.has_format = true; });
    cmd->add_flag("--raw-entropy", ov.raw_entropy,
                  "Report the entropy of the decayed state instead of the renormalized one");
    cmd->add_option("--step", ov.step, "Integrator step size override")
        ->each([&](const std::string&) { ov.has_step = true; });
    cmd->add_option("--t-end", ov.t_end, "Integration window override")
        ->each([&](const std::string&) { ov.has_t_end = true; });
}

// Flags beat file/preset values; anything not passed keeps the loaded value.
void apply_overrides(cpbnr::RunConfig& cfg, const Overrides& ov, bool out_is_path) {
    if (ov.has_out && out_is_path)
        cfg.output_path = ov.out;
    if (ov.has_format)
        cfg.format = ov.format == "csv" ? cpbnr::OutputFormat::csv : cpbnr::OutputFormat::jsonl;
    if (ov.raw_entropy)
        cfg.normalize_entropy = false;
    if (ov.has_step)
        cfg.plan.step = ov.step;
    if (ov.has_t_end)
        cfg.plan.t_end = ov.t_end;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled two-level-system / oscillator trajectory runner"};
    app.require_subcommand(1);

    std::string run_input;
    Overrides run_ov;
    auto* run_cmd = app.add_subcommand("run", "Integrate one scenario and write its time series");
    run_cmd->add_option("input", run_input, "Config file path or preset name")->required();
    add_override_flags(run_cmd, run_ov);

    std::string sweep_input, sweep_axis;
    std::vector<double> sweep_values;
    unsigned sweep_jobs = 0;
    Overrides sweep_ov;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Run one scenario per value of a single swept parameter");
    sweep_cmd->add_option("input", sweep_input, "Config file path or preset name")->required();
    sweep_cmd
        ->add_option("--axis", sweep_axis,
                     "Swept parameter: gamma, delta, eta, omegaPrime, Delta, or meanN")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "Comma-separated parameter values")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--jobs", sweep_jobs, "Concurrent sweep points (default: all cores)");
    add_override_flags(sweep_cmd, sweep_ov);

    auto* presets_cmd = app.add_subcommand("presets", "List the bundled scenario presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (presets_cmd->parsed()) {
            std::cout << cpbnr::format_presets_listing();
            return 0;
        }
        if (run_cmd->parsed()) {
            cpbnr::RunConfig cfg = cpbnr::resolve_run_input(run_input);
            apply_overrides(cfg, run_ov, /*out_is_path=*/true);
            const cpbnr::Trajectory traj = cpbnr::run_scenario(cfg);
            std::cout << "wrote " << cfg.output_path << " (" << traj.rows.size() << " rows)\n";
            return 0;
        }
        // sweep
        cpbnr::SweepSpec spec;
        spec.base = cpbnr::resolve_run_input(sweep_input);
        apply_overrides(spec.base, sweep_ov, /*out_is_path=*/false);
        spec.axis = sweep_axis;
        spec.values = sweep_values;
        spec.jobs = sweep_jobs;
        if (sweep_ov.has_out)
            spec.out_dir = sweep_ov.out;
        const auto results = cpbnr::run_sweep(spec);
        std::size_t failed = 0;
        for (const auto& r : results)
            if (!r.ok)
                ++failed;
        std::cout << "wrote " << results.size() << " sweep points to " << spec.out_dir;
        if (failed != 0)
            std::cout << " (" << failed << " failed; see manifest.json)";
        std::cout << '\n';
        return failed == 0 ? 0 : 2;
    } catch (const cpbnr::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const cpbnr::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const cpbnr::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const cpbnr::TruncationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const cpbnr::DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
