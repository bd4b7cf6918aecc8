#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "radrel/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitMalformedInput = 2;

void emit(const radrel::Report& report, radrel::Format format, const std::string& out_path) {
    const std::string text = report.render(format);
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw radrel::ValidationError("cannot write output file: " + out_path);
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    using namespace radrel;

    CLI::App app{"Neutron soft-error dependability toolkit: readback analysis, Poisson "
                 "cross-section statistics, FIT/MTTF projection and Monte Carlo simulation"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOptions global;
    std::string format_text = "json";
    std::string out_path;
    app.add_option("--confidence", global.confidence, "Confidence level for Poisson intervals")
        ->capture_default_str();
    app.add_flag("--fluence-uncertainty", global.fluence_uncertainty,
                 "Widen intervals for the stated fluence uncertainty (10%)");
    app.add_option("--seed", global.seed, "Seed override for simulation commands")
        ->capture_default_str();
    app.add_option("--format", format_text, "Output format: json|md|csv")->capture_default_str();
    app.add_option("--out", out_path, "Write the report to a file instead of stdout");

    // analyze-readback
    auto* analyze = app.add_subcommand("analyze-readback",
                                       "Extract, cluster and classify upsets from readback data");
    AnalyzeReadbackArgs analyze_args;
    analyze->add_option("containers", analyze_args.containers, "RBKC container file(s)");
    analyze->add_option("--diff-csv", analyze_args.diff_csv,
                        "Pre-diffed upset list (csv: cycle,frame,bit)");
    analyze->add_option("--frames", analyze_args.frames, "Frame count (diff-csv input)");
    analyze->add_option("--bits-per-frame", analyze_args.bits_per_frame,
                        "Bits per frame (diff-csv input)");
    analyze->add_option("--block-bits", analyze_args.block_bits,
                        "SEFI block granularity in bits (diff-csv input)");
    analyze->add_option("--kind", analyze_args.kind, "Memory kind: cram|bram|srl|cache-array")
        ->capture_default_str();
    analyze->add_option("--fluence", analyze_args.fluence, "Fluence in n/cm^2 (diff-csv input)");
    analyze->add_option("--config-period", analyze_args.config_period,
                        "Readbacks per reconfiguration (0 = never)");
    analyze->add_option("--name", analyze_args.name, "Memory name for diff-csv input")
        ->capture_default_str();
    analyze->add_option("--sefi-threshold", analyze_args.sefi_threshold_bits,
                        "Bits per block above which an event is a SEFI")
        ->capture_default_str();

    // xsection
    auto* xsection = app.add_subcommand("xsection",
                                        "Cross-sections and FIT breakdown from a campaign log");
    XsectionArgs xsection_args;
    xsection->add_option("log", xsection_args.log_path, "Campaign log (JSON or CSV)")->required();
    xsection->add_option("--flux", xsection_args.flux,
                         "Flux for the FIT breakdown, n/cm^2/h")
        ->capture_default_str();
    xsection->add_option("--fluence", xsection_args.fluence_override,
                         "Fluence override for CSV inputs, n/cm^2");

    // project
    auto* project_cmd = app.add_subcommand("project",
                                           "Project cross-sections to an environment/deployment");
    std::string project_profile = "xczu9eg";
    std::string project_env = "nyc_sea_level";
    double project_flux = 0;
    std::uint64_t project_nodes = 1;
    project_cmd->add_option("--profile", project_profile, "Device profile name")
        ->capture_default_str();
    project_cmd->add_option("--env", project_env, "Environment: nyc_sea_level|nyc_40kft")
        ->capture_default_str();
    project_cmd->add_option("--flux", project_flux,
                            "Custom environment flux in n/cm^2/h (overrides --env)");
    project_cmd->add_option("--nodes", project_nodes, "Number of deployed devices")
        ->capture_default_str();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo soft-error simulation");
    SimulateArgs simulate_args;
    std::string samples_out;
    simulate->add_option("config", simulate_args.config_path, "Simulation config (JSON)")
        ->required();
    simulate->add_option("--samples-out", samples_out,
                         "Also write the failure-time samples (or backlog series) as CSV");

    // report
    auto* report_cmd =
        app.add_subcommand("report", "Full reproduction report for a bundled device profile");
    std::string report_profile = "xczu9eg";
    report_cmd->add_option("--profile", report_profile, "Device profile name")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        global.format = format_from_string(format_text);

        Report report;
        if (*analyze) {
            report = cmd_analyze_readback(analyze_args, global);
        } else if (*xsection) {
            report = cmd_xsection(xsection_args, global);
        } else if (*project_cmd) {
            const std::filesystem::path path = find_profile_path(project_profile);
            const DeviceProfile profile = load_profile_file(path);
            const Environment env = project_flux > 0
                                        ? Environment::with_flux("custom", project_flux)
                                        : Environment::by_name(project_env);
            report = cmd_project(profile, env, Deployment{project_nodes}, global,
                                 digest_file(path));
        } else if (*simulate) {
            simulate_args.seed_override = app.count("--seed") > 0 ? global.seed : 0;
            report = cmd_simulate(simulate_args, global);
            if (!samples_out.empty()) {
                Report samples;
                samples.command = report.command;
                const ReportTable* t = report.find_table("failure_time_samples");
                if (t == nullptr) t = report.find_table("backlog_series");
                if (t != nullptr) samples.tables.push_back(*t);
                std::ofstream f(samples_out, std::ios::trunc);
                if (!f) throw ValidationError("cannot write output file: " + samples_out);
                f << samples.to_csv();
            }
        } else if (*report_cmd) {
            const std::filesystem::path path = find_profile_path(report_profile);
            const DeviceProfile profile = load_profile_file(path);
            report = cmd_report(profile, global, digest_file(path));
        }
        emit(report, global.format, out_path);
        return kExitOk;
    } catch (const InputFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMalformedInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return kExitMalformedInput;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
