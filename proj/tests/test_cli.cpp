// End-to-end checks against the installed CLI binary (path injected by the
// build as RADREL_CLI_PATH).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "radrel/readback.hpp"

#ifndef RADREL_CLI_PATH
#error "RADREL_CLI_PATH must be defined by the build"
#endif

namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / name; }

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RADREL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("project subcommand emits the published chain") {
    const auto out = temp_path("radrel_cli_project.json");
    const int code = run_cli("project --profile xczu9eg --env nyc_40kft --nodes 1 --out " +
                             out.string());
    REQUIRE(code == 0);

    const auto j = nlohmann::json::parse(read_text(out));
    bool saw_pl = false, saw_dpu = false;
    for (const auto& table : j.at("tables")) {
        if (table.at("name") == "memory_mttu") {
            for (const auto& row : table.at("rows")) {
                if (row.at(0) == "PL total") {
                    CHECK(row.at(6).get<double>() == doctest::Approx(1.808).epsilon(0.001));
                    saw_pl = true;
                }
            }
        }
        if (table.at("name") == "application_mttf") {
            for (const auto& row : table.at("rows")) {
                if (row.at(0) == "DPU" && row.at(1) == "C+H") {
                    CHECK(row.at(6).get<double>() == doctest::Approx(86.58).epsilon(0.001));
                    saw_dpu = true;
                }
            }
        }
    }
    CHECK(saw_pl);
    CHECK(saw_dpu);
    fs::remove(out);
}

TEST_CASE("identical invocations produce byte-identical reports") {
    const auto out1 = temp_path("radrel_cli_det1.json");
    const auto out2 = temp_path("radrel_cli_det2.json");
    const auto cfg = temp_path("radrel_cli_sim.json");
    {
        std::ofstream f(cfg, std::ios::trunc);
        f << R"({"mode":"failure-campaign","profile":"xczu9eg","arrays":["CRAM"],
                 "environment":"nyc_40kft","trials":500,"seed":77})";
    }
    REQUIRE(run_cli("simulate " + cfg.string() + " --out " + out1.string()) == 0);
    REQUIRE(run_cli("simulate " + cfg.string() + " --out " + out2.string()) == 0);
    CHECK(read_text(out1) == read_text(out2));
    // A different seed changes the report.
    REQUIRE(run_cli("simulate " + cfg.string() + " --seed 78 --out " + out2.string()) == 0);
    CHECK(read_text(out1) != read_text(out2));
    fs::remove(out1);
    fs::remove(out2);
    fs::remove(cfg);
}

TEST_CASE("exit codes distinguish validation from malformed input") {
    CHECK(run_cli("project --profile xczu9eg --env lunar_surface") == 1);
    CHECK(run_cli("project --profile no_such_profile") == 1);

    const auto broken = temp_path("radrel_cli_broken.rbkc");
    {
        std::ofstream f(broken, std::ios::binary | std::ios::trunc);
        f << "this is not a container";
    }
    CHECK(run_cli("analyze-readback " + broken.string()) == 2);
    fs::remove(broken);

    const auto bad_json = temp_path("radrel_cli_bad.json");
    {
        std::ofstream f(bad_json, std::ios::trunc);
        f << "{broken";
    }
    CHECK(run_cli("xsection " + bad_json.string()) == 2);
    fs::remove(bad_json);

    const auto zero_trials = temp_path("radrel_cli_zero.json");
    {
        std::ofstream f(zero_trials, std::ios::trunc);
        f << R"({"mode":"failure-campaign","profile":"xczu9eg","trials":0})";
    }
    CHECK(run_cli("simulate " + zero_trials.string()) == 1);
    fs::remove(zero_trials);

    CHECK(run_cli("--help") == 0);
}

TEST_CASE("analyze-readback over the CLI") {
    using namespace radrel;
    ReadbackCampaign c;
    c.geometry = {"cli_sample", MemoryKind::cram, 100, 64, 6400, 0};
    c.golden = BitArray(c.geometry.total_bits);
    c.mask = BitArray(c.geometry.total_bits);
    for (std::uint64_t i = 0; i < c.geometry.total_bits; ++i) c.mask.set(i);
    c.fluence = Fluence(1e9);
    BitArray cycle = c.golden;
    cycle.set(7 * 64 + 3);
    cycle.set(8 * 64 + 3);
    c.cycles.push_back(cycle);
    const auto container = temp_path("radrel_cli_sample.rbkc");
    save_rbkc(c, container);

    const auto out = temp_path("radrel_cli_analyze.json");
    REQUIRE(run_cli("analyze-readback " + container.string() + " --out " + out.string()) == 0);
    const auto j = nlohmann::json::parse(read_text(out));
    bool saw = false;
    for (const auto& table : j.at("tables")) {
        if (table.at("name") == "event_classes") {
            REQUIRE(table.at("rows").size() == 1);
            CHECK(table.at("rows")[0].at(3).get<int>() == 1); // one MCU
            saw = true;
        }
    }
    CHECK(saw);
    fs::remove(container);
    fs::remove(out);
}

TEST_CASE("simulate writes a plot-ready samples CSV next to the report") {
    const auto cfg = temp_path("radrel_cli_samples_cfg.json");
    {
        std::ofstream f(cfg, std::ios::trunc);
        f << R"({"mode":"failure-campaign","profile":"xczu9eg","arrays":["CRAM"],
                 "environment":"nyc_40kft","trials":200,"seed":9})";
    }
    const auto out = temp_path("radrel_cli_samples.json");
    const auto samples = temp_path("radrel_cli_samples.csv");
    REQUIRE(run_cli("simulate " + cfg.string() + " --out " + out.string() + " --samples-out " +
                    samples.string()) == 0);
    const std::string csv = read_text(samples);
    CHECK(csv.find("# table failure_time_samples") != std::string::npos);
    CHECK(csv.find("sample,hours") != std::string::npos);
    fs::remove(cfg);
    fs::remove(out);
    fs::remove(samples);
}

TEST_CASE("xsection over the CLI in markdown") {
    const auto log = temp_path("radrel_cli_log.json");
    {
        std::ofstream f(log, std::ios::trunc);
        f << R"({"benchmark":"SHA","fluence_n_per_cm2":7.02e9,
                 "counts":{"runs":67787,"correct":67785,"critical_sdc":2}})";
    }
    const auto out = temp_path("radrel_cli_log.md");
    REQUIRE(run_cli("xsection " + log.string() + " --format md --out " + out.string()) == 0);
    const std::string md = read_text(out);
    CHECK(md.find("| SHA |") != std::string::npos);
    fs::remove(log);
    fs::remove(out);
}
