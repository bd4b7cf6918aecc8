#include <algorithm>
#include <fstream>

#include "radrel/report.hpp"

namespace radrel {

using nlohmann::json;

namespace {

using Cell = ReportTable::Cell;

Cell sigma_cell(const CrossSectionEstimate& e) {
    if (e.none_observed()) return std::string("-");
    return e.mean_cm2;
}

Cell fit_cell(FitRate fit) {
    if (fit.none_observed()) return std::string("-");
    return fit.value();
}

std::string provenance_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void add_estimate_row(ReportTable& table, const std::string& subject, const std::string& category,
                      const CrossSectionEstimate& e) {
    table.rows.push_back({subject, category, std::int64_t(e.n_events), e.fluence_n_per_cm2,
                          sigma_cell(e), e.none_observed() ? Cell(std::string("-")) : Cell(e.ci_low_cm2),
                          e.ci_high_cm2});
}

ReportTable make_estimate_table(const std::string& name, const std::string& title) {
    ReportTable t;
    t.name = name;
    t.title = title;
    t.columns = {"subject", "category", "events", "fluence_n_per_cm2", "sigma_cm2", "ci_low_cm2",
                 "ci_high_cm2"};
    return t;
}

void append_projection_rows(ReportTable& table, const std::vector<ProjectionRow>& rows) {
    for (const ProjectionRow& r : rows) {
        Cell variant = r.variant ? Cell(to_string(*r.variant)) : Cell(std::string("-"));
        if (r.mean_time) {
            table.rows.push_back({r.subject, variant, r.environment, std::int64_t(r.n_devices),
                                  r.fit.value(), r.mean_time->hours, r.mean_time->months()});
        } else {
            table.rows.push_back({r.subject, variant, r.environment, std::int64_t(r.n_devices),
                                  r.fit.value(), std::string("-"), std::string("-")});
        }
    }
}

ReportTable make_projection_table(const std::string& name, const std::string& title) {
    ReportTable t;
    t.name = name;
    t.title = title;
    t.columns = {"subject", "variant", "environment", "nodes", "fit", "mean_time_hours",
                 "mean_time_months"};
    return t;
}

std::vector<std::pair<std::string, ErrorRateBreakdown>>
profile_breakdowns(const DeviceProfile& profile) {
    std::vector<std::pair<std::string, ErrorRateBreakdown>> breakdowns;
    for (const ApplicationEntry& app : profile.applications) {
        // Individual baremetal benchmarks enter the cross-section tables;
        // their aggregate entry stands for them in the projections.
        if (app.kind == "baremetal") continue;
        breakdowns.emplace_back(app.name,
                                breakdown_from_log(app.to_log(), Flux(kNycSeaLevelFlux)));
    }
    return breakdowns;
}

ReportTable ratio_tables(const RatioReport& ratios) {
    ReportTable t;
    t.name = "ratios";
    t.title = "MTTF ratios (environment-invariant)";
    t.columns = {"comparison", "subject", "reference", "variant", "value"};
    for (const auto& imp : ratios.improvements)
        t.rows.push_back({std::string("c_plus_h_over_all"), imp.subject, imp.subject,
                          std::string("-"), imp.mttf_ratio});
    for (const auto& deg : ratios.degradations)
        t.rows.push_back({std::string("degradation"), deg.subject, deg.reference,
                          to_string(deg.variant), deg.fraction});
    for (const auto& grp : ratios.group_comparisons)
        t.rows.push_back({std::string("group_mean_over_subject"), grp.group_label,
                          grp.reference_subject, std::string("All"), grp.mean_mttf_ratio});
    return t;
}

void analyze_one(Report& report, const std::string& memory_name, const CampaignAnalysis& analysis,
                 const MemoryGeometry& geometry, double fluence, ReportTable& xsec,
                 ReportTable& classes, ReportTable& shapes, ReportTable& sefis) {
    xsec.rows.push_back({memory_name, to_string(geometry.kind), fluence,
                         std::int64_t(analysis.counted_bits()), sigma_cell(analysis.sigma_device),
                         analysis.sigma_device.none_observed() ? Cell(std::string("-"))
                                                               : Cell(analysis.sigma_device.ci_low_cm2),
                         analysis.sigma_device.ci_high_cm2, sigma_cell(analysis.sigma_bit),
                         analysis.sigma_bit.ci_high_cm2, std::int64_t(analysis.sefi_events)});

    classes.rows.push_back({memory_name, std::int64_t(analysis.sbu_events),
                            std::int64_t(analysis.mbu_events), std::int64_t(analysis.mcu_events),
                            std::int64_t(analysis.sefi_events)});

    for (const auto& entry : analysis.shapes.entries)
        shapes.rows.push_back({memory_name, entry.label, entry.shape.key(),
                               std::int64_t(entry.shape.frame_extent),
                               std::int64_t(entry.shape.bit_extent), entry.probability,
                               entry.raw_percent});

    for (const UpsetEvent& e : analysis.events) {
        if (e.cls != UpsetClass::sefi) continue;
        std::uint32_t min_f = e.bits.front().frame, max_f = e.bits.front().frame;
        for (const UpsetBit& b : e.bits) {
            min_f = std::min(min_f, b.frame);
            max_f = std::max(max_f, b.frame);
        }
        sefis.rows.push_back({memory_name, std::int64_t(e.cycle()), std::int64_t(e.bits.size()),
                              std::int64_t(min_f), std::int64_t(max_f)});
    }

    report.notes.push_back(memory_name + ": fluence " + provenance_double(fluence) +
                           " n/cm^2 is equivalent to " + provenance_double(fluence / kNycSeaLevelFlux) +
                           " hours at the NYC sea-level reference flux (fluence / 13)");
}

} // namespace

Report cmd_analyze_readback(const AnalyzeReadbackArgs& args, const GlobalOptions& opt) {
    Report report;
    report.command = "analyze-readback";
    report.provenance["confidence"] = provenance_double(opt.confidence);
    report.provenance["fluence_uncertainty"] = opt.fluence_uncertainty ? "on" : "off";
    report.provenance["sefi_threshold_bits"] = std::to_string(args.sefi_threshold_bits);

    AnalysisOptions analysis_opt;
    analysis_opt.sefi_threshold_bits = args.sefi_threshold_bits;
    analysis_opt.confidence = opt.confidence;
    analysis_opt.fluence_uncertainty = opt.fluence_uncertainty;

    ReportTable xsec;
    xsec.name = "memory_cross_sections";
    xsec.title = "NSEU cross-sections";
    xsec.columns = {"memory",        "kind",       "fluence_n_per_cm2", "upsets",
                    "sigma_device_cm2", "ci_low_cm2", "ci_high_cm2",       "sigma_bit_cm2",
                    "bit_ci_high_cm2",  "sefis"};
    ReportTable classes;
    classes.name = "event_classes";
    classes.title = "Event classification";
    classes.columns = {"memory", "sbu", "mbu", "mcu", "sefi"};
    ReportTable shapes;
    shapes.name = "shape_distribution";
    shapes.title = "Upset shapes";
    shapes.columns = {"memory", "label", "offsets", "frame_extent", "bit_extent", "probability",
                      "raw_percent"};
    ReportTable sefis;
    sefis.name = "sefi_events";
    sefis.title = "SEFI events (excluded from cross-sections)";
    sefis.columns = {"memory", "cycle", "bits", "first_frame", "last_frame"};

    std::string digest;
    if (!args.diff_csv.empty()) {
        if (!args.containers.empty())
            throw ValidationError("give either readback containers or --diff-csv, not both");
        if (args.frames == 0 || args.bits_per_frame == 0 || args.fluence <= 0)
            throw ValidationError(
                "a pre-diffed CSV needs --frames, --bits-per-frame and --fluence");
        MemoryGeometry g;
        g.name = args.name;
        g.kind = memory_kind_from_string(args.kind);
        g.frame_count = args.frames;
        g.bits_per_frame = args.bits_per_frame;
        g.total_bits = std::uint64_t(args.frames) * args.bits_per_frame;
        g.block_bits = args.block_bits;
        const auto diffs = load_diff_csv(args.diff_csv);
        const CampaignAnalysis analysis = analyze_diff_sets(diffs, g, Fluence(args.fluence),
                                                            args.config_period, analysis_opt);
        analyze_one(report, g.name, analysis, g, args.fluence, xsec, classes, shapes, sefis);
        digest = digest_file(args.diff_csv);
    } else {
        if (args.containers.empty()) throw ValidationError("no readback container given");
        for (const auto& path : args.containers) {
            const ReadbackCampaign campaign = load_rbkc(path);
            const CampaignAnalysis analysis = analyze_campaign(campaign, analysis_opt);
            analyze_one(report, campaign.geometry.name, analysis, campaign.geometry,
                        campaign.fluence.n_per_cm2(), xsec, classes, shapes, sefis);
            digest += (digest.empty() ? "" : "+") + digest_file(path);
        }
    }
    report.input_digest = digest;
    report.tables = {std::move(xsec), std::move(classes), std::move(shapes), std::move(sefis)};
    return report;
}

Report cmd_xsection(const XsectionArgs& args, const GlobalOptions& opt) {
    Report report;
    report.command = "xsection";
    report.input_digest = digest_file(args.log_path);
    report.provenance["confidence"] = provenance_double(opt.confidence);
    report.provenance["flux_n_per_cm2_hour"] = provenance_double(args.flux);
    report.provenance["fluence_uncertainty"] = opt.fluence_uncertainty ? "on" : "off";

    const std::vector<CampaignLog> logs = load_campaign_logs(args.log_path, args.fluence_override);

    EstimateOptions est_opt;
    est_opt.confidence = opt.confidence;
    est_opt.fluence_uncertainty = opt.fluence_uncertainty;

    ReportTable estimates =
        make_estimate_table("dynamic_cross_sections", "Dynamic cross-sections per category");
    ReportTable breakdowns;
    breakdowns.name = "fit_breakdown";
    breakdowns.title = "FIT breakdown by category";
    breakdowns.columns = {"benchmark", "fit_critical", "fit_tolerable", "fit_hang", "fit_c_plus_h",
                          "fit_all"};

    CategoryCounts total_counts;
    double total_fluence = 0;
    for (const CampaignLog& log : logs) {
        const DynamicCrossSections d = dynamic_cross_sections(log, est_opt);
        for (const auto& [category, estimate] : d.items())
            add_estimate_row(estimates, log.benchmark, category, *estimate);
        const ErrorRateBreakdown b = breakdown_from_log(log, Flux(args.flux));
        breakdowns.rows.push_back({log.benchmark, fit_cell(b.critical), fit_cell(b.tolerable),
                                   fit_cell(b.hang), fit_cell(b.c_plus_h()), fit_cell(b.all())});
        total_counts.runs += log.counts.runs;
        total_counts.correct += log.counts.correct;
        total_counts.tolerable_sdc += log.counts.tolerable_sdc;
        total_counts.critical_sdc += log.counts.critical_sdc;
        total_counts.crash_recoverable += log.counts.crash_recoverable;
        total_counts.crash_soft_persistent += log.counts.crash_soft_persistent;
        total_counts.timeout += log.counts.timeout;
        total_fluence += log.fluence.n_per_cm2();
    }
    if (logs.size() > 1) {
        CampaignLog total;
        total.benchmark = "Total";
        total.counts = total_counts;
        total.fluence = Fluence(total_fluence);
        const DynamicCrossSections d = dynamic_cross_sections(total, est_opt);
        for (const auto& [category, estimate] : d.items())
            add_estimate_row(estimates, total.benchmark, category, *estimate);
        const ErrorRateBreakdown b = breakdown_from_log(total, Flux(args.flux));
        breakdowns.rows.push_back({total.benchmark, fit_cell(b.critical), fit_cell(b.tolerable),
                                   fit_cell(b.hang), fit_cell(b.c_plus_h()), fit_cell(b.all())});
    }

    report.tables = {std::move(estimates), std::move(breakdowns)};
    return report;
}

namespace {

double pl_sigma_device_total(const DeviceProfile& profile) {
    double sigma = 0;
    for (const MemoryEntry& m : profile.memories)
        if (m.geometry.kind != MemoryKind::cache_array) sigma += m.sigma_device_effective();
    return sigma;
}

} // namespace

Report cmd_project(const DeviceProfile& profile, const Environment& env, Deployment dep,
                   const GlobalOptions& opt, const std::string& profile_digest) {
    (void)opt;
    profile.validate();
    if (dep.n_devices == 0) throw ValidationError("a deployment needs at least one device");

    Report report;
    report.command = "project";
    report.input_digest = profile_digest;
    report.provenance["profile"] = profile.name;
    report.provenance["environment"] = env.name;
    report.provenance["flux_n_per_cm2_hour"] = provenance_double(env.resolved_flux());
    report.provenance["nodes"] = std::to_string(dep.n_devices);

    ReportTable mttu = make_projection_table("memory_mttu", "Mean time to upset, PL memories");
    double pl_sigma = 0;
    for (const MemoryEntry& m : profile.memories) {
        if (m.geometry.kind == MemoryKind::cache_array) continue;
        const double sigma = m.sigma_device_effective();
        pl_sigma += sigma;
        append_projection_rows(
            mttu, {project(m.geometry.name, sigma, env, dep, MeanTimeTo::Kind::upset)});
    }
    if (pl_sigma > 0)
        append_projection_rows(mttu,
                               {project("PL total", pl_sigma, env, dep, MeanTimeTo::Kind::upset)});
    if (profile.cache_mttu_base_months > 0) {
        const double scale = env.flux_multiplier * double(dep.n_devices);
        ProjectionRow row;
        row.subject = "APU caches";
        row.environment = env.name;
        row.n_devices = dep.n_devices;
        row.mean_time =
            MeanTimeTo{profile.cache_mttu_base_months * kHoursPerMonth / scale, MeanTimeTo::Kind::upset};
        row.fit = FitRate(kFitReferenceHours / row.mean_time->hours);
        append_projection_rows(mttu, {row});
        report.notes.push_back(
            "APU cache MTTU uses the profile's configured base (cache_mttu_base_months)");
    }

    ReportTable mttf = make_projection_table("application_mttf", "Mean time to failure, applications");
    const auto breakdowns = profile_breakdowns(profile);
    const auto rows = mttf_table(breakdowns, env, dep);
    append_projection_rows(mttf, rows);

    report.tables = {std::move(mttu), std::move(mttf),
                     ratio_tables(ratio_report(rows, profile.sw_only_application_names()))};
    return report;
}

Report cmd_report(const DeviceProfile& profile, const GlobalOptions& opt,
                  const std::string& profile_digest) {
    profile.validate();

    Report report;
    report.command = "report";
    report.input_digest = profile_digest;
    report.provenance["profile"] = profile.name;
    report.provenance["confidence"] = provenance_double(opt.confidence);

    EstimateOptions est_opt;
    est_opt.confidence = opt.confidence;
    est_opt.fluence_uncertainty = opt.fluence_uncertainty;

    // Static cross-sections recomputed from the bundled event counts.
    ReportTable statics;
    statics.name = "memory_cross_sections";
    statics.title = "Static NSEU cross-sections";
    statics.columns = {"memory",         "kind",           "events",
                       "fluence_n_per_cm2", "sigma_device_cm2", "sigma_bit_cm2",
                       "bit_ci_low_cm2", "bit_ci_high_cm2", "sefis"};
    for (const MemoryEntry& m : profile.memories) {
        if (m.fluence_n_per_cm2 <= 0) continue;
        EstimateOptions bit_opt = est_opt;
        bit_opt.basis = Basis::per_bit;
        bit_opt.bit_count = m.geometry.total_bits;
        const CrossSectionEstimate bit =
            estimate_cross_section(m.events, Fluence(m.fluence_n_per_cm2), bit_opt);
        const CrossSectionEstimate device =
            estimate_cross_section(m.events, Fluence(m.fluence_n_per_cm2), est_opt);
        statics.rows.push_back({m.geometry.name, to_string(m.geometry.kind), std::int64_t(m.events),
                                m.fluence_n_per_cm2, sigma_cell(device), sigma_cell(bit),
                                bit.none_observed() ? Cell(std::string("-")) : Cell(bit.ci_low_cm2),
                                bit.ci_high_cm2, std::int64_t(m.sefi_count)});
    }

    ReportTable shapes;
    shapes.name = "shape_distribution";
    shapes.title = "Bundled upset shape distributions";
    shapes.columns = {"distribution", "label", "offsets", "raw_percent", "probability"};
    for (const auto& [key, dist] : profile.shape_distributions)
        for (const auto& e : dist.entries)
            shapes.rows.push_back({key, e.label, e.shape.key(), e.raw_percent, e.probability});

    ReportTable apps = make_estimate_table("application_cross_sections",
                                           "Dynamic cross-sections of the bundled applications");
    for (const ApplicationEntry& a : profile.applications) {
        const DynamicCrossSections d = dynamic_cross_sections(a.to_log(), est_opt);
        for (const auto& [category, estimate] : d.items())
            add_estimate_row(apps, a.name, category, *estimate);
    }

    ReportTable projections =
        make_projection_table("projections", "Projections across the three presets");
    const double pl_sigma = pl_sigma_device_total(profile);
    if (pl_sigma > 0)
        append_projection_rows(projections,
                               preset_rows("PL total", pl_sigma, MeanTimeTo::Kind::upset));
    if (profile.cache_mttu_base_months > 0)
        append_projection_rows(projections,
                               preset_rows_from_base("APU caches", profile.cache_mttu_base_months,
                                                     MeanTimeTo::Kind::upset));
    const auto breakdowns = profile_breakdowns(profile);
    std::vector<ProjectionRow> rows_40kft;
    for (const auto& [env, dep] : projection_presets()) {
        const auto rows = mttf_table(breakdowns, env, dep);
        if (env.name == "nyc_40kft" && dep.n_devices == 1) rows_40kft = rows;
        append_projection_rows(projections, rows);
    }

    report.tables = {std::move(statics), std::move(shapes), std::move(apps), std::move(projections),
                     ratio_tables(ratio_report(rows_40kft, profile.sw_only_application_names()))};

    // Prior published campaigns, shipped as non-authoritative reference data.
    for (const std::filesystem::path& dir : profile_search_dirs()) {
        const std::filesystem::path ref = dir / "reference" / (profile.name + "_prior_reports.json");
        std::error_code ec;
        if (!std::filesystem::exists(ref, ec)) continue;
        std::ifstream in(ref);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw InputFormatError("reference data is not valid JSON: " + std::string(e.what()),
                                   std::uint64_t(e.byte));
        }
        ReportTable refs;
        refs.name = "reference_cross_sections";
        refs.title = "Prior published cross-sections (non-authoritative)";
        refs.columns = {"source", "particle", "fluence_n_per_cm2", "cram_sigma_bit_cm2",
                        "bram_sigma_bit_cm2", "ps_sigma_device_cm2"};
        for (const json& c : j.value("campaigns", json::array())) {
            auto num_or_dash = [&](const char* key) -> Cell {
                if (!c.contains(key) || c.at(key).is_null()) return std::string("-");
                return c.at(key).get<double>();
            };
            refs.rows.push_back({c.value("source", ""), c.value("particle", ""),
                                 num_or_dash("fluence_n_per_cm2"), num_or_dash("cram_sigma_bit_cm2"),
                                 num_or_dash("bram_sigma_bit_cm2"),
                                 num_or_dash("ps_sigma_device_cm2")});
        }
        report.tables.push_back(std::move(refs));
        report.notes.push_back("reference_cross_sections lists prior published campaigns; "
                               "values are not part of this profile's measurements");
        break;
    }
    return report;
}

Report cmd_simulate(const SimulateArgs& args, const GlobalOptions& opt) {
    (void)opt;
    std::ifstream in(args.config_path);
    if (!in) throw InputFormatError("cannot open file: " + args.config_path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputFormatError("simulation config is not valid JSON: " + std::string(e.what()),
                               std::uint64_t(e.byte));
    }

    Report report;
    report.command = "simulate";
    report.input_digest = digest_file(args.config_path);

    const std::string mode = j.value("mode", "failure-campaign");
    report.provenance["mode"] = mode;

    try {
        if (mode == "scrub-race") {
            ScrubRaceConfig cfg;
            const json& sr = j.value("scrub_race", json::object());
            cfg.arrival_rate_per_min = sr.value("arrival_rate_per_min", cfg.arrival_rate_per_min);
            cfg.scrub_rate_per_min = sr.value("scrub_rate_per_min", cfg.scrub_rate_per_min);
            cfg.horizon_minutes = sr.value("horizon_minutes", cfg.horizon_minutes);
            cfg.trials = sr.value("trials", cfg.trials);
            cfg.device_frames = sr.value("device_frames", cfg.device_frames);
            cfg.frame_scan_rate_per_min =
                sr.value("frame_scan_rate_per_min", cfg.frame_scan_rate_per_min);
            cfg.series_points = sr.value("series_points", cfg.series_points);
            cfg.seed = j.value("seed", std::uint64_t(1));
            if (args.seed_override != 0) cfg.seed = args.seed_override;

            const SimResult result = run_scrub_race(cfg);
            report.provenance["seed"] = std::to_string(result.seed);

            ReportTable summary;
            summary.name = "simulation_summary";
            summary.title = "Scrub race summary";
            summary.columns = {"metric", "value"};
            summary.rows.push_back({std::string("trials"), std::int64_t(result.trials)});
            summary.rows.push_back({std::string("horizon_minutes"), result.horizon});
            summary.rows.push_back(
                {std::string("arrival_rate_per_min"), cfg.arrival_rate_per_min});
            summary.rows.push_back({std::string("scrub_rate_per_min"), cfg.scrub_rate_per_min});
            summary.rows.push_back(
                {std::string("steady_state_backlog"), result.steady_state_backlog});

            ReportTable series;
            series.name = "backlog_series";
            series.title = "Mean uncorrected upsets over time";
            series.columns = {"minute", "mean_backlog"};
            for (const auto& [minute, backlog] : result.uncorrected_accumulation)
                series.rows.push_back({minute, backlog});

            report.tables = {std::move(summary), std::move(series)};
            return report;
        }
        if (mode != "failure-campaign")
            throw ValidationError("unknown simulation mode: " + mode);

        const std::string profile_name = j.value("profile", "");
        if (profile_name.empty())
            throw ValidationError("a failure campaign config needs a profile name");
        const DeviceProfile profile = load_profile(profile_name);
        report.provenance["profile"] = profile.name;

        std::vector<std::string> array_names;
        for (const json& a : j.value("arrays", json::array()))
            array_names.push_back(a.get<std::string>());
        const std::vector<SimArray> arrays = profile.sim_arrays(array_names);

        FailureCampaignConfig cfg;
        if (j.contains("environment")) {
            const json& env = j.at("environment");
            if (env.is_string())
                cfg.environment = Environment::by_name(env.get<std::string>());
            else
                cfg.environment = Environment::with_flux(env.value("name", "custom"),
                                                         env.at("flux_per_cm2_hour").get<double>());
        }
        cfg.deployment.n_devices = j.value("nodes", std::uint64_t(1));
        cfg.trials = j.value("trials", std::uint32_t(10000));
        cfg.horizon_hours = j.value("horizon_hours", 0.0);
        cfg.seed = j.value("seed", std::uint64_t(1));
        if (args.seed_override != 0) cfg.seed = args.seed_override;

        if (j.contains("mitigation")) {
            const json& m = j.at("mitigation");
            cfg.mitigation.scrub_rate_per_min = m.value("scrub_rate_per_min", 0.0);
            cfg.mitigation.frame_ecc = m.value("frame_ecc", false);
            cfg.mitigation.interleaving = m.value("interleaving", false);
            cfg.mitigation.dirty_line_fraction = m.value("dirty_line_fraction", 0.5);
            if (m.contains("cache_policy"))
                for (const auto& [array, policy] : m.at("cache_policy").items())
                    cfg.mitigation.cache_policy[array] =
                        cache_policy_from_string(policy.get<std::string>());
        }

        const SimResult result = run_failure_campaign(arrays, cfg);
        report.provenance["seed"] = std::to_string(result.seed);
        report.provenance["environment"] = cfg.environment.name;
        report.provenance["nodes"] = std::to_string(cfg.deployment.n_devices);

        const double analytic_rate =
            combined_upset_rate_per_hour(arrays, cfg.environment, cfg.deployment);

        ReportTable summary;
        summary.name = "simulation_summary";
        summary.title = "Failure campaign summary";
        summary.columns = {"metric", "value"};
        summary.rows.push_back({std::string("trials"), std::int64_t(result.trials)});
        summary.rows.push_back({std::string("horizon_hours"), result.horizon});
        summary.rows.push_back(
            {std::string("failures"), std::int64_t(result.time_to_first_failure_hours.size())});
        summary.rows.push_back({std::string("censored"), std::int64_t(result.censored)});
        if (result.mean_time) {
            summary.rows.push_back({std::string("mean_time_hours"), result.mean_time->hours});
            summary.rows.push_back({std::string("mean_time_months"), result.mean_time->months()});
            summary.rows.push_back(
                {std::string("standard_error_hours"), result.standard_error_hours});
        } else {
            summary.rows.push_back({std::string("mean_time_hours"), std::string("-")});
        }
        summary.rows.push_back(
            {std::string("analytic_unmitigated_mttu_hours"), 1.0 / analytic_rate});

        ReportTable counts;
        counts.name = "failure_counts";
        counts.title = "First-failure attribution";
        counts.columns = {"array", "count"};
        for (const auto& [array, count] : result.failure_counts)
            counts.rows.push_back({array, std::int64_t(count)});

        ReportTable samples;
        samples.name = "failure_time_samples";
        samples.title = "Time-to-first-failure samples";
        samples.columns = {"sample", "hours"};
        for (std::size_t i = 0; i < result.time_to_first_failure_hours.size(); ++i)
            samples.rows.push_back(
                {std::int64_t(i), result.time_to_first_failure_hours[i]});

        report.tables = {std::move(summary), std::move(counts), std::move(samples)};
        return report;
    } catch (const json::exception& e) {
        throw InputFormatError("simulation config has an unexpected structure: " +
                               std::string(e.what()));
    }
}

} // namespace radrel
