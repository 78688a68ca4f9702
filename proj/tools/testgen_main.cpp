#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "testgen/config.hpp"
#include "testgen/corpus.hpp"
#include "testgen/llm.hpp"
#include "testgen/metrics.hpp"
#include "testgen/pipeline.hpp"
#include "testgen/verification.hpp"

namespace fs = std::filesystem;
using namespace testgen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitEmptyResults = 3;
constexpr int kExitBackendUnavailable = 4;

int run_pool_build(const std::string& project_root, const std::string& out_dir,
                   const std::string& source_dir, const std::string& test_dir) {
    corpus::ProjectLayout layout;
    layout.source_dir = source_dir;
    layout.test_dir = test_dir;
    corpus::PoolBuildResult pools = corpus::build_demo_pools(project_root, layout);
    pipeline::write_pools(pools, out_dir);
    for (const std::string& w : pools.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "prefix pool: " << pools.prefix_pool.size() << " entries\n"
              << "oracle pool: " << pools.oracle_pool.size() << " entries\n"
              << "written to " << out_dir << '\n';
    return kExitOk;
}

struct GenerateOverrides {
    std::string mode;
    std::string strategy;
    std::string variant;
    int shots = -1;
    int token_budget = -1;
    long long seed = -1;
    int jobs = 0;
};

int run_generate_cmd(const std::string& config_path, const std::string& queries_path,
                     const std::string& out_path, const GenerateOverrides& ovr) {
    config::RunConfig cfg = config::load_config(config_path);
    if (!ovr.mode.empty()) cfg.mode = prompting::mode_from_string(ovr.mode);
    if (!ovr.strategy.empty()) cfg.strategy = selection::strategy_from_string(ovr.strategy);
    if (!ovr.variant.empty()) cfg.variant = prompting::variant_from_string(ovr.variant);
    if (ovr.shots >= 0) cfg.shots = ovr.shots;
    if (ovr.token_budget > 0) cfg.token_budget = ovr.token_budget;
    if (ovr.seed >= 0) cfg.seed = static_cast<std::uint64_t>(ovr.seed);
    if (ovr.jobs > 0) cfg.jobs = ovr.jobs;
    pipeline::Runtime runtime = pipeline::make_runtime(cfg);
    pipeline::run_generate(cfg, queries_path, out_path, runtime);
    std::cout << "outcomes written to " << out_path << '\n';
    return kExitOk;
}

int run_eval_cmd(const std::string& outcomes_path, const std::string& queries_path,
                 const std::string& format, const std::string& mode, const std::string& strategy,
                 const std::string& variant, const std::string& out_path) {
    metrics::RunReport report =
        pipeline::run_eval(outcomes_path, queries_path, mode, strategy, variant);
    metrics::ReportFormat fmt =
        format == "json" ? metrics::ReportFormat::Json : metrics::ReportFormat::Table;
    std::string rendered = metrics::render_report(report, fmt);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        out << metrics::render_report(report, metrics::ReportFormat::Json);
    }
    std::cout << rendered;
    return kExitOk;
}

int run_report_cmd(const std::string& report_path, const std::string& format) {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) throw Error("cannot read report: " + report_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    metrics::RunReport report = metrics::parse_report_json(ss.str());
    metrics::ReportFormat fmt =
        format == "json" ? metrics::ReportFormat::Json : metrics::ReportFormat::Table;
    std::cout << metrics::render_report(report, fmt);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cascaded JUnit test generation pipeline"};
    app.require_subcommand(1);

    // pool build
    CLI::App* pool = app.add_subcommand("pool", "Demonstration pool operations");
    pool->require_subcommand(1);
    CLI::App* pool_build = pool->add_subcommand("build", "Mine demo pools from a Java project");
    std::string project_root, out_dir = "pools", source_dir = "src/main", test_dir = "src/test";
    pool_build->add_option("project_root", project_root, "Java project root")->required();
    pool_build->add_option("--out", out_dir, "Output directory for pool files");
    pool_build->add_option("--source-dir", source_dir, "Relative source directory");
    pool_build->add_option("--test-dir", test_dir, "Relative test directory");

    // generate
    CLI::App* generate = app.add_subcommand("generate", "Generate and verify unit tests");
    std::string config_path, queries_path, outcomes_path = "outcomes.jsonl";
    GenerateOverrides ovr;
    generate->add_option("--config", config_path, "Run configuration (JSON)")->required();
    generate->add_option("--queries", queries_path, "Queries file (JSON Lines)")->required();
    generate->add_option("--out", outcomes_path, "Outcomes output file");
    generate->add_option("--jobs", ovr.jobs, "Parallel query workers");
    generate->add_option("--mode", ovr.mode, "cascaded or direct");
    generate->add_option("--strategy", ovr.strategy,
                         "random, ascending, descending or totally_random");
    generate->add_option("--variant", ovr.variant, "well_crafted or vanilla");
    generate->add_option("--shots", ovr.shots, "Few-shot demo count");
    generate->add_option("--token-budget", ovr.token_budget, "Prompt token budget");
    generate->add_option("--seed", ovr.seed, "Run seed");

    // eval
    CLI::App* eval = app.add_subcommand("eval", "Compute metrics over an outcomes file");
    std::string eval_outcomes, eval_queries, eval_format = "table", eval_mode = "cascaded";
    std::string eval_strategy = "random", eval_variant = "well_crafted", eval_out;
    eval->add_option("--outcomes", eval_outcomes, "Outcomes file")->required();
    eval->add_option("--queries", eval_queries, "Queries file (defines the focal set)");
    eval->add_option("--format", eval_format, "table or json");
    eval->add_option("--mode", eval_mode, "Mode label for the report");
    eval->add_option("--strategy", eval_strategy, "Strategy label for the report");
    eval->add_option("--variant", eval_variant, "Variant label for the report");
    eval->add_option("--out", eval_out, "Also save the JSON report here");

    // report
    CLI::App* report = app.add_subcommand("report", "Render a saved JSON report");
    std::string report_path, report_format = "table";
    report->add_option("--report", report_path, "Saved report JSON")->required();
    report->add_option("--format", report_format, "table or json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pool_build->parsed()) return run_pool_build(project_root, out_dir, source_dir, test_dir);
        if (generate->parsed())
            return run_generate_cmd(config_path, queries_path, outcomes_path, ovr);
        if (eval->parsed())
            return run_eval_cmd(eval_outcomes, eval_queries, eval_format, eval_mode, eval_strategy,
                                eval_variant, eval_out);
        if (report->parsed()) return run_report_cmd(report_path, report_format);
    } catch (const metrics::EmptyResultSet& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEmptyResults;
    } catch (const llm::BackendUnavailable& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBackendUnavailable;
    } catch (const verification::ToolchainUnavailable& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBackendUnavailable;
    } catch (const llm::ReplayMiss& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBackendUnavailable;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitOk;
}
