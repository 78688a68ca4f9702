#include "testgen/pipeline.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "testgen/assembly.hpp"
#include "testgen/prompting.hpp"
#include "testgen/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace testgen::pipeline {

std::string serialize_outcome(const OutcomeRecord& r) {
    json transcript = json::array();
    for (const verification::TranscriptEntry& e : r.transcript)
        transcript.push_back(json{{"error_text", e.error_text},
                                  {"phase", e.phase},
                                  {"revision", e.revision}});
    json j{{"class_name", r.class_name},
           {"compile_attempts", r.compile_attempts},
           {"error", r.error},
           {"exec_attempts", r.exec_attempts},
           {"final_source", r.final_source},
           {"focal_method_signature", r.focal_method_signature},
           {"invokes_focal", r.invokes_focal},
           {"mode", r.mode},
           {"oracle_text", r.oracle_text},
           {"prefix_text", r.prefix_text},
           {"project", r.project},
           {"query_index", r.query_index},
           {"stages", r.stages},
           {"status", r.status},
           {"transcript", transcript}};
    return j.dump();
}

OutcomeRecord parse_outcome_line(const std::string& line) {
    OutcomeRecord r;
    try {
        json j = json::parse(line);
        r.query_index = j.at("query_index").get<int>();
        r.project = j.value("project", "");
        r.class_name = j.value("class_name", "");
        r.focal_method_signature = j.value("focal_method_signature", "");
        r.mode = j.value("mode", "");
        r.status = j.at("status").get<std::string>();
        r.compile_attempts = j.value("compile_attempts", 0);
        r.exec_attempts = j.value("exec_attempts", 0);
        r.invokes_focal = j.value("invokes_focal", false);
        r.stages = j.value("stages", std::vector<std::string>{});
        r.prefix_text = j.value("prefix_text", "");
        r.oracle_text = j.value("oracle_text", "");
        r.final_source = j.value("final_source", "");
        r.error = j.value("error", "");
        if (j.contains("transcript"))
            for (const json& e : j["transcript"])
                r.transcript.push_back(verification::TranscriptEntry{
                    e.value("phase", ""), e.value("error_text", ""), e.value("revision", 0)});
    } catch (const json::exception& e) {
        throw Error(std::string("bad outcome line: ") + e.what());
    }
    return r;
}

std::vector<OutcomeRecord> load_outcomes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read outcomes: " + path.string());
    std::vector<OutcomeRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(parse_outcome_line(line));
    }
    return out;
}

Runtime make_runtime(const config::RunConfig& config) {
    Runtime rt;
    if (config.llm.backend == "replay") {
        rt.backend = std::make_unique<llm::ReplayBackend>(fs::path(config.llm.cassette));
    } else if (config.llm.backend == "live") {
        llm::HttpBackendConfig http;
        http.base_url = config.llm.base_url;
        http.path = config.llm.path;
        const char* key = std::getenv(config.llm.api_key_env.c_str());
        http.api_key = key ? key : "";
        http.retries = config.llm.retries;
        http.backoff_base_ms = config.llm.backoff_base_ms;
        http.rate_limit_per_sec = config.llm.rate_limit_per_sec;
        rt.backend = std::make_unique<llm::HttpBackend>(http);
    } else {
        throw config::ConfigError("unknown llm backend: " + config.llm.backend);
    }

    if (config.embedding.backend == "local-hash") {
        rt.embedding = std::make_unique<selection::LocalHashEmbedding>(
            static_cast<std::size_t>(config.embedding.dim));
    } else if (config.embedding.backend == "remote") {
        rt.embedding = std::make_unique<selection::RemoteEmbedding>(config.embedding.endpoint,
                                                                    config.embedding.path);
    } else {
        throw config::ConfigError("unknown embedding backend: " + config.embedding.backend);
    }

    if (config.toolchain.kind == "fake") {
        rt.toolchain = std::make_unique<verification::FakeToolchain>(
            config.toolchain.compile_fail_marker, config.toolchain.exec_fail_marker);
    } else if (config.toolchain.kind == "commands") {
        verification::CommandToolchainConfig tc;
        tc.javac_cmd = config.toolchain.javac_cmd;
        tc.junit_run_cmd = config.toolchain.junit_run_cmd;
        tc.classpath = config.toolchain.classpath;
        tc.workspace_root = config.toolchain.workspace_root;
        rt.toolchain = std::make_unique<verification::CommandToolchain>(tc);
    } else {
        throw config::ConfigError("unknown toolchain kind: " + config.toolchain.kind);
    }
    return rt;
}

namespace {

llm::ChatRequest generation_request(const config::RunConfig& config,
                                    const prompting::PromptBundle& bundle) {
    llm::ChatRequest req;
    req.model_id = config.llm.model;
    req.max_output_tokens = config.llm.max_output_tokens;
    req.temperature = config.llm.temperature;
    req.messages.push_back({llm::Role::System, bundle.role_text});
    req.messages.push_back(
        {llm::Role::User, bundle.task_text + bundle.section_sep + bundle.demo_block +
                              bundle.target_block});
    return req;
}

OutcomeRecord run_one_query(const config::RunConfig& config, const corpus::Query& query,
                            int query_index, const corpus::DemoPool& prefix_pool,
                            const corpus::DemoPool& oracle_pool,
                            const assembly::ClasspathIndex& classpath_index, Runtime& runtime,
                            const fs::path& workspace_root) {
    OutcomeRecord record;
    record.query_index = query_index;
    record.project = query.project;
    record.class_name = query.class_name;
    record.focal_method_signature = query.focal_method_signature;
    record.mode = prompting::to_string(config.mode);

    try {
        corpus::DemoPool pfiltered = corpus::exclusion_filter(prefix_pool, query);
        corpus::DemoPool ofiltered = corpus::exclusion_filter(oracle_pool, query);

        selection::SelectionStrategy strategy{config.strategy,
                                              mix_seed(config.seed,
                                                       static_cast<std::uint64_t>(query_index))};

        assembly::CandidateTest candidate;
        assembly::JUnitDialect dialect{config.junit5};

        if (config.mode == prompting::GenerationMode::Cascaded) {
            selection::SelectedDemos prefix_demos = selection::select_demos(
                prompting::query_embed_text_prefix(query), pfiltered, config.shots, strategy,
                *runtime.embedding, prompting::demo_embed_text);
            prompting::PromptBundle prefix_prompt = prompting::enforce_token_budget(
                prompting::render_prefix_prompt(query, prefix_demos, config.variant,
                                                config.templates),
                config.token_budget);
            record.stages.push_back("prefix");
            llm::ChatRequest prefix_request = generation_request(config, prefix_prompt);
            llm::ChatReply prefix_reply = runtime.backend->complete(prefix_request);
            record.prefix_text = prompting::parse_llm_reply(prefix_reply.content);

            selection::SelectedDemos oracle_demos = selection::select_demos(
                prompting::query_embed_text_oracle(query, record.prefix_text), ofiltered,
                config.shots, strategy, *runtime.embedding, prompting::demo_embed_text);
            prompting::PromptBundle oracle_prompt = prompting::enforce_token_budget(
                prompting::render_oracle_prompt(query, record.prefix_text, oracle_demos,
                                                config.variant, config.templates),
                config.token_budget);
            record.stages.push_back("oracle");
            llm::ChatRequest oracle_request = generation_request(config, oracle_prompt);
            if (config.carry_history) {
                // prepend the prefix-stage turns so the oracle stage sees them
                oracle_request.messages.insert(
                    oracle_request.messages.begin() + 1,
                    {prefix_request.messages.back(),
                     llm::ChatMessage{llm::Role::Assistant, prefix_reply.content}});
            }
            llm::ChatReply oracle_reply = runtime.backend->complete(oracle_request);
            record.oracle_text = prompting::parse_llm_reply(oracle_reply.content);

            candidate = assembly::assemble(record.prefix_text, record.oracle_text, query,
                                           classpath_index, dialect);
        } else {
            selection::SelectedDemos demos = selection::select_demos(
                prompting::query_embed_text_prefix(query), pfiltered, config.shots, strategy,
                *runtime.embedding, prompting::demo_embed_text);
            prompting::PromptBundle prompt = prompting::enforce_token_budget(
                prompting::render_direct_prompt(query, demos, ofiltered, config.variant,
                                                config.templates),
                config.token_budget);
            record.stages.push_back("direct");
            llm::ChatReply reply = runtime.backend->complete(generation_request(config, prompt));
            record.prefix_text = prompting::parse_llm_reply(reply.content);
            candidate = assembly::assemble_full_body(record.prefix_text, query, classpath_index,
                                                     dialect);
        }

        verification::RepairContext ctx;
        ctx.backend = runtime.backend.get();
        ctx.model_id = config.llm.model;
        ctx.max_output_tokens = config.llm.max_output_tokens;
        ctx.temperature = config.llm.temperature;
        ctx.templates = &config.templates;

        fs::path workspace = workspace_root / ("candidate_" + std::to_string(query_index));
        verification::VerificationOutcome outcome = verification::repair_loop(
            candidate, query, config.repair, ctx, *runtime.toolchain, workspace);

        record.status = verification::to_string(outcome.status);
        record.compile_attempts = outcome.compile_attempts;
        record.exec_attempts = outcome.exec_attempts;
        record.final_source = outcome.final_candidate.source_file;
        record.transcript = outcome.transcript;
        record.invokes_focal = verification::invokes_focal(outcome.final_candidate, query);
    } catch (const std::exception& e) {
        record.status = "error";
        record.error = e.what();
    }
    return record;
}

} // namespace

void run_generate(const config::RunConfig& config, const fs::path& queries_path,
                  const fs::path& out_path, Runtime& runtime) {
    std::vector<corpus::Query> queries = corpus::load_queries(queries_path);
    corpus::DemoPool prefix_pool = corpus::load_pool(config.prefix_pool_path);
    corpus::DemoPool oracle_pool = corpus::load_pool(config.oracle_pool_path);

    assembly::ClasspathIndex classpath_index;
    if (!config.project_root.empty() && fs::is_directory(config.project_root))
        classpath_index = assembly::ClasspathIndex::scan(fs::path(config.project_root));

    fs::path workspace_root = config.toolchain.workspace_root.empty()
                                  ? fs::temp_directory_path() / "testgen_workspaces"
                                  : fs::path(config.toolchain.workspace_root);
    fs::create_directories(workspace_root);

    std::vector<OutcomeRecord> records(queries.size());
    int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < queries.size(); ++i)
            records[i] = run_one_query(config, queries[i], static_cast<int>(i), prefix_pool,
                                       oracle_pool, classpath_index, runtime, workspace_root);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= queries.size()) return;
                records[i] = run_one_query(config, queries[i], static_cast<int>(i), prefix_pool,
                                           oracle_pool, classpath_index, runtime, workspace_root);
            }
        };
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write outcomes: " + out_path.string());
    for (const OutcomeRecord& r : records) out << serialize_outcome(r) << '\n';
}

metrics::RunReport run_eval(const fs::path& outcomes_path, const fs::path& queries_path,
                            const std::string& mode, const std::string& strategy,
                            const std::string& variant) {
    std::vector<OutcomeRecord> records = load_outcomes(outcomes_path);
    if (records.empty()) throw metrics::EmptyResultSet("outcomes file is empty");

    std::vector<metrics::OutcomeStat> stats;
    stats.reserve(records.size());
    for (const OutcomeRecord& r : records) {
        metrics::OutcomeStat s;
        s.passed = r.status == "passed";
        s.invokes_focal = r.invokes_focal;
        s.compile_attempts = r.compile_attempts;
        s.exec_attempts = r.exec_attempts;
        s.focal_key = r.class_name + "#" + r.focal_method_signature;
        s.project = r.project;
        stats.push_back(std::move(s));
    }

    std::map<std::string, std::set<std::string>> focal_sets;
    if (!queries_path.empty() && fs::exists(queries_path)) {
        for (const corpus::Query& q : corpus::load_queries(queries_path))
            focal_sets[q.project].insert(q.class_name + "#" + q.focal_method_signature);
    } else {
        for (const metrics::OutcomeStat& s : stats) focal_sets[s.project].insert(s.focal_key);
    }
    return metrics::build_report(stats, focal_sets, mode, strategy, variant);
}

void write_pools(const corpus::PoolBuildResult& pools, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    corpus::save_pool(pools.prefix_pool, out_dir / "prefix_pool.jsonl");
    corpus::save_pool(pools.oracle_pool, out_dir / "oracle_pool.jsonl");
}

} // namespace testgen::pipeline
