#include "testgen/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace testgen::config {

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    RunConfig c;
    try {
        c.project_root = j.value("project_root", c.project_root);
        if (j.contains("pools")) {
            c.prefix_pool_path = j["pools"].value("prefix", "");
            c.oracle_pool_path = j["pools"].value("oracle", "");
        }
        c.mode = prompting::mode_from_string(j.value("mode", "cascaded"));
        if (j.contains("strategy")) {
            c.strategy = selection::strategy_from_string(j["strategy"].value("kind", "random"));
            c.seed = j["strategy"].value("seed", c.seed);
        }
        c.variant = prompting::variant_from_string(j.value("variant", "well_crafted"));
        c.shots = j.value("shots", c.shots);
        c.token_budget = j.value("token_budget", c.token_budget);
        if (j.contains("repair")) {
            c.repair.compile_max = j["repair"].value("compile_max", c.repair.compile_max);
            c.repair.exec_max = j["repair"].value("exec_max", c.repair.exec_max);
        }
        if (j.contains("llm")) {
            const json& l = j["llm"];
            c.llm.backend = l.value("backend", c.llm.backend);
            c.llm.cassette = l.value("cassette", c.llm.cassette);
            c.llm.base_url = l.value("base_url", c.llm.base_url);
            c.llm.path = l.value("path", c.llm.path);
            c.llm.model = l.value("model", c.llm.model);
            c.llm.temperature = l.value("temperature", c.llm.temperature);
            c.llm.max_output_tokens = l.value("max_output_tokens", c.llm.max_output_tokens);
            c.llm.retries = l.value("retries", c.llm.retries);
            c.llm.backoff_base_ms = l.value("backoff_base_ms", c.llm.backoff_base_ms);
            c.llm.rate_limit_per_sec = l.value("rate_limit_per_sec", c.llm.rate_limit_per_sec);
            c.llm.api_key_env = l.value("api_key_env", c.llm.api_key_env);
        }
        if (j.contains("embedding")) {
            const json& e = j["embedding"];
            c.embedding.backend = e.value("backend", c.embedding.backend);
            c.embedding.endpoint = e.value("endpoint", c.embedding.endpoint);
            c.embedding.path = e.value("path", c.embedding.path);
            c.embedding.dim = e.value("dim", c.embedding.dim);
        }
        if (j.contains("toolchain")) {
            const json& t = j["toolchain"];
            c.toolchain.kind = t.value("kind", c.toolchain.kind);
            c.toolchain.javac_cmd = t.value("javac_cmd", c.toolchain.javac_cmd);
            c.toolchain.junit_run_cmd = t.value("junit_run_cmd", c.toolchain.junit_run_cmd);
            c.toolchain.classpath = t.value("classpath", c.toolchain.classpath);
            c.toolchain.workspace_root = t.value("workspace_root", c.toolchain.workspace_root);
            c.toolchain.compile_fail_marker =
                t.value("compile_fail_marker", c.toolchain.compile_fail_marker);
            c.toolchain.exec_fail_marker = t.value("exec_fail_marker", c.toolchain.exec_fail_marker);
        }
        if (j.contains("templates")) {
            const json& t = j["templates"];
            prompting::PromptTemplates& tpl = c.templates;
            tpl.role = t.value("role", tpl.role);
            tpl.prefix_task_wellcrafted =
                t.value("prefix_task_wellcrafted", tpl.prefix_task_wellcrafted);
            tpl.oracle_task_wellcrafted =
                t.value("oracle_task_wellcrafted", tpl.oracle_task_wellcrafted);
            tpl.direct_task_wellcrafted =
                t.value("direct_task_wellcrafted", tpl.direct_task_wellcrafted);
            tpl.prefix_task_vanilla = t.value("prefix_task_vanilla", tpl.prefix_task_vanilla);
            tpl.oracle_task_vanilla = t.value("oracle_task_vanilla", tpl.oracle_task_vanilla);
            tpl.direct_task_vanilla = t.value("direct_task_vanilla", tpl.direct_task_vanilla);
            tpl.compile_fix_task = t.value("compile_fix_task", tpl.compile_fix_task);
            tpl.exec_fix_task = t.value("exec_fix_task", tpl.exec_fix_task);
            tpl.end_marker = t.value("end_marker", tpl.end_marker);
            tpl.section_sep = t.value("section_sep", tpl.section_sep);
        }
        c.seed = j.value("seed", c.seed);
        c.carry_history = j.value("carry_history", c.carry_history);
        c.junit5 = j.value("junit5", c.junit5);
        c.jobs = j.value("jobs", c.jobs);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    if (c.shots < 0) throw ConfigError("shots must be >= 0");
    if (c.token_budget <= 0) throw ConfigError("token_budget must be > 0");
    if (c.repair.compile_max < 0 || c.repair.exec_max < 0)
        throw ConfigError("repair budgets must be >= 0");
    return c;
}

std::string serialize_config(const RunConfig& c) {
    json j;
    j["project_root"] = c.project_root;
    j["pools"] = json{{"oracle", c.oracle_pool_path}, {"prefix", c.prefix_pool_path}};
    j["mode"] = prompting::to_string(c.mode);
    j["strategy"] = json{{"kind", selection::to_string(c.strategy)}, {"seed", c.seed}};
    j["variant"] = prompting::to_string(c.variant);
    j["shots"] = c.shots;
    j["token_budget"] = c.token_budget;
    j["repair"] = json{{"compile_max", c.repair.compile_max}, {"exec_max", c.repair.exec_max}};
    j["llm"] = json{{"api_key_env", c.llm.api_key_env},
                    {"backend", c.llm.backend},
                    {"backoff_base_ms", c.llm.backoff_base_ms},
                    {"base_url", c.llm.base_url},
                    {"cassette", c.llm.cassette},
                    {"max_output_tokens", c.llm.max_output_tokens},
                    {"model", c.llm.model},
                    {"path", c.llm.path},
                    {"rate_limit_per_sec", c.llm.rate_limit_per_sec},
                    {"retries", c.llm.retries},
                    {"temperature", c.llm.temperature}};
    j["embedding"] = json{{"backend", c.embedding.backend},
                          {"dim", c.embedding.dim},
                          {"endpoint", c.embedding.endpoint},
                          {"path", c.embedding.path}};
    j["toolchain"] = json{{"classpath", c.toolchain.classpath},
                          {"compile_fail_marker", c.toolchain.compile_fail_marker},
                          {"exec_fail_marker", c.toolchain.exec_fail_marker},
                          {"javac_cmd", c.toolchain.javac_cmd},
                          {"junit_run_cmd", c.toolchain.junit_run_cmd},
                          {"kind", c.toolchain.kind},
                          {"workspace_root", c.toolchain.workspace_root}};
    j["templates"] = json{{"compile_fix_task", c.templates.compile_fix_task},
                          {"direct_task_vanilla", c.templates.direct_task_vanilla},
                          {"direct_task_wellcrafted", c.templates.direct_task_wellcrafted},
                          {"end_marker", c.templates.end_marker},
                          {"exec_fix_task", c.templates.exec_fix_task},
                          {"oracle_task_vanilla", c.templates.oracle_task_vanilla},
                          {"oracle_task_wellcrafted", c.templates.oracle_task_wellcrafted},
                          {"prefix_task_vanilla", c.templates.prefix_task_vanilla},
                          {"prefix_task_wellcrafted", c.templates.prefix_task_wellcrafted},
                          {"role", c.templates.role},
                          {"section_sep", c.templates.section_sep}};
    j["seed"] = c.seed;
    j["carry_history"] = c.carry_history;
    j["junit5"] = c.junit5;
    j["jobs"] = c.jobs;
    return j.dump(2) + "\n";
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace testgen::config
