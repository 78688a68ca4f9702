#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "testgen/error.hpp"
#include "testgen/prompting.hpp"
#include "testgen/selection.hpp"
#include "testgen/verification.hpp"

namespace testgen::config {

class ConfigError : public Error {
public:
    using Error::Error;
};

struct LlmConfig {
    std::string backend = "replay"; // replay | live
    std::string cassette;
    std::string base_url;
    std::string path = "/v1/chat/completions";
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
    int max_output_tokens = 512;
    int retries = 3;
    int backoff_base_ms = 250;
    double rate_limit_per_sec = 0.0;
    std::string api_key_env = "TESTGEN_API_KEY";
};

struct EmbeddingConfig {
    std::string backend = "local-hash"; // local-hash | remote
    std::string endpoint;
    std::string path = "/embed";
    int dim = 512;
};

struct ToolchainConfig {
    std::string kind = "commands"; // commands | fake
    std::string javac_cmd = "javac -cp {classpath} -d {workspace} {file}";
    std::string junit_run_cmd = "java -cp {classpath} org.junit.runner.JUnitCore {class}";
    std::string classpath = ".";
    std::string workspace_root;
    std::string compile_fail_marker; // fake toolchain only
    std::string exec_fail_marker;
};

struct RunConfig {
    std::string project_root;
    std::string prefix_pool_path;
    std::string oracle_pool_path;
    prompting::GenerationMode mode = prompting::GenerationMode::Cascaded;
    selection::StrategyKind strategy = selection::StrategyKind::Random;
    prompting::InstructionVariant variant = prompting::InstructionVariant::WellCrafted;
    int shots = 5;
    int token_budget = 4096;
    verification::RepairBudget repair;
    LlmConfig llm;
    EmbeddingConfig embedding;
    ToolchainConfig toolchain;
    prompting::PromptTemplates templates; // overridable template table
    std::uint64_t seed = 42;
    bool carry_history = false; // oracle stage sees the prefix conversation
    bool junit5 = false;
    int jobs = 1;
};

RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

} // namespace testgen::config
