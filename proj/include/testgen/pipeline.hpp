#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "testgen/config.hpp"
#include "testgen/corpus.hpp"
#include "testgen/llm.hpp"
#include "testgen/metrics.hpp"
#include "testgen/selection.hpp"
#include "testgen/verification.hpp"

namespace testgen::pipeline {

// Per-query record persisted to the outcomes JSON Lines file. Failures are
// recorded, never thrown out of the batch.
struct OutcomeRecord {
    int query_index = 0;
    std::string project;
    std::string class_name;
    std::string focal_method_signature;
    std::string mode;
    std::string status; // verification status or "error"
    int compile_attempts = 0;
    int exec_attempts = 0;
    bool invokes_focal = false;
    std::vector<std::string> stages; // prompt stages that ran, in order
    std::string prefix_text;
    std::string oracle_text;
    std::string final_source;
    std::vector<verification::TranscriptEntry> transcript;
    std::string error; // diagnostic for status == "error"
};

std::string serialize_outcome(const OutcomeRecord& record);
OutcomeRecord parse_outcome_line(const std::string& line);
std::vector<OutcomeRecord> load_outcomes(const std::filesystem::path& path);

// Dependency bundle for one generate run; tests may inject fakes.
struct Runtime {
    std::unique_ptr<llm::ChatBackend> backend;
    std::unique_ptr<selection::EmbeddingBackend> embedding;
    std::unique_ptr<verification::Toolchain> toolchain;
};

Runtime make_runtime(const config::RunConfig& config);

// Runs the full per-query pipeline (exclusion -> selection -> prompts ->
// completion -> assembly -> repair loop) and writes one JSONL record per
// query, in input order.
void run_generate(const config::RunConfig& config, const std::filesystem::path& queries_path,
                  const std::filesystem::path& out_path, Runtime& runtime);

metrics::RunReport run_eval(const std::filesystem::path& outcomes_path,
                            const std::filesystem::path& queries_path, const std::string& mode,
                            const std::string& strategy, const std::string& variant);

void write_pools(const corpus::PoolBuildResult& pools, const std::filesystem::path& out_dir);

} // namespace testgen::pipeline
