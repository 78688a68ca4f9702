#pragma once

#include <deque>
#include <filesystem>
#include <string>
#include <vector>

#include "testgen/assembly.hpp"
#include "testgen/corpus.hpp"
#include "testgen/error.hpp"
#include "testgen/llm.hpp"
#include "testgen/prompting.hpp"

namespace testgen::verification {

class ToolchainUnavailable : public Error {
public:
    using Error::Error;
};

struct CompileResult {
    bool ok = false;
    std::string errors;
};

struct ExecResult {
    bool passed = false;
    std::string errors;
};

class Toolchain {
public:
    virtual ~Toolchain() = default;
    virtual CompileResult compile(const assembly::CandidateTest& candidate,
                                  const std::filesystem::path& workspace) = 0;
    virtual ExecResult execute(const assembly::CandidateTest& candidate,
                               const std::filesystem::path& workspace) = 0;
};

// Real toolchain driven by command templates. Placeholders: {file},
// {classpath}, {workspace}, {class}.
struct CommandToolchainConfig {
    std::string javac_cmd = "javac -cp {classpath} -d {workspace} {file}";
    std::string junit_run_cmd = "java -cp {classpath} org.junit.runner.JUnitCore {class}";
    std::string classpath = ".";
    std::string workspace_root = "";
};

class CommandToolchain : public Toolchain {
public:
    explicit CommandToolchain(CommandToolchainConfig config) : config_(std::move(config)) {}
    CompileResult compile(const assembly::CandidateTest& candidate,
                          const std::filesystem::path& workspace) override;
    ExecResult execute(const assembly::CandidateTest& candidate,
                       const std::filesystem::path& workspace) override;

private:
    CommandToolchainConfig config_;
};

// Offline stand-in: fails when the candidate source contains a marker.
class FakeToolchain : public Toolchain {
public:
    FakeToolchain(std::string compile_fail_marker, std::string exec_fail_marker)
        : compile_marker_(std::move(compile_fail_marker)),
          exec_marker_(std::move(exec_fail_marker)) {}
    CompileResult compile(const assembly::CandidateTest& candidate,
                          const std::filesystem::path&) override;
    ExecResult execute(const assembly::CandidateTest& candidate,
                       const std::filesystem::path&) override;

private:
    std::string compile_marker_;
    std::string exec_marker_;
};

// Test double: plays back scripted results in order; reports success once a
// script runs dry.
class ScriptedToolchain : public Toolchain {
public:
    ScriptedToolchain(std::deque<CompileResult> compiles, std::deque<ExecResult> execs)
        : compiles_(std::move(compiles)), execs_(std::move(execs)) {}
    CompileResult compile(const assembly::CandidateTest&, const std::filesystem::path&) override;
    ExecResult execute(const assembly::CandidateTest&, const std::filesystem::path&) override;
    int compile_calls = 0;
    int exec_calls = 0;

private:
    std::deque<CompileResult> compiles_;
    std::deque<ExecResult> execs_;
};

struct RepairBudget {
    int compile_max = 3; // M
    int exec_max = 2;    // N
};

enum class OutcomeStatus { Passed, CompileFailed, ExecutionFailed, AbortedEmptyReply };

std::string to_string(OutcomeStatus s);
OutcomeStatus outcome_status_from_string(const std::string& s);

// One entry per failed toolchain check plus one for the terminal check.
struct TranscriptEntry {
    std::string phase; // "compile" | "execute"
    std::string error_text;
    int revision = 0;
};

struct VerificationOutcome {
    OutcomeStatus status = OutcomeStatus::CompileFailed;
    int compile_attempts = 0;
    int exec_attempts = 0;
    assembly::CandidateTest final_candidate;
    std::vector<TranscriptEntry> transcript;
};

struct RepairContext {
    llm::ChatBackend* backend = nullptr;
    std::string model_id;
    int max_output_tokens = 512;
    double temperature = 0.0;
    const prompting::PromptTemplates* templates = &prompting::PromptTemplates::defaults();
};

VerificationOutcome repair_loop(assembly::CandidateTest candidate, const corpus::Query& query,
                                RepairBudget budget, const RepairContext& ctx, Toolchain& toolchain,
                                const std::filesystem::path& workspace);

// Static focal-invocation check: a call with a matching simple name and a
// compatible arity, directly in the test body or one helper level down.
bool invokes_focal(const assembly::CandidateTest& candidate, const corpus::Query& query);

} // namespace testgen::verification
