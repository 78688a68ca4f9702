#include "testgen/verification.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace testgen::verification {

std::string to_string(OutcomeStatus s) {
    switch (s) {
        case OutcomeStatus::Passed: return "passed";
        case OutcomeStatus::CompileFailed: return "compile_failed";
        case OutcomeStatus::ExecutionFailed: return "execution_failed";
        case OutcomeStatus::AbortedEmptyReply: return "aborted_empty_reply";
    }
    return "compile_failed";
}

OutcomeStatus outcome_status_from_string(const std::string& s) {
    if (s == "passed") return OutcomeStatus::Passed;
    if (s == "compile_failed") return OutcomeStatus::CompileFailed;
    if (s == "execution_failed") return OutcomeStatus::ExecutionFailed;
    if (s == "aborted_empty_reply") return OutcomeStatus::AbortedEmptyReply;
    throw Error("unknown outcome status: " + s);
}

namespace {

struct CommandOutput {
    int exit_code = -1;
    std::string output; // stdout+stderr interleaved
    bool not_found = false;
};

CommandOutput run_command(const std::string& cmd) {
    CommandOutput result;
    std::string full = cmd + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw ToolchainUnavailable("cannot spawn: " + cmd);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.output.append(buf.data(), n);
    int rc = pclose(pipe);
    if (WIFEXITED(rc)) result.exit_code = WEXITSTATUS(rc);
    result.not_found = result.exit_code == 127;
    return result;
}

std::string replace_all(std::string text, const std::string& what, const std::string& with) {
    std::size_t pos = 0;
    while ((pos = text.find(what, pos)) != std::string::npos) {
        text.replace(pos, what.size(), with);
        pos += with.size();
    }
    return text;
}

std::string fq_class_name(const assembly::CandidateTest& c) {
    return c.package_name.empty() ? c.test_class_name
                                  : c.package_name + "." + c.test_class_name;
}

fs::path write_candidate(const assembly::CandidateTest& c, const fs::path& workspace) {
    fs::path dir = workspace;
    if (!c.package_name.empty()) {
        std::string rel = replace_all(c.package_name, ".", "/");
        dir /= rel;
    }
    fs::create_directories(dir);
    fs::path file = dir / (c.test_class_name + ".java");
    std::ofstream out(file, std::ios::binary);
    out << c.source_file;
    return file;
}

} // namespace

CompileResult CommandToolchain::compile(const assembly::CandidateTest& candidate,
                                        const fs::path& workspace) {
    fs::create_directories(workspace);
    fs::path file = write_candidate(candidate, workspace);
    std::string cmd = config_.javac_cmd;
    cmd = replace_all(cmd, "{file}", file.string());
    cmd = replace_all(cmd, "{classpath}", config_.classpath);
    cmd = replace_all(cmd, "{workspace}", workspace.string());
    cmd = replace_all(cmd, "{class}", fq_class_name(candidate));
    CommandOutput out = run_command(cmd);
    if (out.not_found) throw ToolchainUnavailable("compiler command not found: " + cmd);
    return CompileResult{out.exit_code == 0, out.exit_code == 0 ? "" : out.output};
}

ExecResult CommandToolchain::execute(const assembly::CandidateTest& candidate,
                                     const fs::path& workspace) {
    std::string cmd = config_.junit_run_cmd;
    cmd = replace_all(cmd, "{classpath}", config_.classpath);
    cmd = replace_all(cmd, "{workspace}", workspace.string());
    cmd = replace_all(cmd, "{class}", fq_class_name(candidate));
    CommandOutput out = run_command(cmd);
    if (out.not_found) throw ToolchainUnavailable("runner command not found: " + cmd);
    return ExecResult{out.exit_code == 0, out.exit_code == 0 ? "" : out.output};
}

CompileResult FakeToolchain::compile(const assembly::CandidateTest& candidate, const fs::path&) {
    if (!compile_marker_.empty() &&
        candidate.source_file.find(compile_marker_) != std::string::npos)
        return CompileResult{false, "error: cannot resolve symbol near '" + compile_marker_ + "'"};
    return CompileResult{true, ""};
}

ExecResult FakeToolchain::execute(const assembly::CandidateTest& candidate, const fs::path&) {
    if (!exec_marker_.empty() && candidate.source_file.find(exec_marker_) != std::string::npos)
        return ExecResult{false, "java.lang.AssertionError: expected '" + exec_marker_ + "'"};
    return ExecResult{true, ""};
}

CompileResult ScriptedToolchain::compile(const assembly::CandidateTest&, const fs::path&) {
    ++compile_calls;
    if (compiles_.empty()) return CompileResult{true, ""};
    CompileResult r = compiles_.front();
    compiles_.pop_front();
    return r;
}

ExecResult ScriptedToolchain::execute(const assembly::CandidateTest&, const fs::path&) {
    ++exec_calls;
    if (execs_.empty()) return ExecResult{true, ""};
    ExecResult r = execs_.front();
    execs_.pop_front();
    return r;
}

namespace {

llm::ChatRequest feedback_request(const RepairContext& ctx, const prompting::PromptBundle& bundle) {
    llm::ChatRequest req;
    req.model_id = ctx.model_id;
    req.max_output_tokens = ctx.max_output_tokens;
    req.temperature = ctx.temperature;
    req.messages.push_back({llm::Role::System, bundle.role_text});
    std::string user = bundle.task_text + bundle.section_sep + bundle.demo_block +
                       bundle.target_block;
    req.messages.push_back({llm::Role::User, user});
    return req;
}

// The model may reply with a full class or with bare statements; either way
// the candidate's source is replaced and the revision bumped.
assembly::CandidateTest revised(const assembly::CandidateTest& cand, const std::string& fragment) {
    assembly::CandidateTest next = cand;
    next.revision = cand.revision + 1;
    bool looks_like_unit = false;
    try {
        java::CompilationUnit unit = java::parse_compilation_unit(fragment);
        looks_like_unit = !unit.types.empty();
    } catch (const Error&) {
        looks_like_unit = false;
    }
    next.source_file = looks_like_unit ? fragment : assembly::rebuild_source(cand, fragment);
    return next;
}

} // namespace

VerificationOutcome repair_loop(assembly::CandidateTest candidate, const corpus::Query& query,
                                RepairBudget budget, const RepairContext& ctx, Toolchain& toolchain,
                                const fs::path& workspace) {
    VerificationOutcome outcome;
    bool entered_exec = false;
    enum class Phase { Compile, Exec } phase = Phase::Compile;

    while (true) {
        if (phase == Phase::Compile) {
            CompileResult r = toolchain.compile(candidate, workspace);
            if (r.ok) {
                phase = Phase::Exec;
                continue;
            }
            outcome.transcript.push_back({"compile", r.errors, candidate.revision});
            if (outcome.compile_attempts >= budget.compile_max) {
                // a regression introduced by an exec repair still counts as an
                // execution-phase failure
                outcome.status = entered_exec ? OutcomeStatus::ExecutionFailed
                                              : OutcomeStatus::CompileFailed;
                break;
            }
            ++outcome.compile_attempts;
            prompting::PromptBundle bundle = prompting::render_compile_feedback_prompt(
                candidate.source_file, r.errors, query, *ctx.templates);
            llm::ChatReply reply = ctx.backend->complete(feedback_request(ctx, bundle));
            std::string fragment;
            try {
                fragment = prompting::parse_llm_reply(reply.content);
            } catch (const prompting::EmptyReplyError&) {
                outcome.status = OutcomeStatus::AbortedEmptyReply;
                break;
            }
            candidate = revised(candidate, fragment);
        } else {
            entered_exec = true;
            ExecResult r = toolchain.execute(candidate, workspace);
            if (r.passed) {
                outcome.transcript.push_back({"execute", "", candidate.revision});
                outcome.status = OutcomeStatus::Passed;
                break;
            }
            outcome.transcript.push_back({"execute", r.errors, candidate.revision});
            if (outcome.exec_attempts >= budget.exec_max) {
                outcome.status = OutcomeStatus::ExecutionFailed;
                break;
            }
            ++outcome.exec_attempts;
            prompting::PromptBundle bundle = prompting::render_exec_feedback_prompt(
                candidate.source_file, r.errors, query, *ctx.templates);
            llm::ChatReply reply = ctx.backend->complete(feedback_request(ctx, bundle));
            std::string fragment;
            try {
                fragment = prompting::parse_llm_reply(reply.content);
            } catch (const prompting::EmptyReplyError&) {
                outcome.status = OutcomeStatus::AbortedEmptyReply;
                break;
            }
            candidate = revised(candidate, fragment);
            phase = Phase::Compile; // repaired candidates re-enter at the compile check
        }
    }
    outcome.final_candidate = std::move(candidate);
    return outcome;
}

namespace {

struct FocalTarget {
    std::string name;
    std::vector<int> arities;   // all overloads found in the focal source
    std::vector<bool> varargs;  // parallel: arity is a minimum (minus one)
};

FocalTarget focal_target(const corpus::Query& query) {
    FocalTarget t;
    t.name = prompting::focal_method_name(query.focal_method_signature);
    if (!query.focal_source.empty()) {
        try {
            java::CompilationUnit unit = java::parse_compilation_unit(query.focal_source);
            for (const java::TypeDecl& type : unit.types) {
                for (const java::Method& m : type.methods) {
                    if (m.name != t.name) continue;
                    bool va = !m.param_types.empty() &&
                              m.param_types.back().find("...") != std::string::npos;
                    t.arities.push_back(static_cast<int>(m.param_types.size()));
                    t.varargs.push_back(va);
                }
            }
        } catch (const Error&) {
        }
    }
    if (t.arities.empty()) {
        // fall back to the signature's own parameter list
        try {
            std::string decl = query.focal_method_signature + " { }";
            java::CompilationUnit unit =
                java::parse_compilation_unit("class __Probe { " + decl + " }");
            for (const java::Method& m : unit.types.at(0).methods) {
                bool va = !m.param_types.empty() &&
                          m.param_types.back().find("...") != std::string::npos;
                t.arities.push_back(static_cast<int>(m.param_types.size()));
                t.varargs.push_back(va);
            }
        } catch (const Error&) {
        }
    }
    return t;
}

bool arity_compatible(const FocalTarget& t, int arg_count) {
    if (t.arities.empty()) return true; // unknown signature: name match suffices
    for (std::size_t i = 0; i < t.arities.size(); ++i) {
        if (t.varargs[i]) {
            if (arg_count >= t.arities[i] - 1) return true;
        } else if (arg_count == t.arities[i]) {
            return true;
        }
    }
    return false;
}

bool calls_focal(const std::string& code, const FocalTarget& t) {
    for (const java::CallSite& call : java::find_calls(code))
        if (call.callee == t.name && arity_compatible(t, call.arg_count)) return true;
    return false;
}

} // namespace

bool invokes_focal(const assembly::CandidateTest& candidate, const corpus::Query& query) {
    FocalTarget target = focal_target(query);
    if (target.name.empty()) return false;

    java::CompilationUnit unit;
    try {
        unit = java::parse_compilation_unit(candidate.source_file);
    } catch (const Error&) {
        return false;
    }
    for (const java::TypeDecl& type : unit.types) {
        const java::Method* test_method = nullptr;
        for (const java::Method& m : type.methods)
            if (m.name == candidate.test_method_name) test_method = &m;
        if (!test_method) continue;
        if (calls_focal(test_method->body, target)) return true;
        // one level of indirection through helpers in the same class
        for (const java::CallSite& call : java::find_calls(test_method->body)) {
            for (const java::Method& helper : type.methods) {
                if (helper.name != call.callee || !helper.has_body) continue;
                if (calls_focal(helper.body, target)) return true;
            }
        }
    }
    return false;
}

} // namespace testgen::verification
