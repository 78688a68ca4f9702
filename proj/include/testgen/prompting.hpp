#pragma once

#include <functional>
#include <string>
#include <vector>

#include "testgen/corpus.hpp"
#include "testgen/error.hpp"
#include "testgen/selection.hpp"

namespace testgen::prompting {

class IncompleteQuery : public Error {
public:
    using Error::Error;
};
class CascadeOrderError : public Error {
public:
    using Error::Error;
};
class BudgetUnsatisfiable : public Error {
public:
    using Error::Error;
};
class EmptyReplyError : public Error {
public:
    using Error::Error;
};

enum class InstructionVariant { WellCrafted, Vanilla };
enum class GenerationMode { Cascaded, Direct };

std::string to_string(InstructionVariant v);
InstructionVariant variant_from_string(const std::string& s);
std::string to_string(GenerationMode m);
GenerationMode mode_from_string(const std::string& s);

// Fixed prompt constants; overridable for experimentation. Task texts with
// {CLASS_CONSTRUCTOR}/{CLASS_NAME}/{TEST_METHOD_NAME} slots are filled from
// the query before rendering.
struct PromptTemplates {
    std::string role =
        "You are a proficient and helpful assistant in java testing with JUnit framework";
    std::string prefix_task_wellcrafted =
        "Your task now is only to construct the test inputs, not the test assertions. "
        "Use {CLASS_CONSTRUCTOR} to get {CLASS_NAME}, then call {TEST_METHOD_NAME}. "
        "Use Java without comments. End your reply with END_OF_DEMO.";
    std::string oracle_task_wellcrafted =
        "Your task now is to generate a test assertion to replace the <OraclePlaceHolder> "
        "in UNIT_TEST. Only variables that occur in the last UNIT_TEST can be used. "
        "Use Java without comments. End your reply with END_OF_DEMO.";
    std::string direct_task_wellcrafted =
        "Your task now is to construct the complete unit test case, including both the test "
        "inputs and the test assertions. Use {CLASS_CONSTRUCTOR} to get {CLASS_NAME}, then "
        "implement {TEST_METHOD_NAME}. Use Java without comments. End your reply with "
        "END_OF_DEMO.";
    std::string prefix_task_vanilla = "Generate test input using the following Java code";
    std::string oracle_task_vanilla = "Generate oracle using the following Java code";
    std::string direct_task_vanilla = "Generate unit test using the following Java code";
    std::string compile_fix_task =
        "The following unit test case failed to compile. Fix the compilation errors and reply "
        "with the complete corrected test class. Use Java without comments. End your reply "
        "with END_OF_DEMO.";
    std::string exec_fix_task =
        "The following unit test case compiled but failed during execution. Fix the errors and "
        "reply with the complete corrected test class. Use Java without comments. End your "
        "reply with END_OF_DEMO.";
    std::string end_marker = "END_OF_DEMO";
    std::string section_sep = "\n\n";

    static const PromptTemplates& defaults();
};

using TokenCounter = std::function<int(const std::string&)>;

// Offline approximation: whitespace/punctuation token count with a 1.3
// safety factor. Exact tokenizers plug in per backend.
int approx_token_count(const std::string& text);
TokenCounter default_token_counter();

struct RenderedDemo {
    std::string text; // full demo chunk, END_OF_DEMO included, no trailing sep
    double similarity = 0.0;
};

struct PromptBundle {
    std::string role_text;
    std::string task_text;
    std::string demo_block; // each demo followed by section_sep
    std::string target_block;
    std::string rendered;
    int token_count = 0;
    std::vector<RenderedDemo> demos;
    std::string section_sep;
};

// "test" + capitalized focal method name (testPrintRecord pattern)
std::string derived_test_method_name(const corpus::Query& query);
std::string focal_method_name(const std::string& focal_method_signature);

// Demo/query texts as the embedder sees them (mirrors the prompt rendering)
std::string demo_embed_text(const corpus::Demo& demo);
std::string query_embed_text_prefix(const corpus::Query& query);
std::string query_embed_text_oracle(const corpus::Query& query, const std::string& generated_prefix);

std::string build_placeholder_unit_test(const std::string& test_method_name,
                                        const std::string& prefix);

PromptBundle render_prefix_prompt(const corpus::Query& query,
                                  const selection::SelectedDemos& demos,
                                  InstructionVariant variant,
                                  const PromptTemplates& tpl = PromptTemplates::defaults(),
                                  const TokenCounter& counter = default_token_counter());

PromptBundle render_oracle_prompt(const corpus::Query& query, const std::string& generated_prefix,
                                  const selection::SelectedDemos& demos,
                                  InstructionVariant variant,
                                  const PromptTemplates& tpl = PromptTemplates::defaults(),
                                  const TokenCounter& counter = default_token_counter());

// Direct mode: demos come from the prefix pool; full bodies are completed
// from the oracle pool by (test_name, focal_method_signature).
PromptBundle render_direct_prompt(const corpus::Query& query,
                                  const selection::SelectedDemos& demos,
                                  const corpus::DemoPool& oracle_pool, InstructionVariant variant,
                                  const PromptTemplates& tpl = PromptTemplates::defaults(),
                                  const TokenCounter& counter = default_token_counter());

PromptBundle render_compile_feedback_prompt(const std::string& candidate_source,
                                            const std::string& compile_errors,
                            const corpus::Query& query,
                                            const PromptTemplates& tpl = PromptTemplates::defaults(),
                                            const TokenCounter& counter = default_token_counter());

PromptBundle render_exec_feedback_prompt(const std::string& candidate_source,
                                         const std::string& exec_errors,
                                         const corpus::Query& query,
                                         const PromptTemplates& tpl = PromptTemplates::defaults(),
                                         const TokenCounter& counter = default_token_counter());

// Drops whole demos, lowest similarity first, until the bundle fits.
PromptBundle enforce_token_budget(const PromptBundle& bundle, int budget,
                                  const TokenCounter& counter = default_token_counter());

// Cuts at END_OF_DEMO, unwraps code fences, drops leading prose.
std::string parse_llm_reply(const std::string& raw);

} // namespace testgen::prompting
