#include "testgen/prompting.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace testgen::prompting {

const PromptTemplates& PromptTemplates::defaults() {
    static const PromptTemplates tpl;
    return tpl;
}

std::string to_string(InstructionVariant v) {
    return v == InstructionVariant::WellCrafted ? "well_crafted" : "vanilla";
}

InstructionVariant variant_from_string(const std::string& s) {
    if (s == "well_crafted") return InstructionVariant::WellCrafted;
    if (s == "vanilla") return InstructionVariant::Vanilla;
    throw Error("unknown instruction variant: " + s);
}

std::string to_string(GenerationMode m) {
    return m == GenerationMode::Cascaded ? "cascaded" : "direct";
}

GenerationMode mode_from_string(const std::string& s) {
    if (s == "cascaded") return GenerationMode::Cascaded;
    if (s == "direct") return GenerationMode::Direct;
    throw Error("unknown generation mode: " + s);
}

int approx_token_count(const std::string& text) {
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (std::isalnum(c) || c == '_') {
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_'))
                ++i;
        } else {
            ++i;
        }
        ++count;
    }
    return static_cast<int>(std::ceil(static_cast<double>(count) * 1.3));
}

TokenCounter default_token_counter() {
    return [](const std::string& s) { return approx_token_count(s); };
}

namespace {

std::string replace_all(std::string text, const std::string& what, const std::string& with) {
    std::size_t pos = 0;
    while ((pos = text.find(what, pos)) != std::string::npos) {
        text.replace(pos, what.size(), with);
        pos += with.size();
    }
    return text;
}

std::string indent_block(const std::string& text, const std::string& pad) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (!out.empty()) out += '\n';
        out += pad + line;
    }
    return out;
}

void require_query(const corpus::Query& q) {
    if (q.class_name.empty()) throw IncompleteQuery("query missing class_name");
    if (q.constructor_signature.empty()) throw IncompleteQuery("query missing constructor_signature");
    if (q.focal_method_signature.empty())
        throw IncompleteQuery("query missing focal_method_signature");
}

std::string render_prefix_demo(const corpus::Demo& d, const PromptTemplates& tpl) {
    return "CLASS_NAME: " + d.focal_class + "\nCLASS_CONSTRUCTOR: " + d.constructor_params +
           "\nFOCAL_METHOD_SIGNATURE: " + d.focal_method_signature +
           "\nTEST_METHOD_NAME: " + d.test_name + "\nTEST_PREFIX:\n" + d.test_prefix + "\n" +
           tpl.end_marker;
}

std::string render_oracle_demo(const corpus::Demo& d, const PromptTemplates& tpl) {
    return "FOCAL_METHOD_SIGNATURE: " + d.focal_method_signature + "\nUNIT_TEST:\n" +
           d.test_body_with_placeholder + "\nTEST_ORACLE:\n" + d.test_oracle + "\n" +
           tpl.end_marker;
}

std::string demo_block_of(const std::vector<RenderedDemo>& demos, const std::string& sep) {
    std::string out;
    for (const RenderedDemo& d : demos) out += d.text + sep;
    return out;
}

PromptBundle finish_bundle(std::string role, std::string task, std::vector<RenderedDemo> demos,
                           std::string target, const PromptTemplates& tpl,
                           const TokenCounter& counter) {
    PromptBundle b;
    b.role_text = std::move(role);
    b.task_text = std::move(task);
    b.demos = std::move(demos);
    b.section_sep = tpl.section_sep;
    b.demo_block = demo_block_of(b.demos, b.section_sep);
    b.target_block = std::move(target);
    b.rendered = b.role_text + b.section_sep + b.task_text + b.section_sep + b.demo_block +
                 b.target_block;
    b.token_count = counter(b.rendered);
    return b;
}

std::string fill_task(const std::string& tmpl, const corpus::Query& q) {
    std::string out = replace_all(tmpl, "{CLASS_CONSTRUCTOR}", q.constructor_signature);
    out = replace_all(out, "{CLASS_NAME}", q.class_name);
    out = replace_all(out, "{TEST_METHOD_NAME}", derived_test_method_name(q));
    return out;
}

} // namespace

std::string focal_method_name(const std::string& focal_method_signature) {
    // the identifier immediately before the parameter list
    auto toks = java::lex(focal_method_signature);
    for (std::size_t i = 0; i + 1 < toks.size(); ++i)
        if (toks[i].kind == java::Token::Kind::Identifier && toks[i + 1].is("(") &&
            !java::is_keyword(toks[i].text))
            return toks[i].text;
    for (auto it = toks.rbegin(); it != toks.rend(); ++it)
        if (it->kind == java::Token::Kind::Identifier && !java::is_keyword(it->text))
            return it->text;
    return focal_method_signature;
}

std::string derived_test_method_name(const corpus::Query& query) {
    std::string name = focal_method_name(query.focal_method_signature);
    if (!name.empty()) name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    return "test" + name;
}

std::string demo_embed_text(const corpus::Demo& demo) {
    if (demo.kind == corpus::PoolKind::Prefix)
        return demo.focal_class + "\n" + demo.constructor_params + "\n" +
               demo.focal_method_signature + "\n" + demo.test_prefix;
    return demo.focal_method_signature + "\n" + demo.test_body_with_placeholder + "\n" +
           demo.test_oracle;
}

std::string query_embed_text_prefix(const corpus::Query& query) {
    return query.class_name + "\n" + query.constructor_signature + "\n" +
           query.focal_method_signature;
}

std::string query_embed_text_oracle(const corpus::Query& query,
                                    const std::string& generated_prefix) {
    return query.focal_method_signature + "\n" +
           build_placeholder_unit_test(derived_test_method_name(query), generated_prefix);
}

std::string build_placeholder_unit_test(const std::string& test_method_name,
                                        const std::string& prefix) {
    std::string body = "public void " + test_method_name + "() {\n";
    if (!prefix.empty()) body += indent_block(prefix, "    ") + "\n";
    body += "    ";
    body += corpus::kOraclePlaceholder;
    body += "\n}";
    return body;
}

PromptBundle render_prefix_prompt(const corpus::Query& query,
                                  const selection::SelectedDemos& demos,
                                  InstructionVariant variant, const PromptTemplates& tpl,
                                  const TokenCounter& counter) {
    require_query(query);
    std::string task = variant == InstructionVariant::WellCrafted
                           ? fill_task(tpl.prefix_task_wellcrafted, query)
                           : tpl.prefix_task_vanilla;
    std::vector<RenderedDemo> rendered;
    for (std::size_t i = 0; i < demos.demos.size(); ++i)
        rendered.push_back(RenderedDemo{render_prefix_demo(demos.demos[i], tpl),
                                        demos.similarities[i]});
    std::string target = "CLASS_NAME: " + query.class_name +
                         "\nCLASS_CONSTRUCTOR: " + query.constructor_signature +
                         "\nFOCAL_METHOD_SIGNATURE: " + query.focal_method_signature +
                         "\nTEST_METHOD_NAME: " + derived_test_method_name(query) +
                         "\nTEST_PREFIX:\n";
    return finish_bundle(tpl.role, std::move(task), std::move(rendered), std::move(target), tpl,
                         counter);
}

PromptBundle render_oracle_prompt(const corpus::Query& query, const std::string& generated_prefix,
                                  const selection::SelectedDemos& demos,
                                  InstructionVariant variant, const PromptTemplates& tpl,
                                  const TokenCounter& counter) {
    require_query(query);
    if (generated_prefix.empty())
        throw CascadeOrderError("oracle prompt requires a generated prefix");
    std::string task = variant == InstructionVariant::WellCrafted ? tpl.oracle_task_wellcrafted
                                                                  : tpl.oracle_task_vanilla;
    std::vector<RenderedDemo> rendered;
    for (std::size_t i = 0; i < demos.demos.size(); ++i)
        rendered.push_back(RenderedDemo{render_oracle_demo(demos.demos[i], tpl),
                                        demos.similarities[i]});
    std::string target = "FOCAL_METHOD_SIGNATURE: " + query.focal_method_signature +
                         "\nUNIT_TEST:\n" +
                         build_placeholder_unit_test(derived_test_method_name(query),
                                                     generated_prefix) +
                         "\nTEST_ORACLE:\n";
    return finish_bundle(tpl.role, std::move(task), std::move(rendered), std::move(target), tpl,
                         counter);
}

PromptBundle render_direct_prompt(const corpus::Query& query,
                                  const selection::SelectedDemos& demos,
                                  const corpus::DemoPool& oracle_pool, InstructionVariant variant,
                                  const PromptTemplates& tpl, const TokenCounter& counter) {
    require_query(query);
    std::string task = variant == InstructionVariant::WellCrafted
                           ? fill_task(tpl.direct_task_wellcrafted, query)
                           : tpl.direct_task_vanilla;
    std::vector<RenderedDemo> rendered;
    for (std::size_t i = 0; i < demos.demos.size(); ++i) {
        const corpus::Demo& d = demos.demos[i];
        std::string body = d.test_prefix;
        for (const corpus::Demo& o : oracle_pool.entries) {
            if (o.test_name == d.test_name &&
                o.focal_method_signature == d.focal_method_signature) {
                body += "\n" + o.test_oracle;
                break;
            }
        }
        std::string text = "CLASS_NAME: " + d.focal_class +
                           "\nCLASS_CONSTRUCTOR: " + d.constructor_params +
                           "\nFOCAL_METHOD_SIGNATURE: " + d.focal_method_signature +
                           "\nTEST_METHOD_NAME: " + d.test_name + "\nUNIT_TEST:\n" + body + "\n" +
                           tpl.end_marker;
        rendered.push_back(RenderedDemo{std::move(text), demos.similarities[i]});
    }
    std::string target = "CLASS_NAME: " + query.class_name +
                         "\nCLASS_CONSTRUCTOR: " + query.constructor_signature +
                         "\nFOCAL_METHOD_SIGNATURE: " + query.focal_method_signature +
                         "\nTEST_METHOD_NAME: " + derived_test_method_name(query) +
                         "\nUNIT_TEST:\n";
    return finish_bundle(tpl.role, std::move(task), std::move(rendered), std::move(target), tpl,
                         counter);
}

namespace {

PromptBundle render_feedback(const std::string& task, const std::string& error_label,
                             const std::string& candidate_source, const std::string& errors,
                             const corpus::Query& query, const PromptTemplates& tpl,
                             const TokenCounter& counter) {
    // four aspects: focal signature, focal class, failure errors, latest test
    std::string target = "FOCAL_METHOD_SIGNATURE: " + query.focal_method_signature +
                         "\nFOCAL_CLASS:\n" + query.focal_source + "\n" + error_label + ":\n" +
                         errors + "\nUNIT_TEST:\n" + candidate_source + "\n";
    return finish_bundle(tpl.role, task, {}, std::move(target), tpl, counter);
}

} // namespace

PromptBundle render_compile_feedback_prompt(const std::string& candidate_source,
                                            const std::string& compile_errors,
                                            const corpus::Query& query,
                                            const PromptTemplates& tpl,
                                            const TokenCounter& counter) {
    return render_feedback(tpl.compile_fix_task, "COMPILE_ERRORS", candidate_source,
                           compile_errors, query, tpl, counter);
}

PromptBundle render_exec_feedback_prompt(const std::string& candidate_source,
                                         const std::string& exec_errors,
                                         const corpus::Query& query, const PromptTemplates& tpl,
                                         const TokenCounter& counter) {
    return render_feedback(tpl.exec_fix_task, "EXECUTION_ERRORS", candidate_source, exec_errors,
                           query, tpl, counter);
}

PromptBundle enforce_token_budget(const PromptBundle& bundle, int budget,
                                  const TokenCounter& counter) {
    if (budget <= 0) throw Error("token budget must be positive");
    PromptBundle b = bundle;
    while (b.token_count > budget) {
        if (b.demos.empty())
            throw BudgetUnsatisfiable("role+task+target exceed the token budget (" +
                                      std::to_string(b.token_count) + " > " +
                                      std::to_string(budget) + ")");
        std::size_t drop = 0;
        for (std::size_t i = 1; i < b.demos.size(); ++i)
            if (b.demos[i].similarity <= b.demos[drop].similarity) drop = i;
        b.demos.erase(b.demos.begin() + static_cast<long>(drop));
        b.demo_block = demo_block_of(b.demos, b.section_sep);
        b.rendered = b.role_text + b.section_sep + b.task_text + b.section_sep + b.demo_block +
                     b.target_block;
        b.token_count = counter(b.rendered);
    }
    return b;
}

namespace {

bool code_like(const std::string& line) {
    std::string t = line;
    // trim
    auto b = t.find_first_not_of(" \t\r");
    if (b == std::string::npos) return false;
    auto e = t.find_last_not_of(" \t\r");
    t = t.substr(b, e - b + 1);
    if (t.empty()) return false;
    char last = t.back();
    if (last == ';' || last == '{' || last == '}') return true;
    if (t[0] == '@') return true;
    static const char* kw[] = {"public ",  "private ", "protected ", "static ", "final ",
                               "void ",    "int ",     "long ",      "double ", "float ",
                               "boolean ", "char ",    "byte ",      "short ",  "new ",
                               "try ",     "try{",     "if ",        "if(",     "for ",
                               "for(",     "while ",   "while(",     "return ", "throw ",
                               "import ",  "package ", "class ",     "String "};
    for (const char* k : kw)
        if (t.rfind(k, 0) == 0) return true;
    return false;
}

} // namespace

std::string parse_llm_reply(const std::string& raw) {
    std::string text = raw;
    std::size_t marker = text.find("END_OF_DEMO");
    if (marker != std::string::npos) text = text.substr(0, marker);

    std::size_t fence = text.find("```");
    if (fence != std::string::npos) {
        std::size_t body_start = text.find('\n', fence);
        if (body_start != std::string::npos) {
            ++body_start;
            std::size_t fence_end = text.find("```", body_start);
            text = fence_end == std::string::npos ? text.substr(body_start)
                                                  : text.substr(body_start, fence_end - body_start);
        }
    } else {
        // drop leading prose
        std::istringstream in(text);
        std::string line;
        std::vector<std::string> lines;
        while (std::getline(in, line)) lines.push_back(line);
        std::size_t first = 0;
        while (first < lines.size() && !code_like(lines[first])) ++first;
        std::string kept;
        for (std::size_t i = first; i < lines.size(); ++i) {
            kept += lines[i];
            kept += '\n';
        }
        text = kept;
    }

    auto b = text.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) throw EmptyReplyError("no code in reply");
    auto e = text.find_last_not_of(" \t\r\n");
    return text.substr(b, e - b + 1);
}

} // namespace testgen::prompting
