#include "testgen/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace testgen::corpus {

std::string to_string(OracleKind kind) {
    return kind == OracleKind::Assertion ? "assertion" : "expected_exception";
}

OracleKind oracle_kind_from_string(const std::string& s) {
    if (s == "assertion") return OracleKind::Assertion;
    if (s == "expected_exception") return OracleKind::ExpectedException;
    throw PoolFormatError("unknown oracle_kind: " + s);
}

const OracleVocabulary& OracleVocabulary::defaults() {
    static const OracleVocabulary vocab{
        {"assertEquals", "assertArrayEquals", "assertTrue", "assertFalse", "assertNull",
         "assertNotNull", "assertNotEquals", "assertSame", "assertNotSame", "assertThat", "fail"},
        {"assertThrows"},
        "fail"};
    return vocab;
}

namespace {

bool is_java_identifier(const std::string& s) {
    if (s.empty()) return false;
    unsigned char c0 = static_cast<unsigned char>(s[0]);
    if (!std::isalpha(c0) && c0 != '_' && c0 != '$') return false;
    for (unsigned char c : s)
        if (!std::isalnum(c) && c != '_' && c != '$') return false;
    return true;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

std::string derive_test_class_name(const std::string& class_name) {
    if (!is_java_identifier(class_name))
        throw InvalidIdentifier("not a valid Java identifier: '" + class_name + "'");
    return class_name + "Test";
}

std::vector<std::string> test_class_name_candidates(const std::string& class_name) {
    derive_test_class_name(class_name); // validates
    return {class_name + "Test", "Test" + class_name};
}

std::vector<std::string> focal_class_candidates(const std::string& test_class_name) {
    std::vector<std::string> out;
    const std::string suffix = "Test";
    if (test_class_name.size() > suffix.size() &&
        test_class_name.compare(test_class_name.size() - suffix.size(), suffix.size(), suffix) == 0)
        out.push_back(test_class_name.substr(0, test_class_name.size() - suffix.size()));
    if (test_class_name.size() > suffix.size() && test_class_name.compare(0, suffix.size(), suffix) == 0)
        out.push_back(test_class_name.substr(suffix.size()));
    return out;
}

namespace {

// First call expression decides: the statement's leading invocation is what
// the test asserts with (covers `Assert.assertEquals(..)` and
// `Exception e = assertThrows(..)` alike).
StatementClass classify_parsed(const java::Statement& st, const OracleVocabulary& vocab) {
    if (st.form == java::Statement::Form::Try) {
        if (!st.try_body.empty()) {
            const java::Statement& last = st.try_body.back();
            auto calls = java::find_calls(last.text);
            if (!calls.empty() && calls.front().callee == vocab.fail_name)
                return StatementClass::ExpectedException;
        }
        return StatementClass::Prefix;
    }
    auto calls = java::find_calls(st.text);
    if (calls.empty()) return StatementClass::Prefix;
    const std::string& callee = calls.front().callee;
    if (vocab.expected_exception.count(callee)) return StatementClass::ExpectedException;
    if (vocab.assertions.count(callee)) return StatementClass::Assertion;
    return StatementClass::Prefix;
}

} // namespace

StatementClass classify_statement(const java::Statement& stmt, const OracleVocabulary& vocab) {
    return classify_parsed(stmt, vocab);
}

StatementClass classify_statement(const std::string& stmt, const OracleVocabulary& vocab) {
    std::vector<java::Statement> parsed;
    try {
        parsed = java::parse_statements(stmt);
    } catch (const java::LexError& e) {
        throw java::ParseError(e.what());
    }
    if (parsed.size() != 1) throw java::ParseError("expected exactly one statement");
    return classify_parsed(parsed.front(), vocab);
}

JavaUnitRef make_java_unit_ref(std::filesystem::path file_path, std::string class_name,
                               std::string method_name, std::string method_signature,
                               std::string source_text,
                               std::vector<std::string> constructor_signatures) {
    if (method_signature.empty())
        throw java::ParseError("method signature must be nonempty");
    bool parses = false;
    try {
        java::CompilationUnit probe =
            java::parse_compilation_unit("class __Probe { " + method_signature + " { } }");
        parses = !probe.types.empty() && !probe.types[0].methods.empty();
    } catch (const Error&) {
    }
    if (!parses)
        throw java::ParseError("not a method declaration: " + method_signature);
    if (source_text.find(method_name) == std::string::npos)
        throw java::ParseError("source text does not contain method " + method_name);
    return JavaUnitRef{std::move(file_path),   std::move(class_name),
                       std::move(method_name), std::move(method_signature),
                       std::move(source_text), std::move(constructor_signatures)};
}

namespace {

std::string join_statements(const std::vector<std::string>& texts) {
    std::string out;
    for (const std::string& t : texts) {
        if (!out.empty()) out += '\n';
        out += t;
    }
    return out;
}

// try-block statements minus a trailing fail(...) call
std::vector<std::string> try_prefix_statements(const java::Statement& try_stmt,
                                               const OracleVocabulary& vocab) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < try_stmt.try_body.size(); ++i) {
        const java::Statement& s = try_stmt.try_body[i];
        if (i + 1 == try_stmt.try_body.size()) {
            auto calls = java::find_calls(s.text);
            if (!calls.empty() && calls.front().callee == vocab.fail_name) break;
        }
        out.push_back(s.text);
    }
    return out;
}

} // namespace

std::vector<SplitInstance> split_unit_test(const std::string& body, const OracleVocabulary& vocab) {
    std::vector<java::Statement> stmts = java::parse_statements(body);
    std::vector<StatementClass> classes;
    classes.reserve(stmts.size());
    bool has_assertion = false, has_exception = false;
    for (const java::Statement& s : stmts) {
        StatementClass c = classify_parsed(s, vocab);
        classes.push_back(c);
        has_assertion |= c == StatementClass::Assertion;
        has_exception |= c == StatementClass::ExpectedException;
    }
    if (!has_assertion && !has_exception) throw NoOracleFound("no oracle statement in test body");

    auto first_of = [&](StatementClass want) -> std::size_t {
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (classes[i] == want) return i;
        return classes.size();
    };
    auto run_from = [&](std::size_t i, StatementClass want) {
        std::vector<std::string> run;
        for (std::size_t k = i; k < classes.size() && classes[k] == want; ++k)
            run.push_back(stmts[k].text);
        return run;
    };

    std::vector<SplitInstance> out;
    if (has_assertion) {
        std::size_t i = first_of(StatementClass::Assertion);
        std::vector<std::string> prefix;
        for (std::size_t k = 0; k < i; ++k)
            if (classes[k] == StatementClass::Prefix) prefix.push_back(stmts[k].text);
        out.push_back(SplitInstance{join_statements(prefix),
                                    join_statements(run_from(i, StatementClass::Assertion)),
                                    OracleKind::Assertion});
    }
    if (has_exception) {
        std::size_t i = first_of(StatementClass::ExpectedException);
        std::vector<std::string> prefix;
        for (std::size_t k = 0; k < i; ++k)
            if (classes[k] == StatementClass::Prefix) prefix.push_back(stmts[k].text);
        // merge the try-block prefix only when the test mixes oracle kinds
        if (has_assertion && stmts[i].form == java::Statement::Form::Try)
            for (const std::string& s : try_prefix_statements(stmts[i], vocab)) prefix.push_back(s);
        out.push_back(SplitInstance{join_statements(prefix),
                                    join_statements(run_from(i, StatementClass::ExpectedException)),
                                    OracleKind::ExpectedException});
    }
    return out;
}

std::vector<SplitInstance> split_unit_test(const JavaUnitRef& test_method,
                                           const OracleVocabulary& vocab) {
    std::string body = test_method.source_text;
    std::size_t open = body.find('{');
    std::size_t close = body.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close <= open)
        throw java::ParseError("test method has no body: " + test_method.method_name);
    return split_unit_test(body.substr(open + 1, close - open - 1), vocab);
}

namespace {

std::string indent_block(const std::string& text, const std::string& pad) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (!out.empty()) out += '\n';
        out += pad + line;
    }
    return out;
}

std::string build_placeholder_body(const std::string& test_name, const std::string& prefix) {
    std::string body = "public void " + test_name + "() {\n";
    if (!prefix.empty()) body += indent_block(prefix, "    ") + "\n";
    body += "    ";
    body += kOraclePlaceholder;
    body += "\n}";
    return body;
}

struct FocalClassInfo {
    std::string name;
    fs::path file;
    java::TypeDecl decl;
    std::string package_name;
};

bool looks_like_test_method(const java::Method& m) {
    for (const std::string& a : m.annotations)
        if (a == "Test") return true;
    std::string l = lower(m.name);
    return m.param_types.empty() && (l.rfind("test", 0) == 0 || l.rfind("should", 0) == 0) &&
           m.has_body;
}

std::string strip_test_prefix(const std::string& test_name) {
    std::string l = lower(test_name);
    if (l.rfind("test", 0) == 0) return test_name.substr(4);
    if (l.rfind("should", 0) == 0) return test_name.substr(6);
    return test_name;
}

// Case-insensitive substring match of focal names inside the stripped test
// name; ties go to the longest focal name.
const java::Method* match_focal_method(const std::string& test_name, const java::TypeDecl& focal) {
    std::string remainder = lower(strip_test_prefix(test_name));
    const java::Method* best = nullptr;
    for (const java::Method& m : focal.methods) {
        if (m.is_constructor) continue;
        std::string fname = lower(m.name);
        if (fname.empty() || remainder.find(fname) == std::string::npos) continue;
        if (!best || fname.size() > lower(best->name).size()) best = &m;
    }
    return best;
}

std::string constructor_params_of(const java::TypeDecl& decl) {
    std::vector<std::string> sigs;
    for (const java::Method& m : decl.methods)
        if (m.is_constructor) sigs.push_back(m.signature);
    if (sigs.empty()) return decl.name + "()";
    std::string out;
    for (const std::string& s : sigs) {
        if (!out.empty()) out += "; ";
        out += s;
    }
    return out;
}

std::vector<fs::path> java_files_under(const fs::path& root) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file() && entry.path().extension() == ".java")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

PoolBuildResult build_demo_pools(const fs::path& project_root, const ProjectLayout& layout,
                                 const OracleVocabulary& vocab) {
    fs::path main_root = project_root / layout.source_dir;
    fs::path test_root = project_root / layout.test_dir;
    if (!fs::is_directory(main_root))
        throw ProjectLayoutError("missing source directory: " + main_root.string());
    if (!fs::is_directory(test_root))
        throw ProjectLayoutError("missing test directory: " + test_root.string());

    PoolBuildResult result;
    result.prefix_pool.kind = PoolKind::Prefix;
    result.oracle_pool.kind = PoolKind::Oracle;
    std::string tag = project_root.filename().string();
    result.prefix_pool.project_tag = tag;
    result.oracle_pool.project_tag = tag;

    std::map<std::string, FocalClassInfo> focal_index;
    for (const fs::path& file : java_files_under(main_root)) {
        try {
            java::CompilationUnit unit = java::parse_compilation_unit(read_file(file));
            for (java::TypeDecl& type : unit.types) {
                std::string name = type.name;
                if (focal_index.count(name)) {
                    result.warnings.push_back("duplicate class name " + name + ", keeping " +
                                              focal_index[name].file.string());
                    continue;
                }
                focal_index[name] = FocalClassInfo{name, file, std::move(type), unit.package_name};
            }
        } catch (const Error& e) {
            result.warnings.push_back("skipping " + file.string() + ": " + e.what());
        }
    }

    std::set<std::string> seen_prefix_lines, seen_oracle_lines;
    auto add_demo = [&](DemoPool& pool, Demo demo, std::set<std::string>& seen) {
        std::string line = serialize_demo(demo);
        if (seen.insert(line).second) pool.entries.push_back(std::move(demo));
    };

    for (const fs::path& file : java_files_under(test_root)) {
        java::CompilationUnit unit;
        try {
            unit = java::parse_compilation_unit(read_file(file));
        } catch (const Error& e) {
            result.warnings.push_back("skipping " + file.string() + ": " + e.what());
            continue;
        }
        for (const java::TypeDecl& test_type : unit.types) {
            std::vector<std::string> candidates;
            for (const std::string& base : focal_class_candidates(test_type.name))
                if (focal_index.count(base)) candidates.push_back(base);
            if (candidates.empty()) {
                result.warnings.push_back("no class under test for " + test_type.name +
                                          ", skipping its tests");
                continue;
            }
            std::sort(candidates.begin(), candidates.end());
            if (candidates.size() > 1)
                result.warnings.push_back(test_type.name + " maps to multiple classes, taking " +
                                          candidates.front());
            const FocalClassInfo& focal = focal_index[candidates.front()];

            for (const java::Method& test_method : test_type.methods) {
                if (test_method.is_constructor || !looks_like_test_method(test_method)) continue;
                const java::Method* focal_method = match_focal_method(test_method.name, focal.decl);
                if (!focal_method) {
                    result.warnings.push_back("no focal method for " + test_type.name + "." +
                                              test_method.name + ", skipped");
                    continue;
                }
                std::vector<SplitInstance> instances;
                try {
                    instances = split_unit_test(test_method.body, vocab);
                } catch (const NoOracleFound&) {
                    result.warnings.push_back("no oracle in " + test_type.name + "." +
                                              test_method.name + ", skipped");
                    continue;
                } catch (const Error& e) {
                    result.warnings.push_back("cannot split " + test_type.name + "." +
                                              test_method.name + ": " + e.what());
                    continue;
                }
                std::string ctor_params = constructor_params_of(focal.decl);
                for (const SplitInstance& inst : instances) {
                    if (inst.prefix.empty() || inst.oracle.empty()) {
                        result.warnings.push_back("empty prefix or oracle in " + test_type.name +
                                                  "." + test_method.name + ", instance skipped");
                        continue;
                    }
                    Demo p;
                    p.kind = PoolKind::Prefix;
                    p.focal_class = focal.name;
                    p.constructor_params = ctor_params;
                    p.focal_method_signature = focal_method->signature;
                    p.test_name = test_method.name;
                    p.test_prefix = inst.prefix;
                    add_demo(result.prefix_pool, std::move(p), seen_prefix_lines);

                    Demo o;
                    o.kind = PoolKind::Oracle;
                    o.focal_method_signature = focal_method->signature;
                    o.test_name = test_method.name;
                    o.test_body_with_placeholder =
                        build_placeholder_body(test_method.name, inst.prefix);
                    o.test_oracle = inst.oracle;
                    o.oracle_kind = inst.kind;
                    add_demo(result.oracle_pool, std::move(o), seen_oracle_lines);
                }
            }
        }
    }
    return result;
}

DemoPool exclusion_filter(const DemoPool& pool, const Query& query) {
    DemoPool out;
    out.kind = pool.kind;
    out.project_tag = pool.project_tag;
    for (const Demo& d : pool.entries) {
        bool excluded;
        if (pool.kind == PoolKind::Prefix)
            excluded = d.focal_class == query.class_name &&
                       d.focal_method_signature == query.focal_method_signature;
        else
            // oracle entries carry no class name; signature equality is the
            // whole leak surface
            excluded = d.focal_method_signature == query.focal_method_signature;
        if (!excluded) out.entries.push_back(d);
    }
    return out;
}

std::string serialize_demo(const Demo& demo) {
    json j;
    if (demo.kind == PoolKind::Prefix) {
        j["kind"] = "prefix";
        j["focal_class"] = demo.focal_class;
        j["constructor_params"] = demo.constructor_params;
        j["focal_method_signature"] = demo.focal_method_signature;
        j["test_name"] = demo.test_name;
        j["test_prefix"] = demo.test_prefix;
    } else {
        j["kind"] = "oracle";
        j["focal_method_signature"] = demo.focal_method_signature;
        j["test_body_with_placeholder"] = demo.test_body_with_placeholder;
        j["test_oracle"] = demo.test_oracle;
        j["oracle_kind"] = to_string(*demo.oracle_kind);
        j["test_name"] = demo.test_name;
    }
    return j.dump();
}

Demo parse_demo_line(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw PoolFormatError(std::string("bad pool line: ") + e.what());
    }
    std::string kind = j.value("kind", "");
    Demo d;
    try {
        if (kind == "prefix") {
            d.kind = PoolKind::Prefix;
            d.focal_class = j.at("focal_class").get<std::string>();
            d.constructor_params = j.at("constructor_params").get<std::string>();
            d.focal_method_signature = j.at("focal_method_signature").get<std::string>();
            d.test_name = j.at("test_name").get<std::string>();
            d.test_prefix = j.at("test_prefix").get<std::string>();
        } else if (kind == "oracle") {
            d.kind = PoolKind::Oracle;
            d.focal_method_signature = j.at("focal_method_signature").get<std::string>();
            d.test_body_with_placeholder = j.at("test_body_with_placeholder").get<std::string>();
            d.test_oracle = j.at("test_oracle").get<std::string>();
            d.oracle_kind = oracle_kind_from_string(j.at("oracle_kind").get<std::string>());
            d.test_name = j.at("test_name").get<std::string>();
        } else {
            throw PoolFormatError("unknown kind: '" + kind + "'");
        }
    } catch (const json::exception& e) {
        throw PoolFormatError(std::string("bad pool line: ") + e.what());
    }
    return d;
}

void save_pool(const DemoPool& pool, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const Demo& d : pool.entries) out << serialize_demo(d) << '\n';
}

DemoPool load_pool(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    DemoPool pool;
    bool kind_set = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        Demo d;
        try {
            d = parse_demo_line(line);
        } catch (const PoolFormatError& e) {
            throw PoolFormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!kind_set) {
            pool.kind = d.kind;
            kind_set = true;
        } else if (d.kind != pool.kind) {
            throw PoolFormatError(path.string() + ":" + std::to_string(lineno) +
                                  ": mixed demo kinds in one pool");
        }
        pool.entries.push_back(std::move(d));
    }
    pool.project_tag = path.stem().string();
    return pool;
}

std::vector<Query> load_queries(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::vector<Query> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            Query q;
            q.class_name = j.at("class_name").get<std::string>();
            q.constructor_signature = j.at("constructor_signature").get<std::string>();
            q.focal_method_signature = j.at("focal_method_signature").get<std::string>();
            q.focal_source = j.value("focal_source", "");
            q.project = j.value("project", "");
            out.push_back(std::move(q));
        } catch (const json::exception& e) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": bad query: " + e.what());
        }
    }
    return out;
}

void save_queries(const std::vector<Query>& queries, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const Query& q : queries) {
        json j;
        j["class_name"] = q.class_name;
        j["constructor_signature"] = q.constructor_signature;
        j["focal_method_signature"] = q.focal_method_signature;
        j["focal_source"] = q.focal_source;
        j["project"] = q.project;
        out << j.dump() << '\n';
    }
}

} // namespace testgen::corpus
