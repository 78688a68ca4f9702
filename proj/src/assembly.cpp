#include "testgen/assembly.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "testgen/java_parser.hpp"
#include "testgen/prompting.hpp"

namespace fs = std::filesystem;

namespace testgen::assembly {

void ClasspathIndex::add(const std::string& fully_qualified) {
    auto dot = fully_qualified.rfind('.');
    std::string simple = dot == std::string::npos ? fully_qualified
                                                  : fully_qualified.substr(dot + 1);
    by_simple_[simple].insert(fully_qualified);
}

ClasspathIndex ClasspathIndex::scan(const fs::path& source_root) {
    ClasspathIndex index;
    if (!fs::is_directory(source_root)) return index;
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(source_root))
        if (entry.is_regular_file() && entry.path().extension() == ".java")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        try {
            java::CompilationUnit unit = java::parse_compilation_unit(ss.str());
            for (const java::TypeDecl& type : unit.types)
                index.add(unit.package_name.empty() ? type.name
                                                    : unit.package_name + "." + type.name);
        } catch (const Error&) {
            // unparseable files contribute nothing
        }
    }
    return index;
}

const std::set<std::string>* ClasspathIndex::lookup(const std::string& simple_name) const {
    auto it = by_simple_.find(simple_name);
    return it == by_simple_.end() ? nullptr : &it->second;
}

namespace {

std::string indent_block(const std::string& text, const std::string& pad) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (!out.empty()) out += '\n';
        out += line.empty() ? line : pad + line;
    }
    return out;
}

std::string package_of(const std::string& focal_source) {
    if (focal_source.empty()) return "";
    try {
        return java::parse_compilation_unit(focal_source).package_name;
    } catch (const Error&) {
        return "";
    }
}

void check_statements(const std::string& fragment, const char* label) {
    try {
        if (java::parse_statements(fragment).empty())
            throw AssemblyParseError(std::string(label) + " contains no statements");
    } catch (const java::ParseError& e) {
        throw AssemblyParseError(std::string(label) + " does not parse: " + e.what());
    } catch (const java::LexError& e) {
        throw AssemblyParseError(std::string(label) + " does not lex: " + e.what());
    }
}

std::string render_source(const std::string& package_name,
                          const std::vector<std::string>& imports,
                          const std::string& class_name, const std::string& method_name,
                          const std::string& body) {
    std::string out;
    if (!package_name.empty()) out += "package " + package_name + ";\n\n";
    for (const std::string& imp : imports) out += "import " + imp + ";\n";
    if (!imports.empty()) out += "\n";
    out += "public class " + class_name + " {\n\n";
    out += "    @Test\n";
    out += "    public void " + method_name + "() {\n";
    out += indent_block(body, "        ");
    out += "\n    }\n}\n";
    return out;
}

// Collects capitalized simple names used in `code` that are not already
// qualified (preceded by '.') and not declared locally.
std::set<std::string> candidate_type_names(const std::string& code) {
    std::set<std::string> names;
    std::vector<java::Token> toks;
    try {
        toks = java::lex(code);
    } catch (const java::LexError&) {
        return names;
    }
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const java::Token& t = toks[i];
        if (t.kind != java::Token::Kind::Identifier || java::is_keyword(t.text)) continue;
        if (t.text.empty() || !std::isupper(static_cast<unsigned char>(t.text[0]))) continue;
        if (i > 0 && (toks[i - 1].is(".") || toks[i - 1].is("@"))) continue;
        names.insert(t.text);
    }
    return names;
}

} // namespace

std::string fix_imports(const std::string& source, const ClasspathIndex& index) {
    java::CompilationUnit unit;
    try {
        unit = java::parse_compilation_unit(source);
    } catch (const Error&) {
        return source; // leave unparseable sources for the compiler loop
    }
    std::set<std::string> imports(unit.imports.begin(), unit.imports.end());
    std::set<std::string> imported_simple;
    std::set<std::string> declared;
    for (const std::string& imp : imports) {
        auto dot = imp.rfind('.');
        if (dot != std::string::npos) imported_simple.insert(imp.substr(dot + 1));
    }
    for (const java::TypeDecl& t : unit.types) declared.insert(t.name);

    for (const std::string& name : candidate_type_names(source)) {
        if (declared.count(name) || imported_simple.count(name)) continue;
        const std::set<std::string>* fqns = index.lookup(name);
        if (!fqns || fqns->empty()) continue;
        const std::string& fqn = *fqns->begin(); // deterministic: sorted set
        if (fqn == name) continue;               // default package, nothing to import
        imports.insert(fqn);
        imported_simple.insert(name);
    }

    // re-emit: package line, sorted deduplicated imports, then the first type
    std::string body = source;
    // strip existing package/import prefix
    std::size_t cut = 0;
    {
        std::vector<java::Token> toks = java::lex(source);
        std::size_t i = 0;
        while (i < toks.size() && (toks[i].is("package") || toks[i].is("import"))) {
            while (i < toks.size() && !toks[i].is(";")) ++i;
            if (i < toks.size()) {
                cut = toks[i].end;
                ++i;
            }
        }
    }
    body = body.substr(cut);
    std::size_t b = body.find_first_not_of(" \t\r\n");
    body = b == std::string::npos ? "" : body.substr(b);

    std::string out;
    if (!unit.package_name.empty()) out += "package " + unit.package_name + ";\n\n";
    for (const std::string& imp : imports) out += "import " + imp + ";\n";
    if (!imports.empty()) out += "\n";
    out += body;
    return out;
}

namespace {

CandidateTest assemble_impl(const std::string& prefix, const std::string& oracle,
                            const std::string& body, const corpus::Query& query,
                            const ClasspathIndex& index, JUnitDialect dialect) {
    CandidateTest cand;
    cand.query_id = query.class_name + "#" + query.focal_method_signature;
    cand.package_name = package_of(query.focal_source);
    cand.test_class_name = corpus::derive_test_class_name(query.class_name);
    cand.test_method_name = prompting::derived_test_method_name(query);
    cand.prefix_text = prefix;
    cand.oracle_text = oracle;
    cand.revision = 0;

    std::vector<std::string> imports = dialect.imports();
    cand.source_file =
        render_source(cand.package_name, imports, cand.test_class_name, cand.test_method_name, body);
    cand.source_file = fix_imports(cand.source_file, index);

    java::CompilationUnit unit;
    try {
        unit = java::parse_compilation_unit(cand.source_file);
    } catch (const Error& e) {
        throw AssemblyParseError(std::string("assembled source does not parse: ") + e.what());
    }
    cand.imports = unit.imports;
    return cand;
}

} // namespace

CandidateTest assemble(const std::string& prefix, const std::string& oracle,
                       const corpus::Query& query, const ClasspathIndex& index,
                       JUnitDialect dialect) {
    if (prefix.empty() || oracle.empty())
        throw AssemblyPreconditionError("prefix and oracle must be nonempty");
    if (oracle.find(corpus::kOraclePlaceholder) != std::string::npos)
        throw AssemblyPreconditionError("oracle still contains the placeholder token");
    check_statements(prefix, "prefix");
    check_statements(oracle, "oracle");
    return assemble_impl(prefix, oracle, prefix + "\n" + oracle, query, index, dialect);
}

CandidateTest assemble_full_body(const std::string& body, const corpus::Query& query,
                                 const ClasspathIndex& index, JUnitDialect dialect) {
    if (body.empty()) throw AssemblyPreconditionError("body must be nonempty");
    check_statements(body, "body");
    return assemble_impl(body, "", body, query, index, dialect);
}

std::string substitute_placeholder(const std::string& body_with_placeholder,
                                   const std::string& oracle) {
    const std::string token = corpus::kOraclePlaceholder;
    std::size_t first = body_with_placeholder.find(token);
    if (first == std::string::npos)
        throw PlaceholderCountError("placeholder occurs 0 times, expected exactly 1");
    if (body_with_placeholder.find(token, first + token.size()) != std::string::npos)
        throw PlaceholderCountError("placeholder occurs more than once");
    std::string out = body_with_placeholder;
    out.replace(first, token.size(), oracle);
    return out;
}

std::string rebuild_source(const CandidateTest& candidate, const std::string& body) {
    std::vector<std::string> imports = candidate.imports;
    return render_source(candidate.package_name, imports, candidate.test_class_name,
                         candidate.test_method_name, body);
}

} // namespace testgen::assembly
