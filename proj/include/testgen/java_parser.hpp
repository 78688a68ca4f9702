#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "testgen/error.hpp"
#include "testgen/java_lexer.hpp"

namespace testgen::java {

class ParseError : public Error {
public:
    using Error::Error;
};

// One statement at the top level of a block. `text` is the exact source
// slice; try/catch additionally exposes its structure so a test oracle
// can be split out of it.
struct Statement {
    enum class Form { Simple, Block, If, Loop, Switch, Try, Synchronized, LocalType, Empty };
    Form form = Form::Simple;
    std::string text;

    // Try only
    std::string resources;               // inside try (...) when present
    std::vector<Statement> try_body;
    std::vector<std::string> catch_blocks; // each full "catch (...) {...}" slice
    std::string finally_body;            // inside finally braces when present
    bool has_finally = false;
};

std::vector<Statement> parse_statements(std::string_view block_source);

struct Method {
    std::string name;
    std::string signature;   // normalized: modifiers + return type + name(params) [throws ...]
    std::string return_type; // empty for constructors
    std::vector<std::string> param_types; // normalized; varargs keep trailing "..."
    std::vector<std::string> annotations; // simple names, e.g. "Test"
    bool is_constructor = false;
    bool has_body = false;
    std::string body; // slice between braces, exclusive
    std::string text; // full declaration incl. annotations
};

struct TypeDecl {
    std::string name;
    std::string kind; // class | interface | enum | record
    std::vector<Method> methods;
    std::vector<TypeDecl> nested;
};

struct CompilationUnit {
    std::string package_name;
    std::vector<std::string> imports; // as written, e.g. "static org.junit.Assert.*"
    std::vector<TypeDecl> types;
};

CompilationUnit parse_compilation_unit(std::string_view source);

// Call expressions by simple callee name, in source order. `new Foo(...)`
// and annotation arguments are not calls.
struct CallSite {
    std::string callee;
    int arg_count = 0;
};

std::vector<CallSite> find_calls(std::string_view code);

// Whitespace-normalized display form of a declaration header.
std::string normalize_decl(std::string_view decl_source);

} // namespace testgen::java
