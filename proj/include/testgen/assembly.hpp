#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "testgen/corpus.hpp"
#include "testgen/error.hpp"

namespace testgen::assembly {

class AssemblyParseError : public Error {
public:
    using Error::Error;
};
class PlaceholderCountError : public Error {
public:
    using Error::Error;
};
class AssemblyPreconditionError : public Error {
public:
    using Error::Error;
};

// Simple name -> fully qualified names, built by scanning package
// declarations; name resolution proper is the compiler loop's job.
class ClasspathIndex {
public:
    void add(const std::string& fully_qualified);
    static ClasspathIndex scan(const std::filesystem::path& source_root);

    const std::set<std::string>* lookup(const std::string& simple_name) const;
    std::size_t size() const { return by_simple_.size(); }

private:
    std::map<std::string, std::set<std::string>> by_simple_;
};

struct CandidateTest {
    std::string query_id;
    std::string package_name;
    std::string test_class_name;
    std::string test_method_name;
    std::string prefix_text;
    std::string oracle_text;
    std::string source_file;
    std::vector<std::string> imports;
    int revision = 0;
};

struct JUnitDialect {
    bool junit5 = false;
    std::vector<std::string> imports() const {
        if (junit5)
            return {"org.junit.jupiter.api.Test", "static org.junit.jupiter.api.Assertions.*"};
        return {"org.junit.Test", "static org.junit.Assert.*"};
    }
};

CandidateTest assemble(const std::string& prefix, const std::string& oracle,
                       const corpus::Query& query, const ClasspathIndex& index = {},
                       JUnitDialect dialect = {});

// Direct mode: the reply is already a complete body (prefix+oracle fused).
CandidateTest assemble_full_body(const std::string& body, const corpus::Query& query,
                                 const ClasspathIndex& index = {}, JUnitDialect dialect = {});

std::string substitute_placeholder(const std::string& body_with_placeholder,
                                   const std::string& oracle);

std::string fix_imports(const std::string& source, const ClasspathIndex& index);

// Rebuilds the candidate source around a replacement body (used by the
// repair loop when the model replies with statements instead of a class).
std::string rebuild_source(const CandidateTest& candidate, const std::string& body);

} // namespace testgen::assembly
