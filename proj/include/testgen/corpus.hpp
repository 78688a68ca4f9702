#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "testgen/error.hpp"
#include "testgen/java_parser.hpp"

namespace testgen::corpus {

class InvalidIdentifier : public Error {
public:
    using Error::Error;
};
class NoOracleFound : public Error {
public:
    using Error::Error;
};
class ProjectLayoutError : public Error {
public:
    using Error::Error;
};
class PoolFormatError : public Error {
public:
    using Error::Error;
};

inline constexpr const char* kOraclePlaceholder = "<OraclePlaceHolder>";

enum class OracleKind { Assertion, ExpectedException };

std::string to_string(OracleKind kind);
OracleKind oracle_kind_from_string(const std::string& s);

// One focal method to generate a test for.
struct Query {
    std::string class_name;
    std::string constructor_signature;
    std::string focal_method_signature;
    std::string focal_source;
    std::string project;
};

// A method located in a Java source tree (a test method or a focal method).
struct JavaUnitRef {
    std::filesystem::path file_path;
    std::string class_name;
    std::string method_name;
    std::string method_signature; // return type + name + parameter types
    std::string source_text;      // full method text, body included
    std::vector<std::string> constructor_signatures;
};

// Enforces the structural invariants: the signature parses as a method
// declaration and the source text contains the method name.
JavaUnitRef make_java_unit_ref(std::filesystem::path file_path, std::string class_name,
                               std::string method_name, std::string method_signature,
                               std::string source_text,
                               std::vector<std::string> constructor_signatures);

enum class PoolKind { Prefix, Oracle };

// One mined demonstration. Prefix entries fill the first group of fields,
// oracle entries the second; focal_method_signature and test_name are shared.
struct Demo {
    PoolKind kind = PoolKind::Prefix;
    std::string focal_class;
    std::string constructor_params;
    std::string test_prefix;
    std::string focal_method_signature;
    std::string test_name;
    std::string test_body_with_placeholder;
    std::string test_oracle;
    std::optional<OracleKind> oracle_kind;
};

struct DemoPool {
    PoolKind kind = PoolKind::Prefix;
    std::string project_tag;
    std::vector<Demo> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

// Assertion vocabulary, configurable; seeded with the JUnit assert family.
struct OracleVocabulary {
    std::set<std::string> assertions;
    std::set<std::string> expected_exception;
    std::string fail_name = "fail";

    static const OracleVocabulary& defaults();
};

enum class StatementClass { Prefix, Assertion, ExpectedException };

std::string derive_test_class_name(const std::string& class_name);
std::vector<std::string> test_class_name_candidates(const std::string& class_name);
std::vector<std::string> focal_class_candidates(const std::string& test_class_name);

StatementClass classify_statement(const std::string& stmt,
                                  const OracleVocabulary& vocab = OracleVocabulary::defaults());
StatementClass classify_statement(const java::Statement& stmt,
                                  const OracleVocabulary& vocab = OracleVocabulary::defaults());

struct SplitInstance {
    std::string prefix;  // newline-joined statements
    std::string oracle;  // newline-joined statements
    OracleKind kind = OracleKind::Assertion;
};

// Splits a test method body into prefix/oracle instances. Mixed-oracle tests
// yield one instance per oracle kind; the expected-exception instance merges
// the try-block statements (minus the trailing fail) into its prefix.
std::vector<SplitInstance> split_unit_test(
    const std::string& body, const OracleVocabulary& vocab = OracleVocabulary::defaults());
std::vector<SplitInstance> split_unit_test(
    const JavaUnitRef& test_method, const OracleVocabulary& vocab = OracleVocabulary::defaults());

struct ProjectLayout {
    std::string source_dir = "src/main";
    std::string test_dir = "src/test";
};

struct PoolBuildResult {
    DemoPool prefix_pool;
    DemoPool oracle_pool;
    std::vector<std::string> warnings;
};

PoolBuildResult build_demo_pools(const std::filesystem::path& project_root,
                                 const ProjectLayout& layout = {},
                                 const OracleVocabulary& vocab = OracleVocabulary::defaults());

DemoPool exclusion_filter(const DemoPool& pool, const Query& query);

std::string serialize_demo(const Demo& demo);
Demo parse_demo_line(const std::string& line);

void save_pool(const DemoPool& pool, const std::filesystem::path& path);
DemoPool load_pool(const std::filesystem::path& path);

std::vector<Query> load_queries(const std::filesystem::path& path);
void save_queries(const std::vector<Query>& queries, const std::filesystem::path& path);

} // namespace testgen::corpus
