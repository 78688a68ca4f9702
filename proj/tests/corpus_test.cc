#include "testgen/corpus.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

namespace fs = std::filesystem;
using namespace testgen;
using corpus::OracleKind;
using corpus::StatementClass;

namespace {

const fs::path kDataDir = TESTGEN_TEST_DATA_DIR;

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("testgen_corpus_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST(DeriveTestClassName, SuffixesTest) {
    EXPECT_EQ(corpus::derive_test_class_name("JsonReader"), "JsonReaderTest");
    EXPECT_EQ(corpus::derive_test_class_name("CSVPrinter"), "CSVPrinterTest");
}

TEST(DeriveTestClassName, EmptyInputIsInvalid) {
    EXPECT_THROW(corpus::derive_test_class_name(""), corpus::InvalidIdentifier);
    EXPECT_THROW(corpus::derive_test_class_name("not a name"), corpus::InvalidIdentifier);
}

TEST(FocalClassCandidates, InvertsBothPatterns) {
    auto c1 = corpus::focal_class_candidates("JsonReaderTest");
    ASSERT_EQ(c1.size(), 1u);
    EXPECT_EQ(c1[0], "JsonReader");
    auto c2 = corpus::focal_class_candidates("TestJsonReader");
    ASSERT_EQ(c2.size(), 1u);
    EXPECT_EQ(c2[0], "JsonReader");
}

TEST(ClassifyStatement, AssertionVocabulary) {
    EXPECT_EQ(corpus::classify_statement("assertEquals(3, result);"), StatementClass::Assertion);
    EXPECT_EQ(corpus::classify_statement("Assert.assertTrue(x.isEmpty());"),
              StatementClass::Assertion);
    EXPECT_EQ(corpus::classify_statement("assertThat(x, is(3));"), StatementClass::Assertion);
    EXPECT_EQ(corpus::classify_statement("fail(\"unreachable\");"), StatementClass::Assertion);
}

TEST(ClassifyStatement, PrefixStatements) {
    EXPECT_EQ(corpus::classify_statement("int x = 5;"), StatementClass::Prefix);
    EXPECT_EQ(corpus::classify_statement("printer.printRecord(\"a\");"), StatementClass::Prefix);
    EXPECT_EQ(corpus::classify_statement("try { a(); } catch (Exception e) { }"),
              StatementClass::Prefix); // no fail() => tolerant setup, not an oracle
}

TEST(ClassifyStatement, ExpectedException) {
    EXPECT_EQ(corpus::classify_statement("assertThrows(IllegalArgumentException.class, () -> m());"),
              StatementClass::ExpectedException);
    EXPECT_EQ(corpus::classify_statement(
                  "try { m(); fail(\"expected\"); } catch (IllegalStateException e) { }"),
              StatementClass::ExpectedException);
    EXPECT_EQ(corpus::classify_statement("Exception e = assertThrows(E.class, () -> m());"),
              StatementClass::ExpectedException);
}

TEST(ClassifyStatement, UnparseableThrows) {
    EXPECT_THROW(corpus::classify_statement("int x = ;;("), java::ParseError);
    EXPECT_THROW(corpus::classify_statement("assertEquals(1, x); extraateol"), java::ParseError);
}

TEST(ClassifyStatement, Deterministic) {
    for (int i = 0; i < 10; ++i)
        EXPECT_EQ(corpus::classify_statement("assertNull(v);"), StatementClass::Assertion);
}

TEST(SplitUnitTest, SingleOracle) {
    std::string body =
        "JsonReader reader = new JsonReader(\"42\");\n"
        "int value = reader.readNumber();\n"
        "assertEquals(42, value);";
    auto instances = corpus::split_unit_test(body);
    ASSERT_EQ(instances.size(), 1u);
    EXPECT_EQ(instances[0].kind, OracleKind::Assertion);
    EXPECT_EQ(instances[0].prefix,
              "JsonReader reader = new JsonReader(\"42\");\nint value = reader.readNumber();");
    EXPECT_EQ(instances[0].oracle, "assertEquals(42, value);");
}

TEST(SplitUnitTest, TrailingAssertionRun) {
    std::string body =
        "setup();\n"
        "assertEquals(1, a);\n"
        "assertEquals(2, b);";
    auto instances = corpus::split_unit_test(body);
    ASSERT_EQ(instances.size(), 1u);
    EXPECT_EQ(instances[0].oracle, "assertEquals(1, a);\nassertEquals(2, b);");
}

TEST(SplitUnitTest, InterleavedSplitsAtFirstOracle) {
    std::string body =
        "setup();\n"
        "assertEquals(1, a);\n"
        "more();\n"
        "assertEquals(2, b);";
    auto instances = corpus::split_unit_test(body);
    ASSERT_EQ(instances.size(), 1u);
    EXPECT_EQ(instances[0].prefix, "setup();");
    EXPECT_EQ(instances[0].oracle, "assertEquals(1, a);");
}

TEST(SplitUnitTest, MixedOracleYieldsTwoInstances) {
    std::string body =
        "JsonReader reader = new JsonReader(\"42\");\n"
        "reader.close();\n"
        "try {\n"
        "    reader.readNumber();\n"
        "    fail(\"expected\");\n"
        "} catch (IllegalStateException e) {\n"
        "}\n"
        "assertTrue(reader.isClosed());";
    auto instances = corpus::split_unit_test(body);
    ASSERT_EQ(instances.size(), 2u);
    EXPECT_EQ(instances[0].kind, OracleKind::Assertion);
    EXPECT_EQ(instances[0].prefix,
              "JsonReader reader = new JsonReader(\"42\");\nreader.close();");
    EXPECT_EQ(instances[0].oracle, "assertTrue(reader.isClosed());");
    EXPECT_EQ(instances[1].kind, OracleKind::ExpectedException);
    // the try-block prefix (minus fail) merges behind the leading statements
    EXPECT_EQ(instances[1].prefix,
              "JsonReader reader = new JsonReader(\"42\");\nreader.close();\nreader.readNumber();");
    EXPECT_NE(instances[1].oracle.find("try {"), std::string::npos);
    EXPECT_NE(instances[1].oracle.find("fail("), std::string::npos);
}

TEST(SplitUnitTest, NoOracleThrows) {
    EXPECT_THROW(corpus::split_unit_test("setup();\nmore();"), corpus::NoOracleFound);
}

TEST(JavaUnitRef, InvariantsEnforced) {
    auto ref = corpus::make_java_unit_ref(
        "T.java", "CSVPrinterTest", "testPrint", "public void testPrint()",
        "public void testPrint() {\n    p.print(\"x\");\n    assertEquals(\"x\", p.getOutput());\n}",
        {"CSVPrinter()"});
    auto instances = corpus::split_unit_test(ref);
    ASSERT_EQ(instances.size(), 1u);
    EXPECT_EQ(instances[0].kind, OracleKind::Assertion);

    EXPECT_THROW(corpus::make_java_unit_ref("T.java", "C", "m", "", "m() {}", {}),
                 java::ParseError);
    EXPECT_THROW(corpus::make_java_unit_ref("T.java", "C", "m", "not a signature at all;",
                                            "void m() {}", {}),
                 java::ParseError);
    EXPECT_THROW(corpus::make_java_unit_ref("T.java", "C", "m", "public void m()",
                                            "void other() {}", {}),
                 java::ParseError);
}

TEST(BuildDemoPools, FixtureCountsAreExact) {
    auto pools = corpus::build_demo_pools(kDataDir / "fixture_project");
    EXPECT_EQ(pools.prefix_pool.size(), 14u);
    EXPECT_EQ(pools.oracle_pool.size(), 14u);
    for (const auto& w : pools.warnings) ADD_FAILURE() << "unexpected warning: " << w;
}

TEST(BuildDemoPools, RerunIsByteIdentical) {
    fs::path dir = temp_dir("idempotent");
    auto pools1 = corpus::build_demo_pools(kDataDir / "fixture_project");
    auto pools2 = corpus::build_demo_pools(kDataDir / "fixture_project");
    corpus::save_pool(pools1.prefix_pool, dir / "p1.jsonl");
    corpus::save_pool(pools2.prefix_pool, dir / "p2.jsonl");
    corpus::save_pool(pools1.oracle_pool, dir / "o1.jsonl");
    corpus::save_pool(pools2.oracle_pool, dir / "o2.jsonl");
    EXPECT_EQ(read_file(dir / "p1.jsonl"), read_file(dir / "p2.jsonl"));
    EXPECT_EQ(read_file(dir / "o1.jsonl"), read_file(dir / "o2.jsonl"));
}

TEST(BuildDemoPools, EmptyTestDirYieldsEmptyPools) {
    fs::path root = temp_dir("empty_project");
    fs::create_directories(root / "src/main");
    fs::create_directories(root / "src/test");
    auto pools = corpus::build_demo_pools(root);
    EXPECT_TRUE(pools.prefix_pool.empty());
    EXPECT_TRUE(pools.oracle_pool.empty());
}

TEST(BuildDemoPools, MissingDirsThrowLayoutError) {
    fs::path root = temp_dir("no_layout");
    EXPECT_THROW(corpus::build_demo_pools(root), corpus::ProjectLayoutError);
}

TEST(BuildDemoPools, OrphanTestClassSkippedOthersKept) {
    auto pools = corpus::build_demo_pools(kDataDir / "orphan_project");
    EXPECT_EQ(pools.prefix_pool.size(), 1u);
    EXPECT_EQ(pools.oracle_pool.size(), 1u);
    bool warned = false;
    for (const auto& w : pools.warnings) warned |= w.find("WidgetTest") != std::string::npos;
    EXPECT_TRUE(warned);
}

TEST(BuildDemoPools, SplitSoundness) {
    // reconstructing each oracle demo reproduces an in-order subsequence of
    // the source test's statements; exact for single-oracle tests
    auto pools = corpus::build_demo_pools(kDataDir / "fixture_project");
    fs::path test_dir = kDataDir / "fixture_project/src/test";
    std::map<std::string, std::vector<std::string>> source_stmts;
    for (const auto& entry : fs::recursive_directory_iterator(test_dir)) {
        if (!entry.is_regular_file()) continue;
        auto unit = java::parse_compilation_unit(read_file(entry.path()));
        for (const auto& t : unit.types)
            for (const auto& m : t.methods)
                if (m.has_body) {
                    std::vector<std::string> texts;
                    for (const auto& s : java::parse_statements(m.body)) texts.push_back(s.text);
                    source_stmts[m.name] = texts;
                }
    }
    std::map<std::string, int> instances_per_test;
    for (const auto& d : pools.oracle_pool.entries) ++instances_per_test[d.test_name];

    for (const auto& d : pools.oracle_pool.entries) {
        std::string body = d.test_body_with_placeholder;
        auto pos = body.find(corpus::kOraclePlaceholder);
        ASSERT_NE(pos, std::string::npos);
        ASSERT_EQ(body.find(corpus::kOraclePlaceholder, pos + 1), std::string::npos)
            << "placeholder must occur exactly once";
        body.replace(pos, std::string(corpus::kOraclePlaceholder).size(), d.test_oracle);
        // body is "public void name() { ... }": extract the braces content
        auto open = body.find('{');
        auto close = body.rfind('}');
        ASSERT_NE(open, std::string::npos);
        std::vector<std::string> reconstructed;
        for (const auto& s : java::parse_statements(body.substr(open + 1, close - open - 1)))
            reconstructed.push_back(s.text);

        const auto& original = source_stmts.at(d.test_name);
        auto normalize = [](std::string s) {
            std::string out;
            for (char c : s)
                if (!std::isspace(static_cast<unsigned char>(c))) out += c;
            return out;
        };
        if (instances_per_test[d.test_name] == 1) {
            ASSERT_EQ(reconstructed.size(), original.size()) << d.test_name;
            for (std::size_t i = 0; i < original.size(); ++i)
                EXPECT_EQ(normalize(reconstructed[i]), normalize(original[i])) << d.test_name;
        } else {
            // in-order match: each reconstructed statement is either an
            // original statement or nested inside one (merged try prefix); a
            // containing statement may host several reconstructed ones and
            // still match itself afterwards, so only exact matches advance
            std::size_t j = 0;
            for (const auto& r : reconstructed) {
                bool matched = false;
                while (j < original.size()) {
                    if (normalize(original[j]) == normalize(r)) {
                        matched = true;
                        ++j;
                        break;
                    }
                    if (normalize(original[j]).find(normalize(r)) != std::string::npos) {
                        matched = true; // nested inside original[j]; keep j
                        break;
                    }
                    ++j;
                }
                EXPECT_TRUE(matched) << d.test_name << ": statement not in order: " << r;
            }
        }
    }
}

TEST(BuildDemoPools, PrefixAndOracleTestNamesPairUp) {
    auto pools = corpus::build_demo_pools(kDataDir / "fixture_project");
    std::set<std::string> oracle_names;
    for (const auto& d : pools.oracle_pool.entries) oracle_names.insert(d.test_name);
    for (const auto& d : pools.prefix_pool.entries)
        EXPECT_TRUE(oracle_names.count(d.test_name)) << d.test_name;
}

TEST(ExclusionFilter, ConjunctionRequired) {
    corpus::DemoPool pool;
    pool.kind = corpus::PoolKind::Prefix;
    corpus::Demo a;
    a.kind = corpus::PoolKind::Prefix;
    a.focal_class = "A";
    a.focal_method_signature = "void s()";
    corpus::Demo b = a;
    b.focal_method_signature = "void t()";
    pool.entries = {a, b};

    corpus::Query q;
    q.class_name = "A";
    q.focal_method_signature = "void s()";
    auto filtered = corpus::exclusion_filter(pool, q);
    ASSERT_EQ(filtered.size(), 1u);
    EXPECT_EQ(filtered.entries[0].focal_method_signature, "void t()");
}

TEST(ExclusionFilter, EmptyPoolStaysEmpty) {
    corpus::DemoPool pool;
    corpus::Query q;
    q.class_name = "A";
    q.focal_method_signature = "void s()";
    EXPECT_TRUE(corpus::exclusion_filter(pool, q).empty());
}

TEST(PoolIo, SaveLoadRoundTrip) {
    fs::path dir = temp_dir("roundtrip");
    auto pools = corpus::build_demo_pools(kDataDir / "fixture_project");
    corpus::save_pool(pools.oracle_pool, dir / "oracle.jsonl");
    auto loaded = corpus::load_pool(dir / "oracle.jsonl");
    ASSERT_EQ(loaded.size(), pools.oracle_pool.size());
    EXPECT_EQ(loaded.kind, corpus::PoolKind::Oracle);
    for (std::size_t i = 0; i < loaded.size(); ++i)
        EXPECT_EQ(corpus::serialize_demo(loaded.entries[i]),
                  corpus::serialize_demo(pools.oracle_pool.entries[i]));
}

TEST(PoolIo, UnknownKindRejected) {
    fs::path dir = temp_dir("badkind");
    {
        std::ofstream out(dir / "bad.jsonl");
        out << "{\"kind\":\"mystery\",\"test_name\":\"t\"}\n";
    }
    EXPECT_THROW(corpus::load_pool(dir / "bad.jsonl"), corpus::PoolFormatError);
}

TEST(PoolIo, NoTwoEntriesByteIdentical) {
    auto pools = corpus::build_demo_pools(kDataDir / "fixture_project");
    std::set<std::string> lines;
    for (const auto& d : pools.prefix_pool.entries)
        EXPECT_TRUE(lines.insert(corpus::serialize_demo(d)).second);
    lines.clear();
    for (const auto& d : pools.oracle_pool.entries)
        EXPECT_TRUE(lines.insert(corpus::serialize_demo(d)).second);
}
