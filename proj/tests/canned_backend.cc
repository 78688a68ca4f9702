#include "canned_backend.hpp"

#include <fstream>
#include <sstream>

namespace testgen::testsupport {

namespace {

std::string last_line_value(const std::string& text, const std::string& label) {
    std::size_t pos = text.rfind(label);
    if (pos == std::string::npos) return "";
    pos += label.size();
    std::size_t eol = text.find('\n', pos);
    return text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

llm::ChatReply CannedBackend::complete(const llm::ChatRequest& req) {
    const std::string& user = req.messages.back().content;

    if (user.find("COMPILE_ERRORS:") != std::string::npos ||
        user.find("EXECUTION_ERRORS:") != std::string::npos) {
        std::size_t pos = user.rfind("UNIT_TEST:\n");
        std::string source = pos == std::string::npos ? "" : user.substr(pos + 11);
        return {source + "\nEND_OF_DEMO", llm::FinishReason::Stop, 100, 50};
    }

    std::string signature = last_line_value(user, "FOCAL_METHOD_SIGNATURE: ");
    auto it = replies_.find(signature);
    if (it == replies_.end())
        return {"// no canned reply\nEND_OF_DEMO", llm::FinishReason::Stop, 10, 5};

    // suffix decides the stage
    auto ends_with = [&](const std::string& suffix) {
        return user.size() >= suffix.size() &&
               user.compare(user.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with("TEST_ORACLE:\n"))
        return {it->second.oracle_reply + "\nEND_OF_DEMO", llm::FinishReason::Stop, 100, 20};
    if (ends_with("TEST_PREFIX:\n"))
        return {it->second.prefix_reply + "\nEND_OF_DEMO", llm::FinishReason::Stop, 100, 30};
    // direct mode target ends with UNIT_TEST:
    return {it->second.prefix_reply + "\n" + it->second.oracle_reply + "\nEND_OF_DEMO",
            llm::FinishReason::Stop, 100, 40};
}

FixtureBatch make_fixture_batch(const std::filesystem::path& root) {
    FixtureBatch batch;
    std::string reader_src =
        read_file(root / "src/main/java/com/example/fixture/JsonReader.java");
    std::string printer_src =
        read_file(root / "src/main/java/com/example/fixture/CSVPrinter.java");

    struct Spec {
        const char* class_name;
        const char* ctor;
        const char* signature;
        const char* prefix;
        const char* oracle; // hand-labeled: oracles containing BOOM fail execution
    };
    const Spec specs[] = {
        {"JsonReader", "public JsonReader(String json)", "public int readNumber()",
         "JsonReader reader = new JsonReader(\"42\");\nint value = reader.readNumber();",
         "assertEquals(42, value);"},
        {"JsonReader", "public JsonReader(String json)", "public String readString()",
         "JsonReader reader = new JsonReader(\"hi\");\nString value = reader.readString();",
         "assertEquals(\"hi\", value);"},
        {"JsonReader", "public JsonReader(String json)", "public boolean isClosed()",
         "JsonReader reader = new JsonReader(\"{}\");\nboolean closed = reader.isClosed();",
         "assertFalse(closed);"},
        {"JsonReader", "public JsonReader(String json)", "public void close()",
         "JsonReader reader = new JsonReader(\"{}\");\nreader.close();",
         "assertEquals(\"BOOM\", reader.readString());"},
        {"JsonReader", "public JsonReader(String json)", "public void skipValue()",
         "JsonReader reader = new JsonReader(\"abc\");\nreader.skipValue();",
         "assertEquals(\"BOOM\", String.valueOf(reader.position()));"},
        {"CSVPrinter", "public CSVPrinter()", "public void printRecord(Object... values)",
         "CSVPrinter printer = new CSVPrinter();\nprinter.printRecord(\"a\", \"b\");",
         "assertEquals(\"a,b\\n\", printer.getOutput());"},
        {"CSVPrinter", "public CSVPrinter()", "public String getOutput()",
         "CSVPrinter printer = new CSVPrinter();\nString output = printer.getOutput();",
         "assertEquals(\"\", output);"},
        {"CSVPrinter", "public CSVPrinter()", "public int getRecordCount()",
         "CSVPrinter printer = new CSVPrinter();\nint count = printer.getRecordCount();",
         "assertEquals(0, count);"},
        {"CSVPrinter", "public CSVPrinter()", "public void print(Object value)",
         "CSVPrinter printer = new CSVPrinter();\nprinter.print(\"x\");",
         "assertEquals(\"BOOM\", printer.getOutput());"},
        {"CSVPrinter", "public CSVPrinter()", "public void flush()",
         "CSVPrinter printer = new CSVPrinter();\nprinter.flush();",
         "assertEquals(\"BOOM\", printer.getOutput());"},
    };

    for (const Spec& s : specs) {
        corpus::Query q;
        q.class_name = s.class_name;
        q.constructor_signature = s.ctor;
        q.focal_method_signature = s.signature;
        q.focal_source = std::string(s.class_name) == "JsonReader" ? reader_src : printer_src;
        q.project = "fixture";
        batch.queries.push_back(q);
        batch.replies[s.signature] = CannedReplies{s.prefix, s.oracle};
    }
    return batch;
}

} // namespace testgen::testsupport
