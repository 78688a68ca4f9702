#pragma once

#include <map>
#include <string>
#include <vector>

#include "testgen/corpus.hpp"
#include "testgen/llm.hpp"

namespace testgen::testsupport {

struct CannedReplies {
    std::string prefix_reply;
    std::string oracle_reply;
};

// Deterministic stand-in for a live model: generation prompts are answered
// from a table keyed by the target block's focal signature; repair prompts
// echo the embedded candidate source back unchanged.
class CannedBackend : public llm::ChatBackend {
public:
    explicit CannedBackend(std::map<std::string, CannedReplies> replies)
        : replies_(std::move(replies)) {}
    llm::ChatReply complete(const llm::ChatRequest& req) override;

private:
    std::map<std::string, CannedReplies> replies_;
};

// Ten queries over the fixture project, with canned replies whose verified
// outcome is hand-labeled: six pass, four fail execution with marker "BOOM".
struct FixtureBatch {
    std::vector<corpus::Query> queries;
    std::map<std::string, CannedReplies> replies;
    int expected_passes = 6;
    std::string exec_fail_marker = "BOOM";
};

FixtureBatch make_fixture_batch(const std::filesystem::path& fixture_project_root);

} // namespace testgen::testsupport
