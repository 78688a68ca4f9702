// Live HTTP backends (chat completions + remote embedding). Kept in one
// translation unit so cpp-httplib is compiled once.

#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "testgen/llm.hpp"
#include "testgen/selection.hpp"

using nlohmann::json;

namespace testgen::llm {

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    if (config_.rate_limit_per_sec > 0) RateLimiter::shared().configure(config_.rate_limit_per_sec);
}

ChatReply HttpBackend::complete(const ChatRequest& req) {
    json msgs = json::array();
    for (const ChatMessage& m : req.messages)
        msgs.push_back(json{{"role", to_string(m.role)}, {"content", m.content}});
    json body{{"model", req.model_id},
              {"messages", msgs},
              {"max_tokens", req.max_output_tokens},
              {"temperature", req.temperature}};
    std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        if (attempt > 0) {
            int delay = config_.backoff_base_ms * (1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        RateLimiter::shared().acquire();
        httplib::Client client(config_.base_url);
        client.set_read_timeout(120, 0);
        httplib::Headers headers;
        if (!config_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + config_.api_key);
        auto res = client.Post(config_.path, headers, payload, "application/json");
        if (!res) {
            last_error = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw BackendUnavailable("HTTP " + std::to_string(res->status) + ": " + res->body);
        try {
            json j = json::parse(res->body);
            const json& choice = j.at("choices").at(0);
            ChatReply reply;
            reply.content = choice.at("message").at("content").get<std::string>();
            reply.finish_reason =
                finish_reason_from_string(choice.value("finish_reason", "stop"));
            if (j.contains("usage")) {
                reply.prompt_tokens = j["usage"].value("prompt_tokens", 0);
                reply.completion_tokens = j["usage"].value("completion_tokens", 0);
            }
            return reply;
        } catch (const json::exception& e) {
            throw BackendUnavailable(std::string("malformed completion response: ") + e.what());
        }
    }
    throw BackendUnavailable("chat backend unreachable after " +
                             std::to_string(config_.retries + 1) + " attempts: " + last_error);
}

} // namespace testgen::llm

namespace testgen::selection {

RemoteEmbedding::RemoteEmbedding(std::string endpoint, std::string path)
    : endpoint_(std::move(endpoint)), path_(std::move(path)) {}

EmbeddingVector RemoteEmbedding::embed(const std::string& text) {
    if (text.empty()) throw EmbeddingBackendError("empty input");
    httplib::Client client(endpoint_);
    client.set_read_timeout(120, 0);
    json body{{"input", text}};
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res || res->status != 200)
        throw EmbeddingBackendError("embedding backend unreachable: " + endpoint_);
    try {
        json j = json::parse(res->body);
        EmbeddingVector v;
        v.values = j.at("vector").get<std::vector<double>>();
        return v;
    } catch (const json::exception& e) {
        throw EmbeddingBackendError(std::string("malformed embedding response: ") + e.what());
    }
}

} // namespace testgen::selection
