#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "testgen/error.hpp"

namespace testgen::llm {

class BackendUnavailable : public Error {
public:
    using Error::Error;
};
class ReplayMiss : public Error {
public:
    using Error::Error;
};
class CassetteError : public Error {
public:
    using Error::Error;
};

enum class Role { System, User, Assistant };
enum class FinishReason { Stop, Length, Error };

std::string to_string(Role role);
std::string to_string(FinishReason r);
FinishReason finish_reason_from_string(const std::string& s);

struct ChatMessage {
    Role role = Role::User;
    std::string content;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    std::string model_id;
    int max_output_tokens = 512;
    double temperature = 0.0;
};

struct ChatReply {
    std::string content;
    FinishReason finish_reason = FinishReason::Stop;
    int prompt_tokens = 0;
    int completion_tokens = 0;

    bool operator==(const ChatReply&) const = default;
};

// Canonical-JSON content hash; stable across runs and platforms.
std::string request_hash(const ChatRequest& req);

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatReply complete(const ChatRequest& req) = 0;
};

ChatReply complete(const ChatRequest& req, ChatBackend& backend);

// Process-wide token bucket; rate 0 disables limiting.
class RateLimiter {
public:
    void configure(double requests_per_sec);
    void acquire();
    static RateLimiter& shared();

private:
    std::mutex mu_;
    double rate_ = 0.0;
    double tokens_ = 0.0;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct HttpBackendConfig {
    std::string base_url;                      // e.g. http://localhost:8080
    std::string path = "/v1/chat/completions"; // chat-completions shape
    std::string api_key;                       // empty = no Authorization header
    int retries = 3;
    int backoff_base_ms = 250;
    double rate_limit_per_sec = 0.0;
};

class HttpBackend : public ChatBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);
    ChatReply complete(const ChatRequest& req) override;

private:
    HttpBackendConfig config_;
};

struct CassetteEntry {
    std::string request_hash;
    ChatReply reply;

    bool operator==(const CassetteEntry&) const = default;
};

void record_cassette(const std::vector<CassetteEntry>& session,
                     const std::filesystem::path& path);
std::vector<CassetteEntry> load_cassette(const std::filesystem::path& path);

class ReplayBackend : public ChatBackend {
public:
    explicit ReplayBackend(const std::filesystem::path& cassette);
    explicit ReplayBackend(const std::vector<CassetteEntry>& session);
    ChatReply complete(const ChatRequest& req) override;

private:
    std::map<std::string, ChatReply> replies_;
    std::mutex mu_;
};

// Wraps another backend and records every exchange.
class RecordingBackend : public ChatBackend {
public:
    explicit RecordingBackend(ChatBackend& inner) : inner_(inner) {}
    ChatReply complete(const ChatRequest& req) override;
    const std::vector<CassetteEntry>& session() const { return session_; }
    void save(const std::filesystem::path& path) const { record_cassette(session_, path); }

private:
    ChatBackend& inner_;
    std::vector<CassetteEntry> session_;
    std::mutex mu_;
};

} // namespace testgen::llm
