#include "testgen/llm.hpp"

#include <fstream>
#include <thread>

#include <json.hpp>

using nlohmann::json;

namespace testgen::llm {

std::string to_string(Role role) {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

std::string to_string(FinishReason r) {
    switch (r) {
        case FinishReason::Stop: return "stop";
        case FinishReason::Length: return "length";
        case FinishReason::Error: return "error";
    }
    return "error";
}

FinishReason finish_reason_from_string(const std::string& s) {
    if (s == "stop") return FinishReason::Stop;
    if (s == "length") return FinishReason::Length;
    return FinishReason::Error;
}

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

json request_to_json(const ChatRequest& req) {
    json msgs = json::array();
    for (const ChatMessage& m : req.messages)
        msgs.push_back(json{{"content", m.content}, {"role", to_string(m.role)}});
    // nlohmann::json orders keys alphabetically, giving a canonical form
    return json{{"max_tokens", req.max_output_tokens},
                {"messages", msgs},
                {"model", req.model_id},
                {"temperature", req.temperature}};
}

json reply_to_json(const ChatReply& r) {
    return json{{"content", r.content},
                {"finish_reason", to_string(r.finish_reason)},
                {"usage", json{{"completion_tokens", r.completion_tokens},
                               {"prompt_tokens", r.prompt_tokens}}}};
}

ChatReply reply_from_json(const json& j) {
    ChatReply r;
    r.content = j.at("content").get<std::string>();
    r.finish_reason = finish_reason_from_string(j.at("finish_reason").get<std::string>());
    if (j.contains("usage")) {
        r.prompt_tokens = j["usage"].value("prompt_tokens", 0);
        r.completion_tokens = j["usage"].value("completion_tokens", 0);
    }
    return r;
}

} // namespace

std::string request_hash(const ChatRequest& req) {
    std::string canonical = request_to_json(req).dump();
    std::uint64_t h = fnv1a64(canonical);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

ChatReply complete(const ChatRequest& req, ChatBackend& backend) { return backend.complete(req); }

void RateLimiter::configure(double requests_per_sec) {
    std::lock_guard<std::mutex> lock(mu_);
    rate_ = requests_per_sec;
    tokens_ = requests_per_sec;
    last_ = std::chrono::steady_clock::now();
}

void RateLimiter::acquire() {
    while (true) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (rate_ <= 0.0) return;
            auto now = std::chrono::steady_clock::now();
            double elapsed = std::chrono::duration<double>(now - last_).count();
            last_ = now;
            tokens_ = std::min(rate_, tokens_ + elapsed * rate_);
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
}

RateLimiter& RateLimiter::shared() {
    static RateLimiter limiter;
    return limiter;
}

void record_cassette(const std::vector<CassetteEntry>& session,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CassetteError("cannot write cassette: " + path.string());
    for (const CassetteEntry& e : session) {
        json j{{"reply", reply_to_json(e.reply)}, {"request_hash", e.request_hash}};
        out << j.dump() << '\n';
    }
    if (!out) throw CassetteError("write failure: " + path.string());
}

std::vector<CassetteEntry> load_cassette(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CassetteError("cannot read cassette: " + path.string());
    std::vector<CassetteEntry> session;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            session.push_back(CassetteEntry{j.at("request_hash").get<std::string>(),
                                            reply_from_json(j.at("reply"))});
        } catch (const json::exception& e) {
            throw CassetteError(path.string() + ": corrupted line " + std::to_string(lineno) +
                                ": " + e.what());
        }
    }
    return session;
}

ReplayBackend::ReplayBackend(const std::filesystem::path& cassette) {
    for (const CassetteEntry& e : load_cassette(cassette)) replies_[e.request_hash] = e.reply;
}

ReplayBackend::ReplayBackend(const std::vector<CassetteEntry>& session) {
    for (const CassetteEntry& e : session) replies_[e.request_hash] = e.reply;
}

ChatReply ReplayBackend::complete(const ChatRequest& req) {
    std::string h = request_hash(req);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = replies_.find(h);
    if (it == replies_.end()) throw ReplayMiss("no recorded reply for request " + h);
    return it->second;
}

ChatReply RecordingBackend::complete(const ChatRequest& req) {
    ChatReply reply = inner_.complete(req);
    std::lock_guard<std::mutex> lock(mu_);
    session_.push_back(CassetteEntry{request_hash(req), reply});
    return reply;
}

} // namespace testgen::llm
