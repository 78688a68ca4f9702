#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "testgen/corpus.hpp"
#include "testgen/error.hpp"

namespace testgen::selection {

class EmbeddingBackendError : public Error {
public:
    using Error::Error;
};
class DimensionError : public Error {
public:
    using Error::Error;
};
class ZeroNormError : public Error {
public:
    using Error::Error;
};
class EmptyPoolError : public Error {
public:
    using Error::Error;
};

struct EmbeddingVector {
    std::vector<double> values;
    std::size_t dim() const { return values.size(); }
};

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual EmbeddingVector embed(const std::string& text) = 0;
};

// Offline default: hashed-token frequency vector, L2-normalized.
class LocalHashEmbedding : public EmbeddingBackend {
public:
    explicit LocalHashEmbedding(std::size_t dim = 512) : dim_(dim) {}
    EmbeddingVector embed(const std::string& text) override;
    std::size_t bucket_of(const std::string& token) const; // exposed for tests

private:
    std::size_t dim_;
};

// JSON POST {"input": text} -> {"vector": [..]}
class RemoteEmbedding : public EmbeddingBackend {
public:
    RemoteEmbedding(std::string endpoint, std::string path = "/embed");
    EmbeddingVector embed(const std::string& text) override;

private:
    std::string endpoint_;
    std::string path_;
};

double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

// Seeded k-means (k-means++ style init, max 100 iterations, lowest-index
// tie-breaks). Effective k clamps to the number of distinct points.
std::vector<int> cluster(const std::vector<EmbeddingVector>& embeddings, int k,
                         std::uint64_t seed);

enum class StrategyKind { Random, Ascending, Descending, TotallyRandom };

std::string to_string(StrategyKind kind);
StrategyKind strategy_from_string(const std::string& s);

struct SelectionStrategy {
    StrategyKind kind = StrategyKind::Random;
    std::uint64_t seed = 0;
};

struct SelectedDemos {
    std::vector<corpus::Demo> demos;
    std::vector<double> similarities; // parallel to demos
    SelectionStrategy strategy;
};

// `embed_text_fn` renders each demo the way the prompt layer shows it;
// `query_text` is the query rendered the same way (phase-specific).
SelectedDemos select_demos(const std::string& query_text, const corpus::DemoPool& pool, int k,
                           SelectionStrategy strategy, EmbeddingBackend& backend,
                           const std::function<std::string(const corpus::Demo&)>& embed_text_fn);

} // namespace testgen::selection
