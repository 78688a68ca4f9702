#include "testgen/selection.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

#include "testgen/rng.hpp"

namespace testgen::selection {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// word runs plus individual punctuation characters
std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (std::isalnum(c) || c == '_') {
            std::size_t b = i;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_'))
                ++i;
            toks.push_back(text.substr(b, i - b));
            continue;
        }
        toks.push_back(text.substr(i, 1));
        ++i;
    }
    return toks;
}

} // namespace

std::size_t LocalHashEmbedding::bucket_of(const std::string& token) const {
    return static_cast<std::size_t>(fnv1a64(token) % dim_);
}

EmbeddingVector LocalHashEmbedding::embed(const std::string& text) {
    if (text.empty()) throw EmbeddingBackendError("empty input");
    std::vector<std::string> toks = tokenize(text);
    if (toks.empty()) throw EmbeddingBackendError("empty input");
    EmbeddingVector v;
    v.values.assign(dim_, 0.0);
    for (const std::string& t : toks) v.values[bucket_of(t)] += 1.0;
    double norm = std::sqrt(
        std::inner_product(v.values.begin(), v.values.end(), v.values.begin(), 0.0));
    for (double& x : v.values) x /= norm;
    return v;
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.dim() != v.dim())
        throw DimensionError("dimension mismatch: " + std::to_string(u.dim()) + " vs " +
                             std::to_string(v.dim()));
    double dot = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < u.dim(); ++i) {
        dot += u.values[i] * v.values[i];
        nu += u.values[i] * u.values[i];
        nv += v.values[i] * v.values[i];
    }
    if (nu == 0.0 || nv == 0.0) throw ZeroNormError("zero-norm vector");
    double c = dot / (std::sqrt(nu) * std::sqrt(nv));
    return std::clamp(c, -1.0, 1.0);
}

namespace {

double sq_dist(const EmbeddingVector& a, const EmbeddingVector& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double x = a.values[i] - b.values[i];
        d += x * x;
    }
    return d;
}

} // namespace

std::vector<int> cluster(const std::vector<EmbeddingVector>& embeddings, int k,
                         std::uint64_t seed) {
    const std::size_t n = embeddings.size();
    if (n == 0) return {};
    std::set<std::vector<double>> distinct;
    for (const EmbeddingVector& e : embeddings) distinct.insert(e.values);
    const std::size_t ek = std::min<std::size_t>(std::max(k, 1), distinct.size());

    std::mt19937_64 rng(seed);
    std::vector<EmbeddingVector> centers;
    centers.reserve(ek);
    centers.push_back(embeddings[rng_below(rng, n)]);
    std::vector<double> weight(n);
    while (centers.size() < ek) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = sq_dist(embeddings[i], centers[0]);
            for (std::size_t c = 1; c < centers.size(); ++c)
                best = std::min(best, sq_dist(embeddings[i], centers[c]));
            weight[i] = best;
            total += best;
        }
        if (total == 0) break; // all remaining points coincide with a center
        double r = rng_unit(rng) * total;
        double cum = 0;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            cum += weight[i];
            if (cum > r) {
                pick = i;
                break;
            }
        }
        centers.push_back(embeddings[pick]);
    }

    std::vector<int> assign(n, 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(embeddings[i], centers[0]);
            for (std::size_t c = 1; c < centers.size(); ++c) {
                double d = sq_dist(embeddings[i], centers[c]);
                if (d < best_d) { // strict: ties keep the lowest index
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
        std::vector<std::vector<double>> sums(centers.size(),
                                              std::vector<double>(embeddings[0].dim(), 0.0));
        std::vector<std::size_t> counts(centers.size(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[static_cast<std::size_t>(assign[i])];
            for (std::size_t d = 0; d < embeddings[i].dim(); ++d)
                sums[static_cast<std::size_t>(assign[i])][d] += embeddings[i].values[d];
        }
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (counts[c] == 0) continue; // empty cluster keeps its center
            for (std::size_t d = 0; d < centers[c].dim(); ++d)
                centers[c].values[d] = sums[c][d] / static_cast<double>(counts[c]);
        }
        if (!changed) break;
    }
    return assign;
}

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Random: return "random";
        case StrategyKind::Ascending: return "ascending";
        case StrategyKind::Descending: return "descending";
        case StrategyKind::TotallyRandom: return "totally_random";
    }
    return "random";
}

StrategyKind strategy_from_string(const std::string& s) {
    if (s == "random") return StrategyKind::Random;
    if (s == "ascending") return StrategyKind::Ascending;
    if (s == "descending") return StrategyKind::Descending;
    if (s == "totally_random") return StrategyKind::TotallyRandom;
    throw Error("unknown selection strategy: " + s);
}

SelectedDemos select_demos(const std::string& query_text, const corpus::DemoPool& pool, int k,
                           SelectionStrategy strategy, EmbeddingBackend& backend,
                           const std::function<std::string(const corpus::Demo&)>& embed_text_fn) {
    if (pool.empty()) throw EmptyPoolError("demo pool is empty");
    SelectedDemos out;
    out.strategy = strategy;
    if (k <= 0) return out;

    const std::size_t n = pool.size();
    EmbeddingVector query_emb = backend.embed(query_text);
    std::vector<EmbeddingVector> embs;
    embs.reserve(n);
    std::vector<double> sims(n);
    for (std::size_t i = 0; i < n; ++i) {
        embs.push_back(backend.embed(embed_text_fn(pool.entries[i])));
        sims[i] = cosine(query_emb, embs[i]);
    }

    std::vector<std::size_t> selected;
    if (n <= static_cast<std::size_t>(k)) {
        selected.resize(n);
        std::iota(selected.begin(), selected.end(), 0);
    } else if (strategy.kind == StrategyKind::TotallyRandom) {
        std::mt19937_64 rng(mix_seed(strategy.seed, 2));
        selected = sample_without_replacement(n, static_cast<std::size_t>(k), rng);
    } else {
        std::vector<int> assign = cluster(embs, k, mix_seed(strategy.seed, 0));
        int clusters = 1 + *std::max_element(assign.begin(), assign.end());
        for (int c = 0; c < clusters; ++c) {
            std::size_t best = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (assign[i] != c) continue;
                if (best == n || sims[i] > sims[best]) best = i;
            }
            if (best != n) selected.push_back(best);
        }
    }

    switch (strategy.kind) {
        case StrategyKind::Random:
        case StrategyKind::TotallyRandom: {
            std::mt19937_64 rng(mix_seed(strategy.seed, 1));
            fisher_yates(selected, rng);
            break;
        }
        case StrategyKind::Ascending:
        case StrategyKind::Descending: {
            std::stable_sort(selected.begin(), selected.end(),
                             [&](std::size_t a, std::size_t b) { return sims[a] < sims[b]; });
            if (strategy.kind == StrategyKind::Descending)
                std::reverse(selected.begin(), selected.end());
            break;
        }
    }

    for (std::size_t i : selected) {
        out.demos.push_back(pool.entries[i]);
        out.similarities.push_back(sims[i]);
    }
    return out;
}

} // namespace testgen::selection
