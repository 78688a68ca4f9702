#include "testgen/selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "testgen/rng.hpp"

using namespace testgen;
using selection::EmbeddingVector;
using selection::SelectionStrategy;
using selection::StrategyKind;

namespace {

EmbeddingVector vec(std::initializer_list<double> values) {
    EmbeddingVector v;
    v.values = values;
    return v;
}

// pool of single-token demos; tokens chosen hash-distinct under dim 512
corpus::DemoPool make_pool(const std::vector<std::string>& prefixes) {
    corpus::DemoPool pool;
    pool.kind = corpus::PoolKind::Prefix;
    for (std::size_t i = 0; i < prefixes.size(); ++i) {
        corpus::Demo d;
        d.kind = corpus::PoolKind::Prefix;
        d.focal_class = "C" + std::to_string(i);
        d.constructor_params = "C" + std::to_string(i) + "()";
        d.focal_method_signature = "void m" + std::to_string(i) + "()";
        d.test_name = "test" + std::to_string(i);
        d.test_prefix = prefixes[i];
        pool.entries.push_back(d);
    }
    return pool;
}

std::string embed_text(const corpus::Demo& d) { return d.test_prefix; }

} // namespace

TEST(Embed, DeterministicPerText) {
    selection::LocalHashEmbedding backend;
    auto a = backend.embed("CSVPrinter printer = new CSVPrinter();");
    auto b = backend.embed("CSVPrinter printer = new CSVPrinter();");
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.dim(), 512u);
}

TEST(Embed, EmptyInputThrows) {
    selection::LocalHashEmbedding backend;
    EXPECT_THROW(backend.embed(""), selection::EmbeddingBackendError);
    EXPECT_THROW(backend.embed("   "), selection::EmbeddingBackendError);
}

TEST(Embed, DisjointTokensAreOrthogonal) {
    selection::LocalHashEmbedding backend;
    // verify the chosen tokens land in different buckets, then the cosine
    // must be exactly zero
    ASSERT_NE(backend.bucket_of("alpha"), backend.bucket_of("omega"));
    auto u = backend.embed("alpha");
    auto v = backend.embed("omega");
    EXPECT_EQ(selection::cosine(u, v), 0.0);
}

TEST(Cosine, IdentityIsOne) {
    auto u = vec({1.0, 2.0, 3.0});
    EXPECT_NEAR(selection::cosine(u, u), 1.0, 1e-12);
}

TEST(Cosine, OrthogonalIsZero) {
    EXPECT_NEAR(selection::cosine(vec({1.0, 0.0}), vec({0.0, 1.0})), 0.0, 1e-12);
}

TEST(Cosine, KnownValue) {
    // (1,0)·(1,1)/(1*sqrt(2)) = 0.7071067811865475
    EXPECT_NEAR(selection::cosine(vec({1.0, 0.0}), vec({1.0, 1.0})), 0.70710678, 1e-8);
    EXPECT_NEAR(selection::cosine(vec({1.0, 0.0}), vec({1.0, 1.0})), 1.0 / std::sqrt(2.0), 1e-9);
}

TEST(Cosine, DimensionMismatchThrows) {
    EXPECT_THROW(selection::cosine(vec({1.0}), vec({1.0, 0.0})), selection::DimensionError);
}

TEST(Cosine, ZeroNormThrows) {
    EXPECT_THROW(selection::cosine(vec({0.0, 0.0}), vec({1.0, 0.0})), selection::ZeroNormError);
}

TEST(Cosine, SymmetryAndScalingProperties) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        EmbeddingVector u, v;
        for (int i = 0; i < 8; ++i) {
            u.values.push_back(rng_unit(rng) * 2 - 1);
            v.values.push_back(rng_unit(rng) * 2 - 1);
        }
        double c1 = selection::cosine(u, v);
        double c2 = selection::cosine(v, u);
        EXPECT_NEAR(c1, c2, 1e-12);
        double a = rng_unit(rng) * 5 + 0.1;
        EmbeddingVector au = u;
        for (double& x : au.values) x *= a;
        EXPECT_NEAR(selection::cosine(au, v), c1, 1e-9);
        EXPECT_GE(c1, -1.0);
        EXPECT_LE(c1, 1.0);
    }
}

TEST(Cluster, DistantPointsGetSingletons) {
    std::vector<EmbeddingVector> points;
    for (int i = 0; i < 5; ++i) {
        EmbeddingVector v;
        v.values.assign(5, 0.0);
        v.values[static_cast<std::size_t>(i)] = 100.0;
        points.push_back(v);
    }
    auto assign = selection::cluster(points, 5, 1);
    std::set<int> ids(assign.begin(), assign.end());
    EXPECT_EQ(ids.size(), 5u);
}

TEST(Cluster, ClampsToDistinctCount) {
    std::vector<EmbeddingVector> points = {vec({1.0, 0.0}), vec({0.0, 1.0}), vec({1.0, 1.0})};
    auto assign = selection::cluster(points, 5, 1);
    std::set<int> ids(assign.begin(), assign.end());
    EXPECT_EQ(ids.size(), 3u);
}

TEST(Cluster, SeedReproducible) {
    std::mt19937_64 rng(99);
    std::vector<EmbeddingVector> points;
    for (int i = 0; i < 40; ++i) {
        EmbeddingVector v;
        for (int d = 0; d < 6; ++d) v.values.push_back(rng_unit(rng));
        points.push_back(v);
    }
    auto a = selection::cluster(points, 5, 1234);
    auto b = selection::cluster(points, 5, 1234);
    EXPECT_EQ(a, b);
}

TEST(SelectDemos, AscendingSimilaritiesAreMonotone) {
    selection::LocalHashEmbedding backend;
    auto pool = make_pool({"alpha beta", "gamma delta", "epsilon zeta", "eta theta", "iota kappa",
                           "lambda mu", "nu xi", "omicron pi"});
    auto sel = selection::select_demos("alpha gamma epsilon", pool, 5,
                                       {StrategyKind::Ascending, 42}, backend, embed_text);
    for (std::size_t i = 1; i < sel.similarities.size(); ++i)
        EXPECT_LE(sel.similarities[i - 1], sel.similarities[i]);
}

TEST(SelectDemos, PoolSmallerThanKReturnsAll) {
    selection::LocalHashEmbedding backend;
    auto pool = make_pool({"alpha", "omega"});
    auto sel = selection::select_demos("alpha", pool, 5, {StrategyKind::Random, 42}, backend,
                                       embed_text);
    EXPECT_EQ(sel.demos.size(), 2u);
}

TEST(SelectDemos, AscendingAndDescendingAreReversedSameSet) {
    selection::LocalHashEmbedding backend;
    auto pool = make_pool({"alpha beta", "gamma delta", "epsilon zeta", "eta theta", "iota kappa",
                           "lambda mu", "nu xi", "omicron pi", "rho sigma", "tau upsilon"});
    auto asc = selection::select_demos("alpha gamma epsilon eta", pool, 5,
                                       {StrategyKind::Ascending, 7}, backend, embed_text);
    auto desc = selection::select_demos("alpha gamma epsilon eta", pool, 5,
                                        {StrategyKind::Descending, 7}, backend, embed_text);
    ASSERT_EQ(asc.demos.size(), desc.demos.size());
    std::multiset<std::string> a, d;
    for (const auto& x : asc.demos) a.insert(x.test_prefix);
    for (const auto& x : desc.demos) d.insert(x.test_prefix);
    EXPECT_EQ(a, d);
    for (std::size_t i = 0; i < asc.demos.size(); ++i)
        EXPECT_EQ(asc.demos[i].test_prefix,
                  desc.demos[desc.demos.size() - 1 - i].test_prefix);
}

TEST(SelectDemos, TotallyRandomReproducible) {
    selection::LocalHashEmbedding backend;
    auto pool = make_pool({"alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"});
    auto s1 = selection::select_demos("alpha", pool, 3, {StrategyKind::TotallyRandom, 5}, backend,
                                      embed_text);
    auto s2 = selection::select_demos("alpha", pool, 3, {StrategyKind::TotallyRandom, 5}, backend,
                                      embed_text);
    ASSERT_EQ(s1.demos.size(), 3u);
    for (std::size_t i = 0; i < s1.demos.size(); ++i)
        EXPECT_EQ(s1.demos[i].test_prefix, s2.demos[i].test_prefix);
}

TEST(SelectDemos, EmptyPoolThrows) {
    selection::LocalHashEmbedding backend;
    corpus::DemoPool pool;
    EXPECT_THROW(selection::select_demos("alpha", pool, 5, {StrategyKind::Random, 1}, backend,
                                         embed_text),
                 selection::EmptyPoolError);
}

TEST(SelectDemos, SelectedSetIdenticalAcrossOrderedStrategies) {
    selection::LocalHashEmbedding backend;
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::string> prefixes;
        std::size_t n = 3 + rng_below(rng, 12);
        for (std::size_t i = 0; i < n; ++i) {
            std::string p;
            for (int w = 0; w < 3; ++w)
                p += "tok" + std::to_string(rng_below(rng, 40)) + " ";
            prefixes.push_back(p);
        }
        auto pool = make_pool(prefixes);
        std::uint64_t seed = rng();
        std::multiset<std::string> sets[3];
        StrategyKind kinds[3] = {StrategyKind::Random, StrategyKind::Ascending,
                                 StrategyKind::Descending};
        for (int s = 0; s < 3; ++s) {
            auto sel = selection::select_demos("tok1 tok2 tok3", pool, 5, {kinds[s], seed},
                                               backend, embed_text);
            for (const auto& d : sel.demos) sets[s].insert(d.test_prefix);
        }
        EXPECT_EQ(sets[0], sets[1]);
        EXPECT_EQ(sets[1], sets[2]);
    }
}
