#include "testgen/config.hpp"

#include <gtest/gtest.h>

using namespace testgen;

TEST(Config, DefaultsMatchPaperSettings) {
    config::RunConfig c = config::parse_config("{}");
    EXPECT_EQ(c.shots, 5);
    EXPECT_EQ(c.token_budget, 4096);
    EXPECT_EQ(c.repair.compile_max, 3);
    EXPECT_EQ(c.repair.exec_max, 2);
    EXPECT_EQ(c.llm.model, "gpt-3.5-turbo");
    EXPECT_DOUBLE_EQ(c.llm.temperature, 0.0);
    EXPECT_EQ(c.llm.retries, 3);
    EXPECT_EQ(c.embedding.backend, "local-hash");
    EXPECT_EQ(c.embedding.dim, 512);
    EXPECT_EQ(c.mode, prompting::GenerationMode::Cascaded);
    EXPECT_EQ(c.variant, prompting::InstructionVariant::WellCrafted);
}

TEST(Config, RoundTripIsStable) {
    std::string doc = R"({
        "mode": "direct",
        "strategy": {"kind": "ascending", "seed": 99},
        "variant": "vanilla",
        "shots": 3,
        "token_budget": 2048,
        "repair": {"compile_max": 4, "exec_max": 3},
        "llm": {"backend": "live", "base_url": "http://localhost:1234", "model": "m"},
        "toolchain": {"kind": "fake", "exec_fail_marker": "BOOM"}
    })";
    config::RunConfig c1 = config::parse_config(doc);
    std::string s1 = config::serialize_config(c1);
    config::RunConfig c2 = config::parse_config(s1);
    std::string s2 = config::serialize_config(c2);
    EXPECT_EQ(s1, s2);
    EXPECT_EQ(c2.mode, prompting::GenerationMode::Direct);
    EXPECT_EQ(c2.strategy, selection::StrategyKind::Ascending);
    EXPECT_EQ(c2.seed, 99u);
    EXPECT_EQ(c2.toolchain.exec_fail_marker, "BOOM");
}

TEST(Config, TemplateTableOverridable) {
    std::string doc = R"({
        "templates": {
            "role": "You are a terse Java testing bot",
            "end_marker": "DONE_NOW"
        }
    })";
    config::RunConfig c = config::parse_config(doc);
    EXPECT_EQ(c.templates.role, "You are a terse Java testing bot");
    EXPECT_EQ(c.templates.end_marker, "DONE_NOW");
    // untouched entries keep their defaults
    EXPECT_EQ(c.templates.prefix_task_vanilla, "Generate test input using the following Java code");

    corpus::Query q;
    q.class_name = "A";
    q.constructor_signature = "A()";
    q.focal_method_signature = "void m()";
    auto bundle = prompting::render_prefix_prompt(q, {}, prompting::InstructionVariant::Vanilla,
                                                  c.templates);
    EXPECT_EQ(bundle.role_text, "You are a terse Java testing bot");
}

TEST(Config, RejectsBadValues) {
    EXPECT_THROW(config::parse_config("{\"shots\": -1}"), config::ConfigError);
    EXPECT_THROW(config::parse_config("{\"token_budget\": 0}"), config::ConfigError);
    EXPECT_THROW(config::parse_config("not json"), config::ConfigError);
    EXPECT_THROW(config::parse_config("{\"mode\": \"sideways\"}"), Error);
}
