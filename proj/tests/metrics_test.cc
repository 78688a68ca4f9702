#include "testgen/metrics.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "testgen/rng.hpp"

using namespace testgen;
using metrics::OutcomeStat;

namespace {

OutcomeStat stat(bool passed, bool invokes, int ca, int ea, const std::string& focal,
                 const std::string& project = "p") {
    OutcomeStat s;
    s.passed = passed;
    s.invokes_focal = invokes;
    s.compile_attempts = ca;
    s.exec_attempts = ea;
    s.focal_key = focal;
    s.project = project;
    return s;
}

} // namespace

TEST(Accuracy, ThreeOfFive) {
    std::vector<OutcomeStat> outcomes = {
        stat(true, true, 0, 0, "a"),  stat(true, true, 1, 0, "b"), stat(true, true, 0, 1, "c"),
        stat(false, true, 3, 0, "d"), stat(true, false, 0, 0, "e"),
    };
    EXPECT_DOUBLE_EQ(metrics::accuracy(outcomes), 0.60);
}

TEST(Accuracy, PassedWithoutInvocationIsNotCorrect) {
    std::vector<OutcomeStat> outcomes = {stat(true, false, 0, 0, "a"),
                                         stat(true, false, 0, 0, "b")};
    EXPECT_DOUBLE_EQ(metrics::accuracy(outcomes), 0.0);
}

TEST(Accuracy, AllCompileFailedIsZero) {
    std::vector<OutcomeStat> outcomes = {stat(false, false, 3, 0, "a"),
                                         stat(false, false, 3, 0, "b")};
    EXPECT_DOUBLE_EQ(metrics::accuracy(outcomes), 0.0);
}

TEST(Accuracy, EmptyThrows) {
    EXPECT_THROW(metrics::accuracy({}), metrics::EmptyResultSet);
}

TEST(Coverage, TwoOfThreeFocals) {
    std::set<std::string> focals = {"A", "B", "C"};
    std::vector<OutcomeStat> outcomes = {stat(true, true, 0, 0, "A"), stat(true, true, 0, 0, "A"),
                                         stat(true, true, 0, 0, "B")};
    EXPECT_DOUBLE_EQ(metrics::focal_method_coverage(outcomes, focals), 2.0 / 3.0);
}

TEST(Coverage, NoCorrectOutcomesIsZero) {
    std::set<std::string> focals = {"A", "B"};
    std::vector<OutcomeStat> outcomes = {stat(false, true, 1, 0, "A")};
    EXPECT_DOUBLE_EQ(metrics::focal_method_coverage(outcomes, focals), 0.0);
}

TEST(Coverage, FullCoverageIsOne) {
    std::set<std::string> focals = {"A", "B"};
    std::vector<OutcomeStat> outcomes = {stat(true, true, 0, 0, "A"), stat(true, true, 0, 0, "B")};
    EXPECT_DOUBLE_EQ(metrics::focal_method_coverage(outcomes, focals), 1.0);
}

TEST(Coverage, EmptyFocalSetThrows) {
    EXPECT_THROW(metrics::focal_method_coverage({}, {}), metrics::EmptyResultSet);
}

TEST(AvgRepairAttempts, MeanOfSums) {
    std::vector<OutcomeStat> outcomes = {stat(true, true, 0, 0, "a"), stat(true, true, 1, 1, "b"),
                                         stat(true, true, 2, 0, "c")};
    EXPECT_NEAR(metrics::avg_repair_attempts(outcomes), 4.0 / 3.0, 1e-12);
}

TEST(AvgRepairAttempts, AllZero) {
    std::vector<OutcomeStat> outcomes = {stat(true, true, 0, 0, "a"), stat(false, true, 0, 0, "b")};
    EXPECT_DOUBLE_EQ(metrics::avg_repair_attempts(outcomes), 0.0);
}

TEST(AvgRepairAttempts, SingleOutcome) {
    std::vector<OutcomeStat> outcomes = {stat(false, true, 3, 2, "a")};
    EXPECT_DOUBLE_EQ(metrics::avg_repair_attempts(outcomes), 5.0);
}

TEST(Metrics, PermutationInvariant) {
    std::vector<OutcomeStat> outcomes = {
        stat(true, true, 0, 0, "A"),  stat(false, true, 1, 2, "B"), stat(true, false, 2, 0, "C"),
        stat(true, true, 0, 1, "B"),  stat(false, false, 3, 2, "A"),
    };
    std::set<std::string> focals = {"A", "B", "C"};
    double acc = metrics::accuracy(outcomes);
    double cov = metrics::focal_method_coverage(outcomes, focals);
    double avg = metrics::avg_repair_attempts(outcomes);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        fisher_yates(outcomes, rng);
        EXPECT_DOUBLE_EQ(metrics::accuracy(outcomes), acc);
        EXPECT_DOUBLE_EQ(metrics::focal_method_coverage(outcomes, focals), cov);
        EXPECT_DOUBLE_EQ(metrics::avg_repair_attempts(outcomes), avg);
    }
}

TEST(RenderReport, PaperStylePercent) {
    EXPECT_EQ(metrics::format_percent(0.7716), "77.16%");
    EXPECT_EQ(metrics::format_percent(0.0), "0.00%");
    EXPECT_EQ(metrics::format_percent(1.0), "100.00%");
    metrics::RunReport report;
    report.totals.accuracy = 0.7716;
    report.totals.focal_method_coverage = 0.8193;
    report.totals.n_queries = 5278;
    std::string table = metrics::render_report(report, metrics::ReportFormat::Table);
    EXPECT_NE(table.find("77.16%"), std::string::npos);
    EXPECT_NE(table.find("81.93%"), std::string::npos);
}

TEST(RenderReport, JsonRoundTripsLosslessly) {
    std::vector<OutcomeStat> outcomes = {stat(true, true, 1, 0, "A", "cli"),
                                         stat(false, true, 2, 1, "B", "csv"),
                                         stat(true, true, 0, 0, "C", "csv")};
    std::map<std::string, std::set<std::string>> focals = {{"cli", {"A"}}, {"csv", {"B", "C"}}};
    metrics::RunReport report =
        metrics::build_report(outcomes, focals, "cascaded", "random", "well_crafted");
    std::string j1 = metrics::render_report(report, metrics::ReportFormat::Json);
    metrics::RunReport parsed = metrics::parse_report_json(j1);
    std::string j2 = metrics::render_report(parsed, metrics::ReportFormat::Json);
    EXPECT_EQ(j1, j2);
    EXPECT_EQ(parsed.schema_version, 1);
    EXPECT_EQ(parsed.per_project.size(), 2u);
}

TEST(RenderReport, EmptyPerProjectStillRendersTotals) {
    metrics::RunReport report;
    report.totals.n_queries = 0;
    std::string table = metrics::render_report(report, metrics::ReportFormat::Table);
    EXPECT_NE(table.find("total"), std::string::npos);
}

TEST(BuildReport, PerProjectAndTotals) {
    std::vector<OutcomeStat> outcomes = {
        stat(true, true, 0, 0, "A", "cli"),  stat(false, true, 2, 2, "B", "cli"),
        stat(true, true, 1, 0, "C", "csv"),
    };
    std::map<std::string, std::set<std::string>> focals = {{"cli", {"A", "B"}}, {"csv", {"C"}}};
    metrics::RunReport report =
        metrics::build_report(outcomes, focals, "cascaded", "random", "well_crafted");
    EXPECT_DOUBLE_EQ(report.per_project["cli"].accuracy, 0.5);
    EXPECT_DOUBLE_EQ(report.per_project["cli"].focal_method_coverage, 0.5);
    EXPECT_DOUBLE_EQ(report.per_project["csv"].accuracy, 1.0);
    EXPECT_DOUBLE_EQ(report.totals.accuracy, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(report.totals.focal_method_coverage, 2.0 / 3.0);
    EXPECT_NEAR(report.totals.avg_repair_attempts, 5.0 / 3.0, 1e-12);
    EXPECT_EQ(report.totals.n_queries, 3);
}
