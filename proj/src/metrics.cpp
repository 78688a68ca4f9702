#include "testgen/metrics.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace testgen::metrics {

double accuracy(const std::vector<OutcomeStat>& outcomes) {
    if (outcomes.empty()) throw EmptyResultSet("no outcomes");
    std::size_t correct = 0;
    for (const OutcomeStat& o : outcomes)
        if (is_correct(o)) ++correct;
    return static_cast<double>(correct) / static_cast<double>(outcomes.size());
}

double focal_method_coverage(const std::vector<OutcomeStat>& outcomes,
                             const std::set<std::string>& focal_methods) {
    if (focal_methods.empty()) throw EmptyResultSet("no focal methods");
    for (const OutcomeStat& o : outcomes)
        if (!focal_methods.count(o.focal_key))
            throw Error("outcome targets unknown focal method: " + o.focal_key);
    std::set<std::string> covered;
    for (const OutcomeStat& o : outcomes)
        if (is_correct(o)) covered.insert(o.focal_key);
    return static_cast<double>(covered.size()) / static_cast<double>(focal_methods.size());
}

double avg_repair_attempts(const std::vector<OutcomeStat>& outcomes) {
    if (outcomes.empty()) throw EmptyResultSet("no outcomes");
    double total = 0;
    for (const OutcomeStat& o : outcomes) total += o.compile_attempts + o.exec_attempts;
    return total / static_cast<double>(outcomes.size());
}

RunReport build_report(const std::vector<OutcomeStat>& outcomes,
                       const std::map<std::string, std::set<std::string>>& focal_sets,
                       const std::string& mode, const std::string& strategy,
                       const std::string& variant) {
    RunReport report;
    report.mode = mode;
    report.strategy = strategy;
    report.variant = variant;

    std::map<std::string, std::vector<OutcomeStat>> by_project;
    for (const OutcomeStat& o : outcomes) by_project[o.project].push_back(o);

    for (const auto& [project, stats] : by_project) {
        ProjectMetrics m;
        m.n_queries = static_cast<int>(stats.size());
        m.accuracy = accuracy(stats);
        m.avg_repair_attempts = avg_repair_attempts(stats);
        auto it = focal_sets.find(project);
        if (it != focal_sets.end() && !it->second.empty())
            m.focal_method_coverage = focal_method_coverage(stats, it->second);
        report.per_project[project] = m;
    }

    if (!outcomes.empty()) {
        report.totals.n_queries = static_cast<int>(outcomes.size());
        report.totals.accuracy = accuracy(outcomes);
        report.totals.avg_repair_attempts = avg_repair_attempts(outcomes);
        std::set<std::string> all_focals;
        for (const auto& [project, focals] : focal_sets)
            all_focals.insert(focals.begin(), focals.end());
        if (!all_focals.empty())
            report.totals.focal_method_coverage = focal_method_coverage(outcomes, all_focals);
    }
    return report;
}

std::string format_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", fraction * 100.0);
    return buf;
}

namespace {

json metrics_to_json(const ProjectMetrics& m) {
    return json{{"accuracy", m.accuracy},
                {"avg_repair_attempts", m.avg_repair_attempts},
                {"focal_method_coverage", m.focal_method_coverage},
                {"n_queries", m.n_queries}};
}

ProjectMetrics metrics_from_json(const json& j) {
    ProjectMetrics m;
    m.accuracy = j.at("accuracy").get<double>();
    m.avg_repair_attempts = j.at("avg_repair_attempts").get<double>();
    m.focal_method_coverage = j.at("focal_method_coverage").get<double>();
    m.n_queries = j.at("n_queries").get<int>();
    return m;
}

} // namespace

std::string render_report(const RunReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        json per_project = json::object();
        for (const auto& [project, m] : report.per_project)
            per_project[project] = metrics_to_json(m);
        json j{{"mode", report.mode},
               {"per_project", per_project},
               {"schema_version", report.schema_version},
               {"strategy", report.strategy},
               {"totals", metrics_to_json(report.totals)},
               {"variant", report.variant}};
        return j.dump(2) + "\n";
    }

    std::ostringstream out;
    out << std::left << std::setw(20) << "project" << std::right << std::setw(9) << "queries"
        << std::setw(11) << "accuracy" << std::setw(16) << "focal_coverage" << std::setw(13)
        << "avg_repairs" << '\n';
    auto row = [&](const std::string& name, const ProjectMetrics& m) {
        char repairs[32];
        std::snprintf(repairs, sizeof(repairs), "%.3f", m.avg_repair_attempts);
        out << std::left << std::setw(20) << name << std::right << std::setw(9) << m.n_queries
            << std::setw(11) << format_percent(m.accuracy) << std::setw(16)
            << format_percent(m.focal_method_coverage) << std::setw(13) << repairs << '\n';
    };
    for (const auto& [project, m] : report.per_project) row(project, m);
    row("total", report.totals);
    return out.str();
}

RunReport parse_report_json(const std::string& text) {
    try {
        json j = json::parse(text);
        RunReport report;
        report.schema_version = j.at("schema_version").get<int>();
        report.mode = j.at("mode").get<std::string>();
        report.strategy = j.at("strategy").get<std::string>();
        report.variant = j.at("variant").get<std::string>();
        report.totals = metrics_from_json(j.at("totals"));
        for (const auto& [project, m] : j.at("per_project").items())
            report.per_project[project] = metrics_from_json(m);
        return report;
    } catch (const json::exception& e) {
        throw Error(std::string("bad report document: ") + e.what());
    }
}

} // namespace testgen::metrics
