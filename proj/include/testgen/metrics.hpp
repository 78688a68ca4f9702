#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "testgen/error.hpp"

namespace testgen::metrics {

class EmptyResultSet : public Error {
public:
    using Error::Error;
};

// Flat view of one terminal verification outcome, ready for aggregation.
struct OutcomeStat {
    bool passed = false;
    bool invokes_focal = false;
    int compile_attempts = 0;
    int exec_attempts = 0;
    std::string focal_key; // e.g. "CSVPrinter#void printRecord(Object...)"
    std::string project;
};

inline bool is_correct(const OutcomeStat& o) { return o.passed && o.invokes_focal; }

double accuracy(const std::vector<OutcomeStat>& outcomes);
double focal_method_coverage(const std::vector<OutcomeStat>& outcomes,
                             const std::set<std::string>& focal_methods);
double avg_repair_attempts(const std::vector<OutcomeStat>& outcomes);

struct ProjectMetrics {
    double accuracy = 0.0;
    double focal_method_coverage = 0.0;
    double avg_repair_attempts = 0.0;
    int n_queries = 0;
};

struct RunReport {
    int schema_version = 1;
    std::string mode;
    std::string strategy;
    std::string variant;
    std::map<std::string, ProjectMetrics> per_project;
    ProjectMetrics totals;
};

RunReport build_report(const std::vector<OutcomeStat>& outcomes,
                       const std::map<std::string, std::set<std::string>>& focal_sets,
                       const std::string& mode, const std::string& strategy,
                       const std::string& variant);

enum class ReportFormat { Table, Json };

std::string format_percent(double fraction); // 0.7716 -> "77.16%"
std::string render_report(const RunReport& report, ReportFormat format);
RunReport parse_report_json(const std::string& text);

} // namespace testgen::metrics
