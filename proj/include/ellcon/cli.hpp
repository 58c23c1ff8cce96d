#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ellcon/curve.hpp"
#include "ellcon/fuchs.hpp"
#include "ellcon/suites.hpp"

namespace ellcon::cli {

struct ProblemInstance {
    cplx lambda{};
    std::vector<CurvePoint> points;
    std::optional<EigenData> nu;
    std::uint64_t seed = 0;
    Tolerances tolerances;

    Curve curve() const { return make_curve(lambda); }
    Divisor divisor() const { return Divisor::reduced(points); }
};

/// Throws ParseError on malformed JSON or unknown fields, ValidationError on a violated invariant.
ProblemInstance parse_instance(std::string_view text);

enum class Status { pass, fail, error };

struct Report {
    std::string command;
    std::string sub;
    Status status = Status::error;
    std::vector<Metric> metrics;
    nlohmann::ordered_json artifacts = nlohmann::ordered_json::object();
    std::string error;
};

struct Options {
    std::string sub;
    int trials = 100;
    std::optional<std::uint64_t> seed;
    /// Applied after the instance's own overrides.
    std::vector<std::pair<std::string, double>> tolerances;
};

const std::vector<std::string>& commands();

/// Runs one command. Library errors are folded into an error report rather than thrown.
Report execute(const std::string& command, const std::optional<ProblemInstance>& instance, const Options& opts);

Report error_report(const std::string& command, const std::string& sub, const std::string& message);

std::string to_json(const Report& report, bool timestamp);

/// One line per metric plus a status line, for standard error.
std::string summary(const Report& report);

int exit_code(const Report& report);

}  // namespace ellcon::cli
