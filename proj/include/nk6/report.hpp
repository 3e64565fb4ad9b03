#pragma once

// Run configuration, run report and its three output formats.
//
// JSON layout (schema "nk6/1"):
//   { "schema", "config": {...}, "mu": {...}, "lambda": {...},
//     "scalar_curvature", "classification", "identities": [ {...}, ... ],
//     "pass", ["wall_seconds"] }
// Non-finite residuals are written as null and read back as NaN.

#include "nk6/verify.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nk6 {

inline constexpr const char* kSchema = "nk6/1";

/// Invalid user input: maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string backend = "s6";  // s6 | c3 | perturbed
    double delta = 0.1;          // perturbed only
    double radius = 1.0;         // s6 only
    int points = 20;
    std::uint64_t seed = 0;
    int draws = 10;
    DerivativeMode derivatives = DerivativeMode::automatic;
    FdSteps fd_steps{};
    ToleranceTiers tolerances{};
    std::vector<std::string> identities;  // registry ids and/or pde, einstein, classify
    std::string format = "human";         // json | csv | human
    bool serial = false;                  // reference path, no OpenMP
    bool timing = false;                  // include wall-clock in the report

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct RunReport {
    RunConfig config;
    std::vector<IdentityReport> identities;
    MuEstimate mu;
    LambdaEstimate lambda;
    double scalar_curvature = 0.0;
    std::string classification;
    std::optional<double> wall_seconds;
    bool pass = true;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Expands "all" and comma-separated lists; rejects unknown keys with ConfigError.
std::vector<std::string> parse_identity_filter(const std::string& spec);

/// Validates a config; throws ConfigError.
void validate(const RunConfig& config);

BackendPtr make_backend(const RunConfig& config);

/// Runs the selected identities.  Throws ConfigError for invalid input.
RunReport run(const RunConfig& config);

std::string emit(const RunReport& report, const std::string& format);
std::string emit_json(const RunReport& report);
std::string emit_csv(const RunReport& report);
std::string emit_human(const RunReport& report);

/// Inverse of emit_json; throws std::runtime_error on malformed input or a schema mismatch.
RunReport parse_json(const std::string& text);

std::string to_string(DerivativeMode mode);
DerivativeMode derivative_mode_from_string(const std::string& s);

}  // namespace nk6
