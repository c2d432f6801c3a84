#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "itojump/levy.hpp"
#include "itojump/oracle.hpp"
#include "itojump/schemes.hpp"

namespace itojump {

/// Invalid or inconsistent study configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TruncationSettings {
    std::vector<double> epsilons;
    int level = 8;                             // fixed dyadic step of the study
    std::optional<double> reference_epsilon;   // defaults to min(epsilons) / 4
};

struct StudyConfig {
    explicit StudyConfig(LevyModel m) : model(std::move(m)) {}

    LevyModel model;
    std::optional<double> epsilon;  // truncate the model before simulating
    double b = 0.0;
    double sigma = 0.0;
    double F = 0.0;
    double G = 0.0;
    double y0 = 1.0;
    double horizon = 1.0;
    Scheme scheme = Scheme::euler;
    std::vector<int> levels;  // delta = T / 2^level
    int finest_level = 10;
    std::size_t paths = 1000;
    std::uint64_t seed = 1;
    OracleConfig oracle;
    TruncationSettings truncation;
    TermForm term_form = TermForm::exact;
    unsigned threads = 0;  // 0: hardware concurrency
    std::string config_hash;

    /// Model actually simulated by the convergence study.
    ActiveModel active_model() const;
    LinearCoefficients coefficients(const ActiveModel& active) const;

    /// Throws ConfigError for the convergence-study invariants
    /// (finest_level >= max level + 2, paths >= 2, oracle availability).
    void validate() const;
    /// Throws ConfigError when the truncation study does not apply.
    void validate_truncation() const;
};

LevyModel model_from_json(const nlohmann::json& j);

/// Parses and validates the schema documented in the README. Throws
/// ConfigError on missing or malformed fields.
StudyConfig config_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& file);

/// FNV-1a of the canonical (key-sorted, compact) dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);

}  // namespace itojump
