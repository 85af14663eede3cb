#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modlie/derout.hpp"
#include "modlie/hamiltonian.hpp"
#include "modlie/lie_algebra.hpp"
#include "modlie/resources.hpp"

namespace modlie {

inline constexpr int kReportSchemaVersion = 1;

struct GeneratorCheck {
    std::string name;
    bool passed = false;
    std::string detail;
    friend bool operator==(const GeneratorCheck&, const GeneratorCheck&) = default;
};

struct Telemetry {
    double seconds = 0.0;
    std::uint64_t peak_bytes = 0;
    unsigned threads = 1;
    std::size_t blocks = 0;
    std::uint64_t equations = 0;
    bool cache_hit = false;
    friend bool operator==(const Telemetry&, const Telemetry&) = default;
};

/// Result of analysing one algebra: dimensions, the derived series of Out,
/// solvability, the simplicity probe of Out, and named-derivation checks.
struct OutReport {
    int schema_version = kReportSchemaVersion;
    std::string family = "custom";
    std::vector<std::pair<std::string, std::string>> params;
    unsigned p = 0;
    std::size_t dim_g = 0, dim_der = 0, dim_inn = 0, dim_out = 0;
    /// Derived series of g itself; (d, d) means g is perfect.
    std::vector<std::size_t> g_derived_series;
    std::vector<std::size_t> out_derived_series;
    bool solvable = false;
    std::optional<std::size_t> derived_length;
    Simplicity simplicity = Simplicity::Skipped;
    std::string simplicity_scope = "over GF(p)";
    std::size_t probe_trials = kDefaultProbeTrials;
    std::uint64_t seed = kDefaultProbeSeed;
    std::vector<GeneratorCheck> generator_checks;
    bool complete = true;
    std::string incomplete_reason;
    std::string code_version = kCodeVersion;
    std::string complement_rule = kComplementRule;
    Telemetry telemetry;

    bool checks_passed() const;
    friend bool operator==(const OutReport&, const OutReport&) = default;
};

struct ReportOptions {
    DerivationOptions der;
    ResourceLimits limits;
    bool validate = true;
    bool probe = true;
    std::size_t trials = kDefaultProbeTrials;
    std::uint64_t seed = kDefaultProbeSeed;
    std::string family = "custom";
    std::vector<std::pair<std::string, std::string>> params;
    /// When set (and it describes the analysed algebra), named derivations are checked.
    const HamiltonianAlgebra* hamiltonian = nullptr;
};

/// Throws ValidationError when the Jacobi identity fails. A crossed resource
/// ceiling yields a report with complete = false instead of an exception.
OutReport zassenhaus_report(const LieAlgebra& l, const ReportOptions& opts = {});

/// Named-derivation checks that apply to this Hamiltonian algebra at p = 3:
/// the sl2 triple for n_1 = 1, the translation pair for n_1 = 1 < n_2, and
/// the A/B/C/D family for r > 1 or 1 < n_1 <= n_2.
std::vector<GeneratorCheck> hamiltonian_generator_checks(const HamiltonianAlgebra& g, const DerivationAlgebra& der,
                                                         const OutAlgebra& out);

enum class Format { Json, Csv, Text };
Format parse_format(const std::string& s);

/// Telemetry sits in its own object so everything else is reproducible byte for byte.
std::string render(const OutReport& r, Format f, bool include_telemetry = true);
std::string csv_header();
OutReport report_from_json(const std::string& text);

}  // namespace modlie
