#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "modlie/report.hpp"

namespace modlie {

enum class TableId { CartanSurvey, GapSeries, NewtypeSurvey };
TableId parse_table(const std::string& s);
const char* to_string(TableId t) noexcept;

enum class CellStatus { Pass, Fail, Skipped };
const char* to_string(CellStatus s) noexcept;

struct TableCell {
    std::string column;
    std::string expected;
    std::string computed;
    CellStatus status = CellStatus::Skipped;
};

struct TableRow {
    std::string algebra;
    std::string conditions;
    std::string citation;
    std::vector<TableCell> cells;
    /// Fail if any cell fails, Skipped if nothing was computed.
    CellStatus status = CellStatus::Skipped;
    std::string note;
    std::optional<OutReport> report;
};

struct TableResult {
    TableId table;
    std::vector<TableRow> rows;
    std::size_t count(CellStatus s) const;
    bool any_fail() const { return count(CellStatus::Fail) > 0; }
};

struct ReproduceOptions {
    /// Adds the 241-dimensional H(2;(2,3)) row to gap_series.
    bool include_large = false;
    DerivationOptions der;
    ResourceLimits limits;
    std::size_t trials = kDefaultProbeTrials;
    std::uint64_t seed = kDefaultProbeSeed;
};

/// Recomputes every row that has a construction here and compares it with the
/// embedded reference values; rows needing unavailable constructions are Skipped.
TableResult reproduce(TableId table, const ReproduceOptions& opts = {});

/// Json embeds each computed row's report (telemetry included only if asked).
std::string render(const TableResult& t, Format f, bool include_telemetry = true);

}  // namespace modlie
