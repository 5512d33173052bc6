#pragma once

#include "gomec/montecarlo.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gomec::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Column names after the leading sweep-parameter column (absent for `run`).
const std::vector<std::string>& StatsColumns();

/// Last path component, used as the header of the parameter column.
std::string ParameterColumn(const std::string& path);

std::string CsvHeader(const std::string& parameter_column);
std::string CsvRow(const std::string& value_cell, InferenceMode mode, const CampaignStats& stats);

/// Rows ordered by (value, mode) with standalone before ensemble.
void WriteSweepCsv(std::ostream& out, std::vector<SweepRow> rows);
void WriteRunCsv(std::ostream& out, InferenceMode mode, const CampaignStats& stats);

/// Parses "1e-4,3e-4,1e-3" into doubles. Throws ConfigError.
std::vector<double> ParseValueList(const std::string& text);

/// Reads {"parameter": ..., "values": [...], "modes": [...],
/// "common_random_numbers": bool}. Throws ConfigError.
SweepSpec LoadSweepSpec(const std::string& path);

/// Entry point shared by the executable and the tests.
int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gomec::cli
