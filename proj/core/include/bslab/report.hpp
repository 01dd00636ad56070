#pragma once

#include <string>
#include <vector>

#include "bslab/scenario.hpp"

namespace bslab {

enum class ReportFormat { Json, Csv, PlotData };

ReportFormat parse_format(const std::string& name);
std::string to_string(ReportFormat f);

std::string render_json(const Json& report);
/// Flat rows: experiment index, experiment type, JSON pointer, value.
std::string render_csv(const Json& report);
/// Parses rows produced by render_csv.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

struct PlotData {
  std::string obstruction;    // m count total bound
  std::string semiconjugacy;  // source target
};
PlotData render_plotdata(const Json& report);

/// Writes the report under `dir` using `stem` as file name stem and returns
/// the written paths. Throws IoError.
std::vector<std::string> emit_report(const Json& report, ReportFormat format, const std::string& dir,
                                     const std::string& stem);

}  // namespace bslab
