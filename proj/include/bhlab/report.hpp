#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bhlab/analysis.hpp"

namespace bhlab {

// Shortest round-trip decimal form, '.' separator.
std::string format_number(double value);

inline constexpr const char* kExpectationCsvHeader = "spec_id,method,eps,b,value,stderr,trials,seed,branches";

std::string expectation_csv_row(const std::string& spec_id, const ExpectationResult& result, double epsilon,
                                std::size_t advice_bits);

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Self-contained SVG line chart.
std::string render_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<PlotSeries>& series);

}  // namespace bhlab
