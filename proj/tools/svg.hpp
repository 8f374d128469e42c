#pragma once

#include <string>
#include <vector>

namespace sobtri::cli {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Heatmap for `x,y,value` tables, otherwise line plots of every column
/// against the first. Returns an empty string for tables it cannot draw.
std::string render_svg(const Table& table, const std::string& title);

}  // namespace sobtri::cli
