#pragma once

// Minimal SVG line plots for gain-versus-beams and gain-versus-iteration
// curves.

#include <filesystem>
#include <string>
#include <vector>

namespace ris {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Throws DomainError if the plot has no points.
std::string render_svg(const LinePlot& plot);

/// Renders, then writes atomically (temporary file + rename); nothing is
/// left behind on error.
void write_svg(const std::filesystem::path& path, const LinePlot& plot);

/// Writes text to a file atomically.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ris
