#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "rotorlab/exittime.hpp"
#include "rotorlab/montecarlo.hpp"
#include "rotorlab/shape.hpp"

namespace rotorlab {

// Every CSV starts with "# <schema>" and then the header row.
inline constexpr const char* kShapeCurveSchema = "rotorlab.shape-curve.v1";
inline constexpr const char* kIsoSchema = "rotorlab.iso-report.v1";
inline constexpr const char* kMonteCarloSchema = "rotorlab.montecarlo.v1";
inline constexpr const char* kExitSchema = "rotorlab.exit.v1";

std::vector<std::string> shape_curve_header();
std::vector<std::string> shape_curve_row(const ShapeReport& s);
std::vector<std::string> iso_header();
std::vector<std::string> iso_row(const IsoReport& r);
std::vector<std::string> montecarlo_header();
std::vector<std::string> montecarlo_row(const std::string& experiment, const std::string& params, const MCEstimate& e);

/// Shortest decimal that reads back to the same double.
std::string fmt_real(double v);

class CsvWriter {
 public:
  /// Opens `path` ("-" is stdout) and writes the schema line and header.
  CsvWriter(const std::string& path, const std::string& schema, const std::vector<std::string>& header);
  /// Resume mode: keeps the schema, header and the rows whose first column
  /// is at most `keep_up_to`, drops the rest, and appends from there.
  static CsvWriter resume(const std::string& path, const std::string& schema, const std::vector<std::string>& header,
                          std::uint64_t keep_up_to);

  void row(const std::vector<std::string>& cells);
  void flush();

 private:
  CsvWriter() = default;
  std::ofstream file_;
  bool to_stdout_ = false;
};

/// Binary PGM (P5).
void write_pgm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& pixels);

/// Renders a planar aggregate: background black, site k of n shaded by
/// k / n with alternating bands, so layers of growth stay visible.
void render_aggregate(const std::string& path, const std::vector<Point>& sites_in_order);

}  // namespace rotorlab
