#include "rotorlab/report.hpp"

#include <charconv>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "rotorlab/symmetry.hpp"

namespace rotorlab {

std::string fmt_real(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("fmt_real: conversion failed");
  return std::string(buf, p);
}

std::vector<std::string> shape_curve_header() {
  return {"n", "psi", "psi_ball", "sym_diff", "lebesgue_error", "inradius", "outradius", "T_n"};
}

std::vector<std::string> shape_curve_row(const ShapeReport& s) {
  return {std::to_string(s.n),        std::to_string(s.psi),          std::to_string(s.psi_ball),
          std::to_string(s.sym_diff), fmt_real(s.lebesgue_error),     fmt_real(s.inradius),
          fmt_real(s.outradius),      std::to_string(s.total_steps)};
}

std::vector<std::string> iso_header() { return {"n", "d", "shapes", "max_e", "e_ball", "phi_hat", "argmax_shape"}; }

std::vector<std::string> iso_row(const IsoReport& r) {
  return {std::to_string(r.n),   std::to_string(r.d),  std::to_string(r.shapes), fmt_real(r.max_e),
          fmt_real(r.e_ball),    fmt_real(r.phi_hat),  to_rle(r.argmax)};
}

std::vector<std::string> montecarlo_header() { return {"experiment", "params", "mean", "stderr", "trials", "seed"}; }

std::vector<std::string> montecarlo_row(const std::string& experiment, const std::string& params, const MCEstimate& e) {
  return {experiment, params, fmt_real(e.mean), fmt_real(e.stderr_), std::to_string(e.trials), std::to_string(e.seed)};
}

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    // Cells that could break the row are quoted.
    if (cells[i].find_first_of(",\"\n") != std::string::npos) {
      line += '"';
      for (const char c : cells[i]) {
        if (c == '"') line += '"';
        line += c;
      }
      line += '"';
    } else {
      line += cells[i];
    }
  }
  return line;
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, const std::string& schema, const std::vector<std::string>& header) {
  to_stdout_ = path == "-";
  if (!to_stdout_) {
    file_.open(path, std::ios::trunc);
    if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
  }
  std::ostream& out = to_stdout_ ? std::cout : file_;
  out << "# " << schema << '\n' << join(header) << '\n';
}

CsvWriter CsvWriter::resume(const std::string& path, const std::string& schema, const std::vector<std::string>& header,
                            std::uint64_t keep_up_to) {
  std::vector<std::string> kept;
  {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot reopen " + path + " to resume");
    std::string line;
    if (!std::getline(in, line) || line != "# " + std::string(schema)) {
      throw std::runtime_error(path + " does not carry schema " + schema);
    }
    if (!std::getline(in, line) || line != join(header)) throw std::runtime_error(path + " has an unexpected header");
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      std::uint64_t first = 0;
      const auto [p, ec] = std::from_chars(line.data(), line.data() + (comma == std::string::npos ? line.size() : comma), first);
      (void)p;
      if (ec != std::errc()) throw std::runtime_error(path + " has a malformed row");
      if (first <= keep_up_to) kept.push_back(line);
    }
  }
  CsvWriter w(path, schema, header);
  for (const auto& line : kept) w.file_ << line << '\n';
  return w;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  std::ostream& out = to_stdout_ ? std::cout : file_;
  out << join(cells) << '\n';
}

void CsvWriter::flush() {
  std::ostream& out = to_stdout_ ? std::cout : file_;
  out.flush();
}

void write_pgm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& pixels) {
  if (width <= 0 || height <= 0 || pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("write_pgm: pixel buffer does not match the image size");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

void render_aggregate(const std::string& path, const std::vector<Point>& sites) {
  if (sites.empty()) throw std::invalid_argument("render_aggregate: nothing to draw");
  if (sites.front().dim() != 2) throw std::invalid_argument("render_aggregate: needs d = 2");
  Point lo = sites.front(), hi = sites.front();
  for (const auto& x : sites) {
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::min(lo[i], x[i]);
      hi[i] = std::max(hi[i], x[i]);
    }
  }
  const int w = hi[0] - lo[0] + 1, h = hi[1] - lo[1] + 1;
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  const auto n = static_cast<double>(sites.size());
  constexpr int kBands = 16;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const double f = static_cast<double>(k) / n;
    int v = 60 + static_cast<int>(195.0 * f);
    if (static_cast<int>(f * kBands) % 2) v = v * 3 / 4;
    const auto& x = sites[k];
    const std::size_t row = static_cast<std::size_t>(hi[1] - x[1]);  // top row is the largest y
    px[row * static_cast<std::size_t>(w) + static_cast<std::size_t>(x[0] - lo[0])] = static_cast<std::uint8_t>(v);
  }
  write_pgm(path, w, h, px);
}

}  // namespace rotorlab
