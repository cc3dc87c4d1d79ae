#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "ncer/linalg.hpp"
#include "ncer/metrics.hpp"

namespace ncer {

/// Dense numeric CSV, one data point per column of the result (file rows are
/// matrix rows). Rejects ragged rows and non-finite values.
inline Matrix load_dense_csv(const std::string& path, bool header = false) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    if (line.empty() && in.eof()) break;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw input_error(path + ": parse failure at row " +
                          std::to_string(lineno) + ", col " +
                          std::to_string(row.size() + 1));
      }
      if (!std::isfinite(v))
        throw input_error(path + ": non-finite value at row " +
                          std::to_string(lineno) + ", col " +
                          std::to_string(row.size() + 1));
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw input_error(path + ": ragged row " + std::to_string(lineno));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw input_error(path + ": empty file");
  Matrix M(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) M(i, j) = rows[i][j];
  return M;
}

inline void save_dense_csv(const std::string& path, const Matrix& M) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write: " + path);
  out << std::setprecision(17);
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << M(i, j);
    }
    out << '\n';
  }
}

namespace detail {

inline std::uint32_t read_be_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw input_error("IDX: truncated header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace detail

/// IDX3 image file (big-endian magic 0x00000803). Each image is vectorized
/// into one column; intensities 0..255 as reals.
inline Matrix load_idx_images(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open: " + path);
  if (detail::read_be_u32(in) != 0x00000803u)
    throw input_error(path + ": bad IDX3 magic");
  const std::uint32_t n = detail::read_be_u32(in);
  const std::uint32_t rows = detail::read_be_u32(in);
  const std::uint32_t cols = detail::read_be_u32(in);
  if (n == 0) throw input_error(path + ": no images");
  const std::size_t pixels = std::size_t(rows) * cols;
  std::vector<unsigned char> buf(pixels);
  Matrix M(static_cast<Index>(pixels), static_cast<Index>(n));
  for (std::uint32_t k = 0; k < n; ++k) {
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(pixels));
    if (!in) throw input_error(path + ": truncated payload");
    for (std::size_t p = 0; p < pixels; ++p)
      M(static_cast<Index>(p), static_cast<Index>(k)) = buf[p];
  }
  return M;
}

/// IDX1 label file; raw byte values, in file order.
inline std::vector<int> load_idx_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open: " + path);
  if (detail::read_be_u32(in) != 0x00000801u)
    throw input_error(path + ": bad IDX1 magic");
  const std::uint32_t n = detail::read_be_u32(in);
  std::vector<unsigned char> buf(n);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
  if (!in) throw input_error(path + ": truncated payload");
  return std::vector<int>(buf.begin(), buf.end());
}

/// Label file: one integer per line, or IDX1 (detected by magic). Labels are
/// remapped to 1..r preserving order of first appearance.
inline Partition load_labels(const std::string& path) {
  std::vector<int> raw;
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw input_error("cannot open: " + path);
    unsigned char b[4] = {0xFF, 0xFF, 0xFF, 0xFF};
    probe.read(reinterpret_cast<char*>(b), 4);
    const bool idx1 = probe && b[0] == 0 && b[1] == 0 && b[2] == 8 && b[3] == 1;
    if (idx1) {
      raw = load_idx_labels(path);
    } else {
      std::ifstream in(path);
      std::string line;
      std::size_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t pos = 0;
        int v;
        try {
          v = std::stoi(line, &pos);
        } catch (const std::exception&) {
          throw input_error(path + ": non-integer label at line " +
                            std::to_string(lineno));
        }
        raw.push_back(v);
      }
    }
  }
  if (raw.empty()) throw input_error(path + ": no labels");

  Partition part;
  std::vector<int> seen;  // first-appearance order
  for (int v : raw) {
    auto it = std::find(seen.begin(), seen.end(), v);
    if (it == seen.end()) {
      seen.push_back(v);
      it = seen.end() - 1;
    }
    part.labels.push_back(static_cast<int>(it - seen.begin()) + 1);
  }
  part.r = static_cast<int>(seen.size());
  return part;
}

inline void save_labels(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write: " + path);
  for (int l : labels) out << l << '\n';
}

}  // namespace ncer
