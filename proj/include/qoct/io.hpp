// Copyright 2026 The qoct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qoct/model.hpp"

namespace qoct {

/// Locale-independent, round-trip-safe decimal formatting.
inline std::string format_double(double v, int precision = 17) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

/// Text matrix format: first line "# <rows> <cols>", then one matrix row per
/// line as whitespace-separated "re im" pairs.
inline void write_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# " << m.rows() << " " << m.cols() << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << " ";
      out << format_double(m(r, c).real()) << " " << format_double(m(r, c).imag());
    }
    out << "\n";
  }
}

inline Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string header;
  std::getline(in, header);
  Eigen::Index rows = 0, cols = 0;
  {
    std::istringstream hs(header);
    std::string hash;
    hs >> hash >> rows >> cols;
    if (hash != "#" || rows <= 0 || cols <= 0) {
      throw std::runtime_error("bad matrix header in " + path +
                               " (expected '# <rows> <cols>')");
    }
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) {
        throw std::runtime_error("truncated matrix data in " + path);
      }
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace qoct
