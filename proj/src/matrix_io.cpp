/*
 * Copyright (C) 2026 The lowsync-bgs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bgs/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bgs {

namespace {

constexpr std::array<char, 4> kMagic{'B', 'G', 'S', 'M'};

void put_u64(std::ostream &out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i)
    bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffU);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream &in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char *>(bytes.data()), bytes.size());
  if (!in)
    throw Error("truncated BGSM stream");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

std::ofstream open_out(const std::string &path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out)
    throw Error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string &path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in)
    throw Error("cannot open '" + path + "' for reading");
  return in;
}

} // namespace

void write_bgsm(std::ostream &out, const DenseMatrix &a) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, a.rows());
  put_u64(out, a.cols());
  for (double v : a.storage())
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

DenseMatrix read_bgsm(std::istream &in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic)
    throw Error("not a BGSM stream (bad magic)");
  const std::uint64_t rows = get_u64(in);
  const std::uint64_t cols = get_u64(in);
  std::vector<double> data(rows * cols);
  for (double &v : data)
    v = std::bit_cast<double>(get_u64(in));
  return DenseMatrix::from_column_major(rows, cols, std::move(data));
}

void write_bgsm(const std::string &path, const DenseMatrix &a) {
  auto out = open_out(path, std::ios::binary);
  write_bgsm(out, a);
  if (!out)
    throw Error("write failed for '" + path + "'");
}

DenseMatrix read_bgsm(const std::string &path) {
  auto in = open_in(path, std::ios::binary);
  return read_bgsm(in);
}

void write_matrix_market(std::ostream &out, const DenseMatrix &a) {
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  char buf[32];
  for (double v : a.storage()) {
    std::snprintf(buf, sizeof buf, "%.16e", v);
    out << buf << '\n';
  }
}

DenseMatrix read_matrix_market(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw Error("missing MatrixMarket banner");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "array" || field != "real" || symmetry != "general")
    throw Error("only 'matrix array real general' MatrixMarket files are supported");
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '%')
      break;
  std::istringstream dims(line);
  std::size_t rows = 0, cols = 0;
  if (!(dims >> rows >> cols))
    throw Error("bad MatrixMarket size line");
  std::vector<double> data(rows * cols);
  for (double &v : data) {
    std::string tok;
    if (!(in >> tok))
      throw Error("truncated MatrixMarket payload");
    v = std::stod(tok);
  }
  return DenseMatrix::from_column_major(rows, cols, std::move(data));
}

void write_matrix_market(const std::string &path, const DenseMatrix &a) {
  auto out = open_out(path, std::ios::out);
  write_matrix_market(out, a);
  if (!out)
    throw Error("write failed for '" + path + "'");
}

DenseMatrix read_matrix_market(const std::string &path) {
  auto in = open_in(path, std::ios::in);
  return read_matrix_market(in);
}

} // namespace bgs
