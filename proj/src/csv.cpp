/*
 * Copyright 2026 The discgp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "discgp/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace discgp {

namespace {

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string join(const std::vector<std::string> &cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i)
      out += ',';
    out += cells[i];
  }
  return out;
}

} // namespace

CsvTable parse_csv(const std::string &text) {
  CsvTable t;
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty())
      continue;
    if (line[0] == '#') {
      t.metadata.push_back(line);
      continue;
    }
    auto cells = split(line);
    if (t.header.empty()) {
      for (auto &c : cells)
        t.header.push_back(trim(c));
      continue;
    }
    if (cells.size() != t.header.size())
      throw InputError("CSV line " + std::to_string(lineno) + " has " +
                       std::to_string(cells.size()) + " cells, header has " +
                       std::to_string(t.header.size()));
    std::vector<double> row;
    for (auto &c : cells) {
      const std::string s = trim(c);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw InputError("CSV line " + std::to_string(lineno) + ": '" + s + "' is not a number");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (t.header.empty())
    throw InputError("CSV has no header row");
  t.values.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(t.header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return t;
}

CsvTable read_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open CSV '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc())
    return "nan";
  return std::string(buf, ptr);
}

std::string format_csv(const std::vector<std::string> &metadata,
                       const std::vector<std::string> &header, const PointSet &values) {
  std::string text;
  for (const auto &m : metadata)
    text += "# " + m + '\n';
  text += join(header) + '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    std::vector<std::string> cells;
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      cells.push_back(format_double(values(r, c)));
    text += join(cells) + '\n';
  }
  return text;
}

void write_csv(const std::string &path, const std::vector<std::string> &metadata,
               const std::vector<std::string> &header, const PointSet &values) {
  const std::string text = format_csv(metadata, header, values);
  std::ofstream out(path, std::ios::trunc);
  if (!out || !(out << text) || !out.flush())
    throw Error("cannot write CSV '" + path + "'");
}

RowWriter::RowWriter(const std::string &path, const std::vector<std::string> &metadata,
                     const std::vector<std::string> &header)
    : path_(path) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_APPEND, 0644);
  if (fd_ < 0)
    throw Error("cannot open '" + path + "' for writing: " + std::strerror(errno));
  for (const auto &m : metadata)
    write_line("# " + m);
  write_line(join(header));
}

RowWriter::~RowWriter() {
  if (fd_ >= 0)
    ::close(fd_);
}

void RowWriter::write_row(const std::vector<std::string> &cells) { write_line(join(cells)); }

void RowWriter::write_line(const std::string &line) {
  const std::string buf = line + '\n';
  const ssize_t n = ::write(fd_, buf.data(), buf.size());
  if (n != static_cast<ssize_t>(buf.size()))
    throw Error("short write to '" + path_ + "'");
}

std::string csv_safe(std::string text) {
  for (auto &ch : text) {
    if (ch == ',' || ch == '\n' || ch == '\r')
      ch = ch == ',' ? ';' : ' ';
  }
  return text;
}

} // namespace discgp
