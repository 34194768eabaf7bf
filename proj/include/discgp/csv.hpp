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

#pragma once

#include <string>
#include <vector>

#include "discgp/types.hpp"

namespace discgp {

/// Numeric table with a header row. Lines starting with '#' are metadata.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::string> metadata;
  PointSet values;
};

/// Throws InputError on ragged rows, non-numeric cells or a missing header.
CsvTable read_csv(const std::string &path);
CsvTable parse_csv(const std::string &text);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// CSV text with metadata lines, header and rows.
std::string format_csv(const std::vector<std::string> &metadata,
                       const std::vector<std::string> &header, const PointSet &values);

/// Writes metadata lines, the header and every row in one go.
void write_csv(const std::string &path, const std::vector<std::string> &metadata,
               const std::vector<std::string> &header, const PointSet &values);

/// Append-only CSV sink. Every row goes to the file in a single write(2) call
/// on an O_APPEND descriptor, so an interrupted run leaves only whole rows.
class RowWriter {
public:
  /// Truncates `path` and writes the metadata and header lines.
  RowWriter(const std::string &path, const std::vector<std::string> &metadata,
            const std::vector<std::string> &header);
  ~RowWriter();
  RowWriter(const RowWriter &) = delete;
  RowWriter &operator=(const RowWriter &) = delete;

  void write_row(const std::vector<std::string> &cells);

private:
  void write_line(const std::string &line);
  int fd_ = -1;
  std::string path_;
};

/// Replaces separators so free text fits in one CSV cell.
std::string csv_safe(std::string text);

} // namespace discgp
