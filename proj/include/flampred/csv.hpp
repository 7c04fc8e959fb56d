// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace flampred::csv {

using Row = std::vector<std::string>;

// Comma separated, double-quote escaping, LF or CRLF line ends. Blank lines
// are skipped. A UTF-8 BOM on the first line is dropped.
std::vector<Row> parse(std::string_view text);
std::vector<Row> read_file(const std::filesystem::path& path);

// Quotes a field only when it contains a comma, quote or newline.
std::string escape(std::string_view field);
void write_row(std::ostream& out, const Row& row);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

// Parses a full cell as a double; returns false on trailing garbage.
bool parse_double(std::string_view cell, double& out);

}  // namespace flampred::csv
