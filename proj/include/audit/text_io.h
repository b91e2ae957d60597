// Copyright 2026 The Comment Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AUDIT_TEXT_IO_H_
#define AUDIT_TEXT_IO_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "audit/common.h"

namespace audit {

// %.9g; NaN renders as an empty cell.
std::string FormatSig9(double value);

absl::StatusOr<std::string> ReadFileToString(const std::filesystem::path& path);
absl::Status WriteStringToFile(const std::filesystem::path& path, std::string_view contents);

// `key = value` lines; '#' starts a comment; blank lines ignored.
absl::StatusOr<std::map<std::string, std::string>> ParseKeyValue(std::string_view text);

// Minimal RFC 4180 CSV.
std::string CsvEscape(std::string_view field);
std::string CsvRow(const std::vector<std::string>& fields);
absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsv(std::string_view text);

}  // namespace audit

#endif  // AUDIT_TEXT_IO_H_
