/*
 * Copyright 2026 The FairUDT Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FAIRUDT_CSV_H_
#define FAIRUDT_CSV_H_

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fairudt::csv {

using Record = std::vector<std::string>;

// Reads RFC-4180 records: comma separated, '"' quoting with "" escapes,
// quoted fields may span lines, CRLF or LF terminators. A trailing empty line
// is not a record. Throws DataError on an unterminated quote, naming the
// 1-based record index.
std::vector<Record> ReadAll(std::istream& in);

// Quotes the field only when it contains a comma, quote, CR or LF, or has
// leading/trailing spaces.
void WriteField(std::ostream& out, std::string_view field);
void WriteRecord(std::ostream& out, const Record& record);

}  // namespace fairudt::csv

#endif  // FAIRUDT_CSV_H_
