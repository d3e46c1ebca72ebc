#pragma once

// RFC 4180 CSV: comma separator, double-quote quoting, CRLF or LF records.

#include <string>
#include <string_view>
#include <vector>

namespace pivotheso::csv {

struct Record {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

// Throws MalformedCsv on an unbalanced quote or stray characters after a
// closing quote. A trailing empty line does not produce a record.
std::vector<Record> parse(std::string_view text);

std::string escape_field(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

}  // namespace pivotheso::csv
