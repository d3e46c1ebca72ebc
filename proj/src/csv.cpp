#include "pivotheso/csv.hpp"

#include "pivotheso/errors.hpp"

namespace pivotheso::csv {

std::vector<Record> parse(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::vector<Record> records;
    std::size_t pos = 0;
    std::size_t line = 1;
    while (pos < text.size()) {
        Record rec;
        rec.line = line;
        std::string field;
        bool record_done = false;
        while (!record_done) {
            if (pos < text.size() && text[pos] == '"') {
                const std::size_t quote_line = line;
                ++pos;
                for (;;) {
                    if (pos >= text.size()) {
                        throw Error(ErrorCode::MalformedCsv,
                                    "unbalanced quote starting on line " + std::to_string(quote_line));
                    }
                    const char c = text[pos++];
                    if (c == '"') {
                        if (pos < text.size() && text[pos] == '"') {
                            field.push_back('"');
                            ++pos;
                            continue;
                        }
                        break;
                    }
                    if (c == '\n') ++line;
                    field.push_back(c);
                }
                if (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
                    throw Error(ErrorCode::MalformedCsv,
                                "unexpected character after closing quote on line " + std::to_string(line));
                }
            } else {
                while (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
                    if (text[pos] == '"') {
                        throw Error(ErrorCode::MalformedCsv, "quote inside unquoted field on line " + std::to_string(line));
                    }
                    field.push_back(text[pos++]);
                }
            }
            rec.fields.push_back(std::move(field));
            field.clear();
            if (pos >= text.size()) {
                record_done = true;
            } else if (text[pos] == ',') {
                ++pos;
            } else {
                if (text[pos] == '\r') ++pos;
                if (pos < text.size() && text[pos] == '\n') ++pos;
                ++line;
                record_done = true;
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::string escape_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += escape_field(fields[i]);
    }
    out.push_back('\n');
    return out;
}

}  // namespace pivotheso::csv
