#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace castnet::detail {

/// Pull parser for RFC-4180 style CSV: quoted fields may contain commas,
/// doubled quotes and line breaks. One call yields one logical record.
class CsvReader {
public:
    enum class Status { Ok, Malformed, End };

    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Physical line on which the last returned record started (1-based).
    std::size_t line() const { return record_line_; }

    Status next(std::vector<std::string>& fields) {
        fields.clear();
        std::string line;
        if (!std::getline(in_, line)) return Status::End;
        record_line_ = ++line_no_;
        strip_cr(line);

        std::string field;
        bool quoted = false;
        bool after_quote = false;
        bool malformed = false;
        std::size_t i = 0;
        for (;;) {
            if (i == line.size()) {
                if (quoted) {
                    // embedded newline; continue with the next physical line
                    std::string more;
                    if (!std::getline(in_, more)) {
                        fields.push_back(std::move(field));
                        return Status::Malformed;
                    }
                    ++line_no_;
                    strip_cr(more);
                    field.push_back('\n');
                    line = std::move(more);
                    i = 0;
                    continue;
                }
                fields.push_back(std::move(field));
                return malformed ? Status::Malformed : Status::Ok;
            }
            const char c = line[i++];
            if (quoted) {
                if (c == '"') {
                    if (i < line.size() && line[i] == '"') {
                        field.push_back('"');
                        ++i;
                    } else {
                        quoted = false;
                        after_quote = true;
                    }
                } else {
                    field.push_back(c);
                }
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
                after_quote = false;
            } else if (c == '"' && field.empty() && !after_quote) {
                quoted = true;
            } else {
                if (after_quote || c == '"') malformed = true;
                field.push_back(c);
            }
        }
    }

private:
    static void strip_cr(std::string& s) {
        if (!s.empty() && s.back() == '\r') s.pop_back();
    }

    std::istream& in_;
    std::size_t line_no_ = 0;
    std::size_t record_line_ = 0;
};

/// Splits one TSV line (no quoting, as in the IMDb dumps) into views.
inline void split_tabs(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    for (;;) {
        const auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

} // namespace castnet::detail
