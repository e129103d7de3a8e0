#include "gridloc/csv.hpp"

#include "gridloc/error.hpp"

#include <charconv>
#include <cmath>

namespace gridloc::csv {

Reader::Reader(std::istream& in) : in_(in) {
    while (in_.peek() == '#') {
        std::string skipped;
        std::getline(in_, skipped);
        ++line_;
    }
    Record hdr;
    if (!read_record(hdr)) throw ParseError("missing CSV header row");
    header_ = std::move(hdr.fields);
    // A UTF-8 byte order mark on the first header cell is not part of the name.
    if (!header_.empty() && header_[0].starts_with("\xEF\xBB\xBF")) header_[0].erase(0, 3);
}

std::size_t Reader::column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    throw ParseError("CSV header has no column named '" + std::string(name) + "'", 1);
}

std::optional<Record> Reader::next() {
    Record rec;
    while (read_record(rec)) {
        // Blank lines carry no record.
        if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
        return rec;
    }
    return std::nullopt;
}

bool Reader::read_record(Record& out) {
    out.fields.clear();
    if (in_.peek() == std::char_traits<char>::eof()) return false;
    out.line = ++line_;

    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    for (;;) {
        int c = in_.get();
        if (c == std::char_traits<char>::eof()) {
            if (quoted) throw ParseError("unterminated quoted field", out.line);
            out.fields.push_back(std::move(field));
            return true;
        }
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!field.empty() || field_was_quoted)
                    throw ParseError("stray quote inside unquoted field", out.line);
                quoted = true;
                field_was_quoted = true;
                break;
            case ',':
                out.fields.push_back(std::move(field));
                field.clear();
                field_was_quoted = false;
                break;
            case '\r':
                if (in_.peek() == '\n') in_.get();
                [[fallthrough]];
            case '\n':
                out.fields.push_back(std::move(field));
                return true;
            default:
                field.push_back(ch);
        }
    }
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\r\n") == std::string::npos) {
            out << f;
            continue;
        }
        out << '"';
        for (char c : f) {
            if (c == '"') out << '"';
            out << c;
        }
        out << '"';
    }
    out << '\n';
}

std::optional<long long> to_int(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> to_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

}  // namespace gridloc::csv
