#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace gridloc::csv {

/// One parsed record with the 1-based physical line it started on.
struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

/// RFC 4180 reader: quoted fields, doubled quotes, embedded newlines, CRLF or LF.
/// Lines starting with '#' before the header are skipped (provenance comments).
class Reader {
public:
    explicit Reader(std::istream& in);

    /// Header row; throws ParseError when the stream has none.
    const std::vector<std::string>& header() const { return header_; }

    /// Index of a named header column; throws ParseError when missing.
    std::size_t column(std::string_view name) const;

    std::optional<Record> next();

private:
    bool read_record(Record& out);

    std::istream& in_;
    std::size_t line_ = 0;
    std::vector<std::string> header_;
};

/// Writes one record, quoting fields only when needed.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Strict integer parse of a whole field; nullopt on junk or overflow.
std::optional<long long> to_int(std::string_view s);
/// Strict real parse of a whole field.
std::optional<double> to_real(std::string_view s);

}  // namespace gridloc::csv
