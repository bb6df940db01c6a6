#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fsolink::csv {

/// Six significant digits, `.` decimal separator, `inf` for +infinity.
std::string format_number(double value);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index for `name`; throws ParseError when absent.
    std::size_t column(std::string_view name) const;
};

/// Parses `\n`-terminated comma-separated text with a header line.
/// Throws ParseError on ragged rows.
Table parse(std::string_view text);

double parse_number(std::string_view cell);

}  // namespace fsolink::csv
