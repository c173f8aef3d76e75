#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tzopt {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column position for `name`, or nullopt.
    std::optional<std::size_t> column(const std::string& name) const;
};

/// Reads a comma-separated file with a header line. Accepts LF or CRLF,
/// double-quoted fields with "" escapes. Throws InputError on I/O failure
/// or ragged rows.
CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Shortest round-trip decimal formatting (std::to_chars).
std::string format_double(double v);

/// Strict double parse of a whole field. Empty/NA/NaN-like fields yield
/// nullopt; anything else unparseable throws InputError naming `context`.
std::optional<double> parse_double_field(const std::string& field, const std::string& context);

/// Strict nonnegative integer parse. Throws InputError naming `context`.
long parse_long_field(const std::string& field, const std::string& context);

}  // namespace tzopt
