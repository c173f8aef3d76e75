#include "tzopt/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tzopt/errors.hpp"

namespace tzopt {

namespace {

std::vector<std::string> split_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (quoted) {
        throw InputError("unterminated quote on line " + std::to_string(line_no));
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);

    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        auto fields = split_line(line, line_no);
        if (line_no == 1) {
            table.header = std::move(fields);
        } else {
            if (fields.size() != table.header.size()) {
                throw InputError(path + ": line " + std::to_string(line_no) + " has " +
                                 std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(table.header.size()));
            }
            table.rows.push_back(std::move(fields));
        }
    }
    if (table.header.empty()) throw InputError(path + ": missing header line");
    return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open file for writing: " + path);
    auto emit = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) out << ',';
            const std::string& f = fields[i];
            if (f.find_first_of(",\"\n") != std::string::npos) {
                out << '"';
                for (char ch : f) {
                    if (ch == '"') out << "\"\"";
                    else out << ch;
                }
                out << '"';
            } else {
                out << f;
            }
        }
        out << '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    if (!out) throw InputError("write failed: " + path);
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double_field(const std::string& field, const std::string& context) {
    std::size_t b = field.find_first_not_of(" \t");
    if (b == std::string::npos) return std::nullopt;
    std::size_t e = field.find_last_not_of(" \t");
    const std::string s = field.substr(b, e - b + 1);
    if (s == "NA" || s == "na" || s == "NaN" || s == "nan" || s == "null") return std::nullopt;
    double out = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw InputError("cannot parse number '" + field + "' in " + context);
    }
    return out;
}

long parse_long_field(const std::string& field, const std::string& context) {
    std::size_t b = field.find_first_not_of(" \t");
    if (b == std::string::npos) throw InputError("empty integer field in " + context);
    std::size_t e = field.find_last_not_of(" \t");
    const std::string s = field.substr(b, e - b + 1);
    long out = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw InputError("cannot parse integer '" + field + "' in " + context);
    }
    return out;
}

}  // namespace tzopt
