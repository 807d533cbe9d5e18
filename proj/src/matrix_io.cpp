#include "markov_embed/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace markov {

namespace {

struct Position {
    std::size_t line = 1;
    std::size_t column = 1;
};

Position locate(std::string_view text, std::size_t offset) {
    Position p;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++p.line;
            p.column = 1;
        } else {
            ++p.column;
        }
    }
    return p;
}

[[noreturn]] void parse_fail(Position p, const std::string& what) {
    std::ostringstream os;
    os << "line " << p.line << ", column " << p.column << ": " << what;
    throw EmbedError(ErrorCode::ParseError, os.str());
}

SquareMatrix parse_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        // byte is 1-based and points just past the offending character.
        parse_fail(locate(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
    }
    const nlohmann::json* rows = nullptr;
    if (doc.is_object()) {
        if (!doc.contains("rows")) parse_fail({}, "missing \"rows\"");
        rows = &doc["rows"];
    } else if (doc.is_array()) {
        rows = &doc;
    } else {
        parse_fail({}, "expected an object with \"rows\" or an array of rows");
    }
    if (!rows->is_array()) parse_fail({}, "\"rows\" must be an array");
    const auto n = rows->size();
    if (doc.is_object() && doc.contains("dim")) {
        const auto& dim = doc["dim"];
        if (!dim.is_number_integer() || dim.get<long long>() != static_cast<long long>(n)) {
            throw EmbedError(ErrorCode::DimensionMismatch, "\"dim\" does not match the number of rows");
        }
    }
    std::vector<std::vector<double>> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = (*rows)[i];
        if (!row.is_array()) parse_fail({}, "row " + std::to_string(i) + " is not an array");
        for (const auto& v : row) {
            if (!v.is_number()) parse_fail({}, "row " + std::to_string(i) + " has a non-numeric entry");
            values[i].push_back(v.get<double>());
        }
    }
    return SquareMatrix::from_rows(values);
}

SquareMatrix parse_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const bool blank = line.find_first_not_of(" \t") == std::string_view::npos;
        if (!blank && line.front() != '#') {
            std::vector<double> row;
            std::size_t col = 0;
            while (true) {
                const std::size_t comma = std::min(line.find(',', col), line.size());
                std::size_t b = col;
                std::size_t e = comma;
                while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
                while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
                double v = 0.0;
                const auto res = std::from_chars(line.data() + b, line.data() + e, v);
                if (b == e || res.ec != std::errc() || res.ptr != line.data() + e) {
                    parse_fail({line_no, b + 1}, "expected a number");
                }
                row.push_back(v);
                if (comma >= line.size()) break;
                col = comma + 1;
            }
            rows.push_back(std::move(row));
        }
        if (end >= text.size()) break;
        start = end + 1;
    }
    if (rows.empty()) parse_fail({1, 1}, "no data rows");
    return SquareMatrix::from_rows(rows);
}

}  // namespace

SquareMatrix parse_matrix(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) parse_fail({1, 1}, "empty input");
    if (text[first] == '{' || text[first] == '[') return parse_json(text);
    return parse_csv(text);
}

SquareMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EmbedError(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix(buf.str());
}

std::string format_exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string matrix_to_json(const Matrix& m) {
    std::string out = "{\"dim\": " + std::to_string(m.rows()) + ", \"rows\": [";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out += i == 0 ? "[" : ", [";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ", ";
            out += format_exact(m(i, j));
        }
        out += "]";
    }
    out += "]}\n";
    return out;
}

std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_exact(m(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string matrix_digest(const Matrix& m) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char ch : matrix_to_csv(m)) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace markov
