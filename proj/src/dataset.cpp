#include "bfgrow/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace bfgrow {

namespace {

// Tokenizes RFC-4180 content: fields separated by commas, records by LF or
// CRLF, double quotes around fields that contain separators, with "" as the
// escaped quote. A trailing newline does not produce an empty record.
std::vector<std::vector<std::string>> tokenize_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;

    const auto end_field = [&]() {
        record.push_back(field);
        field.clear();
        field_started = false;
    };
    const auto end_record = [&]() {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t k = 0; k < text.size(); ++k) {
        const char ch = text[k];
        if (quoted) {
            if (ch == '"') {
                if (k + 1 < text.size() && text[k + 1] == '"') {
                    field.push_back('"');
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!field_started && field.empty()) {
                    quoted = true;
                    field_started = true;
                } else {
                    field.push_back(ch);
                }
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (k + 1 < text.size() && text[k + 1] == '\n') ++k;
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                field.push_back(ch);
                field_started = true;
                break;
        }
    }
    if (quoted) {
        throw ParseError("CSV: unterminated quoted field at end of file");
    }
    if (field_started || !field.empty() || !record.empty()) {
        end_record();
    }
    return records;
}

std::string trimmed(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& cell, std::size_t data_row,
                  const std::string& column) {
    const std::string body = trimmed(cell);
    const auto fail = [&]() -> ParseError {
        return ParseError("CSV: cell at data row " + std::to_string(data_row) +
                          ", column '" + column + "' is not numeric: '" +
                          cell + "'");
    };
    if (body.empty()) throw fail();
    char* tail = nullptr;
    const double value = std::strtod(body.c_str(), &tail);
    if (tail != body.c_str() + body.size()) throw fail();
    if (!std::isfinite(value)) throw fail();
    return value;
}

}  // namespace

RawCsv read_csv_file(const std::string& csv_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) {
        throw FileNotFound("cannot open file: " + csv_path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    auto records = tokenize_csv(buffer.str());
    if (records.empty()) {
        throw EmptyInput("CSV has no header row: " + csv_path);
    }

    RawCsv csv;
    csv.header = std::move(records.front());
    for (std::string& name : csv.header) name = trimmed(name);
    std::set<std::string> seen;
    std::vector<std::string> duplicates;
    for (const std::string& name : csv.header) {
        if (!seen.insert(name).second) duplicates.push_back(name);
    }
    if (!duplicates.empty()) {
        std::string msg = "CSV header has duplicate column names:";
        for (const std::string& name : duplicates) msg += " '" + name + "'";
        throw MissingColumn(msg);
    }

    csv.rows.assign(records.begin() + 1, records.end());
    if (csv.rows.empty()) {
        throw EmptyInput("CSV has no data rows: " + csv_path);
    }
    for (std::size_t row = 0; row < csv.rows.size(); ++row) {
        if (csv.rows[row].size() != csv.header.size()) {
            throw ParseError("CSV: data row " + std::to_string(row + 1) +
                             " has " + std::to_string(csv.rows[row].size()) +
                             " fields, header has " +
                             std::to_string(csv.header.size()));
        }
    }
    return csv;
}

Dataset parse_dataset(const std::string& csv_path,
                      const std::string& response_column) {
    const RawCsv csv = read_csv_file(csv_path);

    const auto response_it =
        std::find(csv.header.begin(), csv.header.end(), response_column);
    if (response_it == csv.header.end()) {
        throw MissingColumn("response column '" + response_column +
                            "' not found in: " + csv_path);
    }
    const std::size_t response_idx = static_cast<std::size_t>(
        response_it - csv.header.begin());

    std::vector<std::string> column_names;
    for (std::size_t col = 0; col < csv.header.size(); ++col) {
        if (col != response_idx) column_names.push_back(csv.header[col]);
    }

    const Eigen::Index n = static_cast<Eigen::Index>(csv.rows.size());
    const Eigen::Index k = static_cast<Eigen::Index>(column_names.size());
    Eigen::VectorXd y(n);
    Eigen::MatrixXd x(n, k);
    for (std::size_t row = 0; row < csv.rows.size(); ++row) {
        Eigen::Index out_col = 0;
        for (std::size_t col = 0; col < csv.header.size(); ++col) {
            const double value =
                parse_cell(csv.rows[row][col], row + 1, csv.header[col]);
            if (col == response_idx) {
                y[static_cast<Eigen::Index>(row)] = value;
            } else {
                x(static_cast<Eigen::Index>(row), out_col++) = value;
            }
        }
    }
    return Dataset{std::move(y), DesignMatrix(std::move(x)),
                   std::move(column_names), response_column};
}

}  // namespace bfgrow
