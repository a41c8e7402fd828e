// CSV ingestion: a small RFC-4180 reader (quoted fields, escaped quotes,
// embedded separators and newlines) and conversion into a response vector
// plus design matrix.
#pragma once

#include <string>
#include <vector>

#include "bfgrow/linear_model.hpp"

namespace bfgrow {

/// A parsed CSV file: header row plus data rows of raw text cells, each row
/// already validated to match the header width.
struct RawCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reads and tokenizes a CSV file. Throws FileNotFound when the path cannot
/// be opened, EmptyInput when there are no data rows, ParseError on ragged
/// rows or a dangling quote, and MissingColumn when header names repeat.
RawCsv read_csv_file(const std::string& csv_path);

/// A numeric dataset: the response column plus every remaining column, in
/// header order, as the design.
struct Dataset {
    ResponseVector y;
    DesignMatrix x;
    std::vector<std::string> column_names;  ///< design columns, header order
    std::string response_name;
};

/// Loads a CSV and splits out the named response column. Every non-response
/// cell must parse as a finite number; a blank or non-numeric cell raises
/// ParseError naming the data row and column. The design columns are
/// validated for full rank on construction.
Dataset parse_dataset(const std::string& csv_path,
                      const std::string& response_column);

}  // namespace bfgrow
