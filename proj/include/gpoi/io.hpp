#pragma once

#include <string>
#include <vector>

#include "gpoi/dense.hpp"

namespace gpoi {

// GPOI matrix container: "GPOI" magic, u32 version, u64 rows, u64 cols,
// then rows*cols little-endian doubles in column-major order. Writes go
// through a temp file plus rename, so a path never holds a partial file.
void write_matrix(const std::string& path, const DenseMatrix& m);
DenseMatrix read_matrix(const std::string& path);

// RFC-4180-style CSV with '.' decimals and %.17g formatting (doubles
// round-trip exactly). NaN cells are written empty.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;  // NaN for empty cells
};
CsvTable read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace gpoi
