#include "gpoi/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace gpoi {
namespace {

constexpr char kMagic[4] = {'G', 'P', 'O', 'I'};
constexpr std::uint32_t kVersionTag = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 8;

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

void put_f64(std::string& buf, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof(bits));
    put_u64(buf, bits);
}

double get_f64(const unsigned char* p) {
    const std::uint64_t bits = get_u64(p);
    double d;
    std::memcpy(&d, &bits, sizeof(d));
    return d;
}

void atomic_write(const std::string& path, const std::string& payload) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

}  // namespace

void write_matrix(const std::string& path, const DenseMatrix& m) {
    std::string buf;
    buf.reserve(kHeaderBytes + m.size() * 8);
    buf.append(kMagic, 4);
    put_u32(buf, kVersionTag);
    put_u64(buf, m.rows());
    put_u64(buf, m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) put_f64(buf, m.data()[i]);
    atomic_write(path, buf);
}

DenseMatrix read_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open matrix file: " + path);
    in.seekg(0, std::ios::end);
    const std::uint64_t file_size = static_cast<std::uint64_t>(in.tellg());
    in.seekg(0);
    if (file_size < kHeaderBytes) {
        throw FormatError(path + ": file shorter than the GPOI header (field: header)");
    }
    unsigned char header[kHeaderBytes];
    in.read(reinterpret_cast<char*>(header), kHeaderBytes);
    if (std::memcmp(header, kMagic, 4) != 0) {
        throw FormatError(path + ": bad magic (field: magic)");
    }
    const std::uint32_t version = get_u32(header + 4);
    if (version != kVersionTag) {
        throw FormatError(path + ": unsupported version " + std::to_string(version) +
                          " (field: version)");
    }
    const std::uint64_t rows = get_u64(header + 8);
    const std::uint64_t cols = get_u64(header + 16);
    if (rows != 0 && cols > std::numeric_limits<std::uint64_t>::max() / 8 / rows) {
        throw FormatError(path + ": rows*cols overflows (field: dimensions)");
    }
    const std::uint64_t payload = rows * cols * 8;
    if (file_size - kHeaderBytes != payload) {
        throw FormatError(path + ": payload size mismatch, header claims " +
                          std::to_string(payload) + " bytes but file holds " +
                          std::to_string(file_size - kHeaderBytes) + " (field: payload)");
    }

    DenseMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    std::string raw(static_cast<std::size_t>(payload), '\0');
    in.read(raw.data(), static_cast<std::streamsize>(payload));
    if (!in) throw FormatError(path + ": short read (field: payload)");
    const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = get_f64(p + 8 * i);
    return m;
}

namespace {

std::string format_cell(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::string buf;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buf.push_back(',');
        buf += header[i];
    }
    buf.push_back('\n');
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) buf.push_back(',');
            buf += format_cell(row[i]);
        }
        buf.push_back('\n');
    }
    atomic_write(path, buf);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open csv file: " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.eof()) break;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (first) {
            table.header = cells;
            first = false;
        } else {
            std::vector<double> row;
            row.reserve(cells.size());
            for (const auto& c : cells) {
                row.push_back(c.empty() ? std::numeric_limits<double>::quiet_NaN()
                                        : std::strtod(c.c_str(), nullptr));
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

void write_text_file(const std::string& path, const std::string& contents) {
    atomic_write(path, contents);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace gpoi
