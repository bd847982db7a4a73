#include "kaczmarz/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kaczmarz {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

struct Header {
    bool coordinate = true;
    enum class Field { Real, Integer, Pattern } field = Field::Real;
    bool symmetric = false;
};

Header parse_header(const std::string& line, const std::string& path) {
    std::istringstream is(line);
    std::string banner, object, format, field, symmetry;
    is >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || is.fail()) {
        throw std::runtime_error(path + ": malformed MatrixMarket header");
    }
    object = lower(object);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);

    if (object != "matrix") throw std::runtime_error(path + ": only 'matrix' objects supported");

    Header h;
    if (format == "coordinate") {
        h.coordinate = true;
    } else if (format == "array") {
        h.coordinate = false;
    } else {
        throw std::runtime_error(path + ": unsupported format '" + format + "'");
    }

    if (field == "real") {
        h.field = Header::Field::Real;
    } else if (field == "integer") {
        h.field = Header::Field::Integer;
    } else if (field == "pattern") {
        if (!h.coordinate) throw std::runtime_error(path + ": pattern requires coordinate format");
        h.field = Header::Field::Pattern;
    } else {
        throw std::runtime_error(path + ": unsupported field '" + field + "'");
    }

    if (symmetry == "general") {
        h.symmetric = false;
    } else if (symmetry == "symmetric") {
        h.symmetric = true;
    } else {
        throw std::runtime_error(path + ": unsupported symmetry '" + symmetry + "'");
    }
    return h;
}

bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '%') continue;
        return true;
    }
    return false;
}

} // namespace

RowMatrix read_matrix_market(const std::string& path, int* dropped_zero_rows) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    const Header header = parse_header(line, path);

    if (!next_data_line(in, line)) throw std::runtime_error(path + ": missing size line");
    std::istringstream size_line(line);

    std::vector<RowMatrix::Triplet> entries;
    int m = 0;
    int n = 0;

    if (header.coordinate) {
        long declared_nnz = 0;
        size_line >> m >> n >> declared_nnz;
        if (size_line.fail() || m < 1 || n < 1 || declared_nnz < 0) {
            throw std::runtime_error(path + ": malformed size line");
        }
        if (header.symmetric && m != n) {
            throw std::runtime_error(path + ": symmetric matrix must be square");
        }
        entries.reserve(static_cast<std::size_t>(declared_nnz) * (header.symmetric ? 2 : 1));
        for (long e = 0; e < declared_nnz; ++e) {
            if (!next_data_line(in, line)) {
                throw std::runtime_error(path + ": fewer entries than declared");
            }
            std::istringstream entry(line);
            int i = 0;
            int j = 0;
            double v = 1.0;
            entry >> i >> j;
            if (header.field != Header::Field::Pattern) entry >> v;
            if (entry.fail()) throw std::runtime_error(path + ": malformed entry line");
            if (i < 1 || i > m || j < 1 || j > n) {
                throw std::runtime_error(path + ": coordinate out of range");
            }
            if (v == 0.0) continue; // explicit zero entries are dropped
            entries.push_back({i - 1, j - 1, v});
            if (header.symmetric && i != j) entries.push_back({j - 1, i - 1, v});
        }
    } else {
        size_line >> m >> n;
        if (size_line.fail() || m < 1 || n < 1) {
            throw std::runtime_error(path + ": malformed size line");
        }
        if (header.symmetric && m != n) {
            throw std::runtime_error(path + ": symmetric matrix must be square");
        }
        // array format: column-major scan, lower triangle only when symmetric
        for (int j = 0; j < n; ++j) {
            for (int i = header.symmetric ? j : 0; i < m; ++i) {
                if (!next_data_line(in, line)) {
                    throw std::runtime_error(path + ": fewer values than declared");
                }
                std::istringstream entry(line);
                double v = 0.0;
                entry >> v;
                if (entry.fail()) throw std::runtime_error(path + ": malformed value line");
                if (v == 0.0) continue;
                entries.push_back({i, j, v});
                if (header.symmetric && i != j) entries.push_back({j, i, v});
            }
        }
    }

    // duplicate detection before any zero-row filtering
    std::sort(entries.begin(), entries.end(),
              [](const RowMatrix::Triplet& a, const RowMatrix::Triplet& b) {
                  return a.row != b.row ? a.row < b.row : a.col < b.col;
              });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col) {
            throw std::runtime_error(path + ": duplicate coordinate entry");
        }
    }

    // rows with no surviving entry are filtered out and reported
    std::vector<char> row_used(static_cast<std::size_t>(m), 0);
    for (const auto& t : entries) row_used[static_cast<std::size_t>(t.row)] = 1;
    int kept = 0;
    std::vector<int> remap(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i) {
        if (row_used[static_cast<std::size_t>(i)]) remap[static_cast<std::size_t>(i)] = kept++;
    }
    const int dropped = m - kept;
    if (dropped_zero_rows != nullptr) *dropped_zero_rows = dropped;
    if (kept == 0) throw std::runtime_error(path + ": matrix has no nonzero entries");
    if (dropped > 0) {
        for (auto& t : entries) t.row = remap[static_cast<std::size_t>(t.row)];
        m = kept;
    }

    return RowMatrix::from_triplets(m, n, std::move(entries));
}

void write_matrix_market(const RowMatrix& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.rows() << " " << A.cols() << " " << A.nnz() << "\n";
    char buf[64];
    for (int i = 0; i < A.rows(); ++i) {
        if (A.is_sparse()) {
            const auto cols = A.row_cols(i);
            const auto vals = A.row_vals(i);
            for (std::size_t p = 0; p < cols.size(); ++p) {
                std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i + 1, cols[p] + 1, vals[p]);
                out << buf;
            }
        } else {
            const auto vals = A.row_vals(i);
            for (int j = 0; j < A.cols(); ++j) {
                std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i + 1, j + 1,
                              vals[static_cast<std::size_t>(j)]);
                out << buf;
            }
        }
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

} // namespace kaczmarz
