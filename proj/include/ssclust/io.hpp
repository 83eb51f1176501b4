#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ssclust/dataset.hpp"
#include "ssclust/errors.hpp"

namespace ssclust {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// RFC-4180-style CSV reader: comma separated, double quotes for fields
// containing commas, quotes or newlines, "" as an escaped quote. The first
// record is the required header.
inline CsvTable read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;

    auto end_field = [&] {
        record.push_back(field);
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };

    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
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
                quoted = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                end_record();
                break;
            default:
                field.push_back(ch);
        }
    }
    if (quoted) throw ParseError("unterminated quoted field");
    if (!field.empty() || !record.empty()) end_record();
    if (!any || records.empty()) throw ParseError("empty CSV input");

    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw ParseError("row " + std::to_string(r + 1) + " has " +
                                 std::to_string(records[r].size()) +
                                 " fields, header has " +
                                 std::to_string(table.header.size()),
                             static_cast<long>(r + 1));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    return read_csv(in);
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_quote(fields[i]);
    }
    out.put('\n');
}

// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s, long row, long column) {
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (s.empty() || !end || *end != '\0') {
        throw ParseError("non-numeric value '" + s + "' at row " +
                             std::to_string(row) + ", column " +
                             std::to_string(column),
                         row, column);
    }
    return v;
}

struct DatasetFile {
    Dataset dataset;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;  // label strings, first-appearance order
};

// Loads a feature CSV with an optional label column. Empty cells and the
// literal "NA" in the label column mean unlabeled; distinct label strings
// are enumerated in first-appearance order and mapped to components 1..C-1
// in that order.
inline DatasetFile load_dataset(const std::string& path,
                                const std::optional<std::string>& label_column = {}) {
    CsvTable table = read_csv_file(path);

    long label_idx = -1;
    if (label_column) {
        for (std::size_t j = 0; j < table.header.size(); ++j) {
            if (table.header[j] == *label_column) {
                label_idx = static_cast<long>(j);
                break;
            }
        }
        if (label_idx < 0) {
            throw InputError("label column '" + *label_column + "' not found");
        }
    }

    DatasetFile out;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (static_cast<long>(j) != label_idx) {
            out.feature_names.push_back(table.header[j]);
        }
    }
    if (out.feature_names.empty()) throw InputError("no feature columns");
    if (table.rows.empty()) throw InputError("no data rows");

    const int n = static_cast<int>(table.rows.size());
    const int dim = static_cast<int>(out.feature_names.size());
    Eigen::MatrixXd x(n, dim);
    std::vector<int> labels(static_cast<std::size_t>(n), kUnlabeled);

    for (int i = 0; i < n; ++i) {
        const auto& row = table.rows[static_cast<std::size_t>(i)];
        int col = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (static_cast<long>(j) == label_idx) {
                const std::string& cell = row[j];
                if (cell.empty() || cell == "NA") continue;
                auto it = std::find(out.class_names.begin(), out.class_names.end(), cell);
                if (it == out.class_names.end()) {
                    out.class_names.push_back(cell);
                    it = out.class_names.end() - 1;
                }
                labels[static_cast<std::size_t>(i)] =
                    static_cast<int>(it - out.class_names.begin());
            } else {
                x(i, col++) = parse_double(row[j], i + 2, static_cast<long>(j + 1));
            }
        }
    }

    out.dataset = Dataset::with_labels(std::move(x), std::move(labels));
    out.dataset.class_to_component.resize(out.class_names.size());
    for (std::size_t c = 0; c < out.class_names.size(); ++c) {
        out.dataset.class_to_component[c] = static_cast<int>(c);
    }
    return out;
}

}  // namespace ssclust
