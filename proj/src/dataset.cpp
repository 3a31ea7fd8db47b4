#include "wsal/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "wsal/error.hpp"

namespace wsal {
namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

bool parse_number(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && first != last && std::isfinite(out);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void Dataset::validate() const {
    require(k >= 2, "dataset must declare at least 2 classes");
    require(features.rows() == labels.size(), "feature rows and labels differ in count");
    require(feature_names.size() == features.cols(), "feature names do not match feature columns");
    for (int y : labels) require(y >= 0 && y < k, "label outside [0, k)");
    for (double v : features.data()) require(std::isfinite(v), "non-finite feature value");
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open dataset file " + path.string());

    std::string line;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };

    if (!next_line() || line.empty()) fail(ErrorKind::EmptyFile, path.string() + ": missing header row");
    const std::vector<std::string> header = split_commas(line);

    std::size_t label_idx = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == label_column) {
            label_idx = c;
            break;
        }
    }
    if (label_idx == header.size()) {
        fail(ErrorKind::MissingColumn, path.string() + ": label column '" + label_column + "' not found in header");
    }

    Dataset ds;
    ds.label_column = label_column;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_idx) ds.feature_names.push_back(header[c]);
    }
    ds.features = Matrix(0, ds.feature_names.size());

    std::unordered_map<std::string, int> label_ids;
    std::vector<double> values(ds.feature_names.size());
    std::size_t row = 0;
    while (next_line()) {
        if (line.empty()) continue;
        ++row;
        const std::vector<std::string> cells = split_commas(line);
        if (cells.size() != header.size()) {
            fail(ErrorKind::MalformedRow, path.string() + ": row " + std::to_string(row) + " has " +
                                              std::to_string(cells.size()) + " cells, expected " +
                                              std::to_string(header.size()));
        }
        std::size_t f = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx) continue;
            if (!parse_number(cells[c], values[f])) {
                fail(ErrorKind::NonNumericCell, path.string() + ": non-numeric cell at row " + std::to_string(row) +
                                                    ", column '" + header[c] + "': '" + cells[c] + "'");
            }
            ++f;
        }
        ds.features.append_row(values);
        const std::string& label = cells[label_idx];
        auto [it, inserted] = label_ids.emplace(label, static_cast<int>(ds.label_names.size()));
        if (inserted) ds.label_names.push_back(label);
        ds.labels.push_back(it->second);
    }
    if (row == 0) fail(ErrorKind::EmptyFile, path.string() + ": no data rows");
    ds.k = static_cast<int>(ds.label_names.size());
    if (ds.k < 2) fail(ErrorKind::InvalidArgument, path.string() + ": label column has fewer than 2 distinct values");
    return ds;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    for (const auto& name : ds.feature_names) out << name << ',';
    out << ds.label_column << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (double v : ds.features.row(i)) out << format_double(v) << ',';
        const int y = ds.labels[i];
        if (static_cast<std::size_t>(y) < ds.label_names.size())
            out << ds.label_names[static_cast<std::size_t>(y)];
        else
            out << y;
        out << '\n';
    }
    if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

void save_label_manifest(const Dataset& ds, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["label_column"] = ds.label_column;
    j["labels"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < ds.label_names.size(); ++i) {
        j["labels"].push_back({{"label", ds.label_names[i]}, {"index", i}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::uint64_t dataset_checksum(const Dataset& ds) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    };
    const std::uint64_t shape[3] = {ds.features.rows(), ds.features.cols(), static_cast<std::uint64_t>(ds.k)};
    feed(shape, sizeof shape);
    feed(ds.features.data().data(), ds.features.data().size_bytes());
    feed(ds.labels.data(), ds.labels.size() * sizeof(int));
    return h;
}

StandardizationParams standardize_fit(const Matrix& rows) {
    require(rows.rows() >= 1, "standardization needs at least one row");
    const std::size_t n = rows.rows();
    const std::size_t d = rows.cols();
    StandardizationParams p{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) p.means[j] += rows(i, j);
    for (double& m : p.means) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = rows(i, j) - p.means[j];
            p.stds[j] += dev * dev;
        }
    }
    for (double& s : p.stds) {
        s = std::sqrt(s / static_cast<double>(n));
        if (s == 0.0) s = 1.0;
    }
    return p;
}

Matrix standardize_apply(const StandardizationParams& params, const Matrix& features) {
    if (params.means.size() != features.cols()) fail(ErrorKind::DimensionMismatch, "standardization width mismatch");
    Matrix out(features.rows(), features.cols());
    for (std::size_t i = 0; i < features.rows(); ++i)
        for (std::size_t j = 0; j < features.cols(); ++j)
            out(i, j) = (features(i, j) - params.means[j]) / params.stds[j];
    return out;
}

} // namespace wsal
