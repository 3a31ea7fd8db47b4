#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wsal/matrix.hpp"

namespace wsal {

struct Dataset {
    Matrix features;
    std::vector<int> labels;
    int k = 0;
    std::vector<std::string> feature_names;
    /// Original label strings; label_names[i] maps to integer label i.
    std::vector<std::string> label_names;
    std::string label_column = "label";

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t dim() const noexcept { return features.cols(); }

    /// Throws InvalidArgument if shapes disagree, a label is outside [0, k) or a feature is non-finite.
    void validate() const;
};

/// Header-mandatory, comma-separated numeric CSV. Labels are mapped to 0..k-1
/// in first-appearance order.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column);

/// Writes features with round-trip precision, label column last.
void save_csv(const Dataset& ds, const std::filesystem::path& path);

/// JSON sidecar listing original label string -> integer index.
void save_label_manifest(const Dataset& ds, const std::filesystem::path& path);

/// FNV-1a over shape, feature bytes and labels.
std::uint64_t dataset_checksum(const Dataset& ds);

struct StandardizationParams {
    std::vector<double> means;
    std::vector<double> stds;
};

/// Per-column mean and population std (divisor n); zero std becomes 1.
StandardizationParams standardize_fit(const Matrix& rows);

Matrix standardize_apply(const StandardizationParams& params, const Matrix& features);

} // namespace wsal
