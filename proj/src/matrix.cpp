#include "wsal/matrix.hpp"

#include "wsal/error.hpp"

namespace wsal {

void Matrix::append_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) fail(ErrorKind::DimensionMismatch, "row width does not match matrix");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows) {
    Matrix out(rows.size(), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = m.row(rows[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

} // namespace wsal
