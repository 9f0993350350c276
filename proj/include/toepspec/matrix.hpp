#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace toepspec {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Every kernel in the library operates on it.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);

    [[nodiscard]] static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
    [[nodiscard]] static ComplexMatrix identity(std::size_t n);
    [[nodiscard]] static ComplexMatrix diagonal(std::span<const Complex> diag);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * cols_ + j];
    }

    [[nodiscard]] std::span<Complex> row(std::size_t i) noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const Complex> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    [[nodiscard]] const std::vector<Complex>& data() const noexcept { return data_; }
    [[nodiscard]] std::vector<Complex>& data() noexcept { return data_; }

    [[nodiscard]] ComplexMatrix adjoint() const;
    [[nodiscard]] Complex trace() const;

    /// Submatrix of the given rows and columns (0-based, in the order given).
    [[nodiscard]] ComplexMatrix select(std::span<const std::size_t> rows,
                                       std::span<const std::size_t> cols) const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale);

    bool operator==(const ComplexMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

[[nodiscard]] ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
[[nodiscard]] ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
[[nodiscard]] ComplexMatrix operator*(Complex scale, ComplexMatrix m);

/// Matrix product. Zero entries of the left factor are skipped, so banded
/// operands cost O(rows * band * cols).
[[nodiscard]] ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_{i,j} |a_ij - b_ij|; shapes must agree.
[[nodiscard]] double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Binary "CMAT1" format: 5-byte magic, rows and cols as little-endian u64,
// then interleaved re/im IEEE doubles (little-endian), row-major.
void write_binary(std::ostream& os, const ComplexMatrix& m);
[[nodiscard]] ComplexMatrix read_binary(std::istream& is);
void save_binary(const std::string& path, const ComplexMatrix& m);
[[nodiscard]] ComplexMatrix load_binary(const std::string& path);

}  // namespace toepspec
