#include "toepspec/matrix.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace toepspec {

namespace {

constexpr std::array<char, 5> kMagic = {'C', 'M', 'A', 'T', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (std::size_t b = 0; b < 8; ++b) {
        bytes[b] = static_cast<char>((v >> (8 * b)) & 0xffU);
    }
    os.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& is) {
    std::array<unsigned char, 8> bytes{};
    is.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!is) {
        throw std::runtime_error("CMAT1: truncated header");
    }
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < 8; ++b) {
        v |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    }
    return v;
}

void put_f64(std::ostream& os, double x) { put_u64(os, std::bit_cast<std::uint64_t>(x)); }

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("ComplexMatrix: data length != rows*cols");
    }
    for (const auto& v : data_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("ComplexMatrix: non-finite entry");
        }
    }
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        m(i, i) = diag[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    const std::size_t n = std::min(rows_, cols_);
    for (std::size_t i = 0; i < n; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

ComplexMatrix ComplexMatrix::select(std::span<const std::size_t> rows,
                                    std::span<const std::size_t> cols) const {
    ComplexMatrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= rows_) {
            throw std::out_of_range("ComplexMatrix::select: row index");
        }
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j] >= cols_) {
                throw std::out_of_range("ComplexMatrix::select: column index");
            }
            out(i, j) = (*this)(rows[i], cols[j]);
        }
    }
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& v : data_) {
        v *= scale;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("multiply: inner dimensions differ");
    }
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            const auto brow = b.row(k);
            for (std::size_t j = 0; j < brow.size(); ++j) {
                out[j] += aik * brow[j];
            }
        }
    }
    return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) {
        worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
    }
    return worst;
}

void write_binary(std::ostream& os, const ComplexMatrix& m) {
    os.write(kMagic.data(), kMagic.size());
    put_u64(os, m.rows());
    put_u64(os, m.cols());
    for (const auto& v : m.data()) {
        put_f64(os, v.real());
        put_f64(os, v.imag());
    }
    if (!os) {
        throw std::runtime_error("CMAT1: write failed");
    }
}

ComplexMatrix read_binary(std::istream& is) {
    std::array<char, 5> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kMagic) {
        throw std::runtime_error("CMAT1: bad magic");
    }
    const std::uint64_t rows = get_u64(is);
    const std::uint64_t cols = get_u64(is);
    if (cols != 0 && rows > (std::uint64_t{1} << 40) / cols) {
        throw std::runtime_error("CMAT1: implausible dimensions");
    }
    std::vector<Complex> data(rows * cols);
    for (auto& v : data) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        v = {re, im};
    }
    return {rows, cols, std::move(data)};
}

void save_binary(const std::string& path, const ComplexMatrix& m) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_binary(os, m);
}

ComplexMatrix load_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot open " + path);
    }
    return read_binary(is);
}

}  // namespace toepspec
