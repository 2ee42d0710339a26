#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace posync {

using Vector = std::vector<double>;

/// Dense real matrix, row-major. Construction with zero rows or columns is
/// rejected; all arithmetic checks dimensions and throws std::invalid_argument
/// on mismatch.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diag(const Vector& d);
    static Matrix column(const Vector& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix transpose() const;
    Matrix abs() const;

    /// max absolute row sum
    double inf_norm() const;
    /// max absolute column sum
    double one_norm() const;
    double max_abs() const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double c);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double c) { return a *= c; }
    friend Matrix operator*(double c, Matrix a) { return a *= c; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Vector operator*(const Matrix& a, const Vector& v);

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// true iff every off-diagonal entry of the square matrix is >= -tol
bool is_metzler(const Matrix& m, double tol = 0.0);

/// true iff every entry is >= -tol (the zero matrix counts as nonnegative)
bool is_nonnegative(const Matrix& m, double tol = 0.0);

/// Kronecker product; block (i,j) of the result equals x(i,j) * y.
Matrix kron(const Matrix& x, const Matrix& y);

double dot(const Vector& a, const Vector& b);
double vec_inf_norm(const Vector& v);
Vector vec_sub(const Vector& a, const Vector& b);

} // namespace posync
