#include "posync/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace posync {

namespace {

double off_diagonal_fro(const Matrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

double fro_norm(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

} // namespace

EigenDecomposition sym_eigen(const Matrix& m, double sym_tol) {
    if (!m.is_square()) {
        throw std::invalid_argument("sym_eigen: matrix must be square");
    }
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(m(i, j) - m(j, i)) > sym_tol * (1.0 + m.max_abs())) {
                throw std::invalid_argument("sym_eigen: matrix is not symmetric");
            }

    Matrix a = m;
    Matrix v = Matrix::identity(n);
    const double stop = 1e-12 * std::max(fro_norm(a), 1e-300);
    const int max_sweeps = 100;

    for (int sweep = 0; sweep < max_sweeps && off_diagonal_fro(a) > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // rotate rows/columns p and q
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    // sort ascending, permuting the eigenvector columns along
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&a](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    EigenDecomposition out{Vector(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

Matrix expm(const Matrix& m, double t) {
    if (!m.is_square()) {
        throw std::invalid_argument("expm: matrix must be square");
    }
    const std::size_t n = m.rows();
    Matrix mt = m;
    mt *= t;

    int k = 0;
    double norm = mt.one_norm();
    while (norm > 0.5) {
        norm /= 2.0;
        ++k;
    }
    const double scale = std::ldexp(1.0, -k);
    mt *= scale;

    // degree-13 Taylor of the scaled matrix
    Matrix result = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int j = 1; j <= 13; ++j) {
        term = term * mt;
        term *= 1.0 / j;
        result += term;
    }
    for (int j = 0; j < k; ++j) result = result * result;
    return result;
}

DivergenceError::DivergenceError(double t)
    : std::runtime_error("state diverged (NaN/Inf) at t = " + std::to_string(t)),
      first_bad_time(t) {}

void matvec_serial(const Matrix& m, const double* x, double* y) {
    const std::size_t rows = m.rows(), cols = m.cols();
    const double* a = m.data().data();
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = a + i * cols;
        double s = 0.0;
        for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
}

void matvec_parallel(const Matrix& m, const double* x, double* y) {
    const std::size_t rows = m.rows(), cols = m.cols();
    const double* a = m.data().data();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = a + i * cols;
        double s = 0.0;
        for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
}

void rk4_step(const Matrix& m, double dt, Vector& x, Vector& scratch, Kernel kernel) {
    const std::size_t n = x.size();
    if (scratch.size() < 4 * n) scratch.resize(4 * n);
    double* k1 = scratch.data();
    double* k2 = k1 + n;
    double* k3 = k2 + n;
    double* tmp = k3 + n;
    auto mv = kernel == Kernel::Parallel ? matvec_parallel : matvec_serial;

    mv(m, x.data(), k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    mv(m, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    mv(m, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) {
        tmp[i] = x[i] + dt * k3[i];
        // fold k3 into k2 so tmp can hold k4 next
        k2[i] = k2[i] + k3[i];
    }
    mv(m, tmp, k3); // k3 now holds k4
    for (std::size_t i = 0; i < n; ++i) {
        x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + k3[i]);
    }
}

Trajectory integrate_linear(const Matrix& m, const Vector& x0, double t_end, double dt,
                            std::size_t output_stride, Kernel kernel) {
    if (!m.is_square()) {
        throw std::invalid_argument("integrate_linear: matrix must be square");
    }
    if (m.rows() != x0.size()) {
        throw std::invalid_argument("integrate_linear: state dimension mismatch");
    }
    if (dt <= 0.0 || t_end <= 0.0 || dt > t_end) {
        throw std::invalid_argument("integrate_linear: need 0 < dt <= t_end");
    }
    if (output_stride == 0) {
        throw std::invalid_argument("integrate_linear: output_stride must be >= 1");
    }

    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    const double h = t_end / static_cast<double>(steps);

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(x0);

    Vector x = x0;
    Vector scratch;
    for (std::size_t step = 1; step <= steps; ++step) {
        rk4_step(m, h, x, scratch, kernel);
        const double t = h * static_cast<double>(step);
        for (double v : x) {
            if (!std::isfinite(v)) throw DivergenceError(t);
        }
        if (step % output_stride == 0 || step == steps) {
            traj.times.push_back(t);
            traj.states.push_back(x);
        }
    }
    return traj;
}

} // namespace posync
