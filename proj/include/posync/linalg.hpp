#pragma once

#include <cstddef>
#include <stdexcept>

#include "posync/matrix.hpp"

namespace posync {

struct EigenDecomposition {
    Vector eigenvalues;  // ascending
    Matrix eigenvectors; // orthonormal columns, column k pairs with eigenvalues[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Throws
/// std::invalid_argument if the input is asymmetric beyond sym_tol.
EigenDecomposition sym_eigen(const Matrix& m, double sym_tol = 1e-9);

/// e^{Mt} by scaling-and-squaring with a degree-13 Taylor core.
/// expm(M, 0) is exactly the identity.
Matrix expm(const Matrix& m, double t);

struct Trajectory {
    Vector times;
    std::vector<Vector> states;
};

struct DivergenceError : std::runtime_error {
    double first_bad_time;
    explicit DivergenceError(double t);
};

// Data-parallel kernels behind the RK4 integrator. The OpenMP version splits
// by row, so it produces bit-identical results to the serial reference.
void matvec_serial(const Matrix& m, const double* x, double* y);
void matvec_parallel(const Matrix& m, const double* x, double* y);

enum class Kernel { Serial, Parallel };

/// One classical RK4 step of xdot = M x, in place. scratch must hold 4*dim.
void rk4_step(const Matrix& m, double dt, Vector& x, Vector& scratch, Kernel kernel);

/// Fixed-step RK4 integration of xdot = M x, sampling every output_stride-th
/// step (t = 0 and t_end always included). Throws DivergenceError when a
/// state entry becomes NaN/Inf.
Trajectory integrate_linear(const Matrix& m, const Vector& x0, double t_end, double dt,
                            std::size_t output_stride = 1, Kernel kernel = Kernel::Parallel);

} // namespace posync
