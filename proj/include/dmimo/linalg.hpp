// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "dmimo/errors.hpp"

namespace dmimo {

using cd = std::complex<double>;
using CVector = std::vector<cd>;

/// Dense column-major complex matrix. Sized for this simulator's workloads
/// (tens of rows/columns), so storage is a flat vector and operations favor
/// contiguous column access, which is what the kernel lane vectorizes.
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

    static CMatrix identity(int n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    cd& operator()(int r, int c) { return data_[static_cast<std::size_t>(c) * rows_ + r]; }
    const cd& operator()(int r, int c) const { return data_[static_cast<std::size_t>(c) * rows_ + r]; }

    cd* col(int c) { return data_.data() + static_cast<std::size_t>(c) * rows_; }
    const cd* col(int c) const { return data_.data() + static_cast<std::size_t>(c) * rows_; }

    cd* data() { return data_.data(); }
    const cd* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cd> data_;
};

CMatrix multiply(const CMatrix& a, const CMatrix& b);          // A * B
CMatrix adjoint_multiply(const CMatrix& a, const CMatrix& b);  // A^H * B
CMatrix outer_self_adjoint(const CMatrix& a, double diag_shift);  // A*A^H + shift*I
CMatrix adjoint(const CMatrix& a);
cd trace(const CMatrix& a);
double frobenius_norm(const CMatrix& a);
double max_abs(const CMatrix& a);

/// In-place lower Cholesky of a Hermitian positive definite matrix (lower
/// triangle read). Returns false on a nonpositive pivot.
bool cholesky_factor(CMatrix& a);

/// Solves L L^H X = B in place given the factor from cholesky_factor.
void cholesky_solve_inplace(const CMatrix& chol, CMatrix& b);

/// Hermitian positive definite solve with one iterative refinement step;
/// keeps ||A*X - B|| well below 1e-10*||B|| even near the conditioning the
/// MMSE regularizer allows. Throws numerical_error if the factorization
/// breaks down.
CMatrix solve_hermitian_pd(const CMatrix& a, const CMatrix& b);

/// Householder QR with column pivoting. Column j of the factored matrix is
/// column perm[j] of the input; R sits in the upper triangle, the reflectors
/// (implicit unit leading entry) below it.
struct QrPivoted {
    CMatrix qr;
    std::vector<double> tau;
    std::vector<int> perm;
};
QrPivoted qr_factor_pivoted(CMatrix a);

/// Economy-size Q (rows(A) x cols(A)) of a pivoted QR factorization.
CMatrix qr_economy_q(const QrPivoted& f);

/// Solves R^H X = B in place (R upper triangular, taken from f.qr).
void solve_upper_adjoint_inplace(const CMatrix& r, CMatrix& b);

struct EigHermitian {
    std::vector<double> values;  // ascending
    CMatrix vectors;             // columns aligned with values
};

/// Cyclic complex Jacobi eigendecomposition of a Hermitian matrix.
EigHermitian eig_hermitian(CMatrix a);

/// Singular values by one-sided Jacobi, descending. Exact rank deficiency
/// (e.g. duplicated columns) yields exact zeros.
std::vector<double> singular_values(CMatrix a);

/// Principal square root of a Hermitian PSD matrix; eigenvalues below
/// rounding noise are clamped to zero.
CMatrix principal_sqrt_psd(const CMatrix& a);

}  // namespace dmimo
