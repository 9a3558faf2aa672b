// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "dmimo/linalg.hpp"
#include "dmimo/rng.hpp"

using dmimo::cd;
using dmimo::CMatrix;
using dmimo::Stream;
using dmimo::StreamPurpose;

namespace {

CMatrix random_matrix(int rows, int cols, Stream& stream) {
    CMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) {
            m(i, j) = stream.normal_complex();
        }
    }
    return m;
}

// Plain triple-loop product, independent of the kernel lane.
CMatrix naive_multiply(const CMatrix& a, const CMatrix& b) {
    CMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) {
            cd acc = 0.0;
            for (int k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    }
    return c;
}

// Modified Gram-Schmidt with reorthogonalization; unitarity is asserted, not
// assumed, so the construction needs no trust.
CMatrix random_unitary(int n, Stream& stream) {
    CMatrix q = random_matrix(n, n, stream);
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < j; ++k) {
                cd proj = 0.0;
                for (int i = 0; i < n; ++i) proj += std::conj(q(i, k)) * q(i, j);
                for (int i = 0; i < n; ++i) q(i, j) -= proj * q(i, k);
            }
            double norm = 0.0;
            for (int i = 0; i < n; ++i) norm += std::norm(q(i, j));
            norm = std::sqrt(norm);
            for (int i = 0; i < n; ++i) q(i, j) /= norm;
        }
    }
    return q;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("products match the naive reference") {
    Stream stream(21, StreamPurpose::kTest);
    const CMatrix a = random_matrix(9, 5, stream);
    const CMatrix b = random_matrix(5, 7, stream);
    CHECK(max_abs_diff(multiply(a, b), naive_multiply(a, b)) < 1e-12);

    const CMatrix c = random_matrix(9, 4, stream);
    CHECK(max_abs_diff(adjoint_multiply(a, c), naive_multiply(dmimo::adjoint(a), c)) < 1e-12);

    const CMatrix g = dmimo::outer_self_adjoint(a, 0.25);
    CMatrix g_ref = naive_multiply(a, dmimo::adjoint(a));
    for (int i = 0; i < g_ref.rows(); ++i) g_ref(i, i) += 0.25;
    CHECK(max_abs_diff(g, g_ref) < 1e-12);
}

TEST_CASE("cholesky solve meets the residual contract") {
    Stream stream(22, StreamPurpose::kTest);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(stream.next_u64() % 15);
        const CMatrix base = random_matrix(n, n, stream);
        // Diagonal shifts from 1.0 down to 1e-6 push the conditioning up to
        // roughly the regime the MMSE regularizer can produce.
        const double shift = std::pow(10.0, -6.0 * (trial % 4) / 3.0);
        const CMatrix a = dmimo::outer_self_adjoint(base, shift);
        const CMatrix b = random_matrix(n, 3, stream);

        const CMatrix x = dmimo::solve_hermitian_pd(a, b);
        CMatrix residual = b;
        const CMatrix ax = multiply(a, x);
        for (std::size_t i = 0; i < residual.size(); ++i) residual.data()[i] -= ax.data()[i];
        CHECK(dmimo::frobenius_norm(residual) <= 1e-10 * dmimo::frobenius_norm(b));
    }
}

TEST_CASE("cholesky reports indefinite matrices") {
    CMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    CHECK(!dmimo::cholesky_factor(a));
}

TEST_CASE("pivoted QR reconstructs and Q is orthonormal") {
    Stream stream(23, StreamPurpose::kTest);
    const CMatrix a = random_matrix(12, 8, stream);
    const dmimo::QrPivoted f = dmimo::qr_factor_pivoted(a);
    const CMatrix q = dmimo::qr_economy_q(f);

    const CMatrix qhq = adjoint_multiply(q, q);
    CHECK(max_abs_diff(qhq, CMatrix::identity(8)) < 1e-13);

    // Q R should equal A with columns permuted.
    CMatrix r(8, 8);
    for (int j = 0; j < 8; ++j) {
        for (int i = 0; i <= j; ++i) r(i, j) = f.qr(i, j);
    }
    const CMatrix qr = multiply(q, r);
    for (int j = 0; j < 8; ++j) {
        for (int i = 0; i < 12; ++i) {
            CHECK(std::abs(qr(i, j) - a(i, f.perm[j])) < 1e-12);
        }
    }

    // Pivoting puts the largest column first.
    for (std::size_t j = 1; j < f.tau.size(); ++j) {
        CHECK(std::abs(f.qr(0, 0)) >= std::abs(f.qr(j, j)) - 1e-12);
    }
}

TEST_CASE("triangular adjoint solve meets the residual contract") {
    Stream stream(24, StreamPurpose::kTest);
    const CMatrix a = random_matrix(10, 6, stream);
    const dmimo::QrPivoted f = dmimo::qr_factor_pivoted(a);
    CMatrix x = CMatrix::identity(6);
    dmimo::solve_upper_adjoint_inplace(f.qr, x);
    // residual of R^H X = I
    CMatrix r(6, 6);
    for (int j = 0; j < 6; ++j) {
        for (int i = 0; i <= j; ++i) r(i, j) = f.qr(i, j);
    }
    CMatrix res = multiply(dmimo::adjoint(r), x);
    for (int i = 0; i < 6; ++i) res(i, i) -= 1.0;
    CHECK(dmimo::frobenius_norm(res) <= 1e-10 * std::sqrt(6.0));
}

TEST_CASE("hermitian eigensolver recovers a constructed spectrum") {
    Stream stream(25, StreamPurpose::kTest);
    const int n = 16;
    const CMatrix q = random_unitary(n, stream);
    std::vector<double> lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = -3.0 + 0.5 * i;  // distinct, mixed sign

    CMatrix scaled = q;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) scaled(i, j) *= lambda[j];
    }
    const CMatrix a = multiply(scaled, dmimo::adjoint(q));

    const dmimo::EigHermitian e = dmimo::eig_hermitian(a);
    for (int i = 0; i < n; ++i) {
        CHECK(e.values[i] == doctest::Approx(lambda[i]).epsilon(1e-10));
    }
    // Residual A V = V diag(lambda)
    CMatrix av = multiply(a, e.vectors);
    CMatrix vl = e.vectors;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) vl(i, j) *= e.values[j];
    }
    CHECK(max_abs_diff(av, vl) < 1e-9);
}

TEST_CASE("singular values of a constructed factorization") {
    Stream stream(26, StreamPurpose::kTest);
    const int m = 12, k = 6;
    const CMatrix u = random_unitary(m, stream);
    const CMatrix v = random_unitary(k, stream);
    std::vector<double> sigma = {9.0, 5.5, 2.0, 1.0, 0.25, 0.03125};

    CMatrix us(m, k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < m; ++i) us(i, j) = u(i, j) * sigma[j];
    }
    const CMatrix a = multiply(us, dmimo::adjoint(v));
    const std::vector<double> sv = dmimo::singular_values(a);
    REQUIRE(sv.size() == sigma.size());
    for (std::size_t i = 0; i < sv.size(); ++i) {
        CHECK(sv[i] == doctest::Approx(sigma[i]).epsilon(1e-11));
    }

    // Wide inputs go through the adjoint; same singular values.
    const std::vector<double> sv_wide = dmimo::singular_values(dmimo::adjoint(a));
    for (std::size_t i = 0; i < sv.size(); ++i) {
        CHECK(sv_wide[i] == doctest::Approx(sigma[i]).epsilon(1e-11));
    }
}

TEST_CASE("duplicated columns yield an exact zero singular value") {
    Stream stream(27, StreamPurpose::kTest);
    CMatrix a = random_matrix(8, 3, stream);
    for (int i = 0; i < 8; ++i) a(i, 2) = a(i, 1);
    const std::vector<double> sv = dmimo::singular_values(a);
    CHECK(sv.back() == 0.0);
}

TEST_CASE("principal square root squares back") {
    Stream stream(28, StreamPurpose::kTest);
    const CMatrix base = random_matrix(10, 10, stream);
    const CMatrix a = dmimo::outer_self_adjoint(base, 0.0);  // PSD
    const CMatrix s = dmimo::principal_sqrt_psd(a);
    CHECK(max_abs_diff(multiply(s, s), a) < 1e-9 * dmimo::frobenius_norm(a));
}

}  // TEST_SUITE
