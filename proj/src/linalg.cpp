// SPDX-License-Identifier: Apache-2.0

#include "dmimo/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "dmimo/kernels.hpp"

namespace dmimo {

namespace {

const kernels::Table& kern() { return kernels::active(); }

double sign_or_one(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

CMatrix multiply(const CMatrix& a, const CMatrix& b) {
    assert(a.cols() == b.rows());
    CMatrix c(a.rows(), b.cols());
    const auto n = static_cast<std::size_t>(a.rows());
    for (int j = 0; j < b.cols(); ++j) {
        for (int k = 0; k < b.rows(); ++k) {
            if (b(k, j) != 0.0) {
                kern().axpy(n, b(k, j), a.col(k), c.col(j));
            }
        }
    }
    return c;
}

CMatrix adjoint_multiply(const CMatrix& a, const CMatrix& b) {
    assert(a.rows() == b.rows());
    CMatrix c(a.cols(), b.cols());
    const auto n = static_cast<std::size_t>(a.rows());
    for (int j = 0; j < b.cols(); ++j) {
        for (int i = 0; i < a.cols(); ++i) {
            c(i, j) = kern().cdotc(n, a.col(i), b.col(j));
        }
    }
    return c;
}

CMatrix outer_self_adjoint(const CMatrix& a, double diag_shift) {
    const int m = a.rows();
    CMatrix g(m, m);
    const auto n = static_cast<std::size_t>(m);
    for (int k = 0; k < a.cols(); ++k) {
        for (int c = 0; c < m; ++c) {
            kern().axpy(n, std::conj(a(c, k)), a.col(k), g.col(c));
        }
    }
    for (int i = 0; i < m; ++i) {
        g(i, i) += diag_shift;
    }
    return g;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix t(a.cols(), a.rows());
    for (int j = 0; j < a.cols(); ++j) {
        for (int i = 0; i < a.rows(); ++i) {
            t(j, i) = std::conj(a(i, j));
        }
    }
    return t;
}

cd trace(const CMatrix& a) {
    cd t = 0.0;
    for (int i = 0; i < std::min(a.rows(), a.cols()); ++i) {
        t += a(i, i);
    }
    return t;
}

double frobenius_norm(const CMatrix& a) {
    return std::sqrt(kern().sum_abs2(a.size(), a.data()));
}

double max_abs(const CMatrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.data()[i]));
    }
    return m;
}

bool cholesky_factor(CMatrix& a) {
    const int n = a.rows();
    assert(n == a.cols());
    for (int j = 0; j < n; ++j) {
        // Left-looking column update from the already-factored columns.
        for (int k = 0; k < j; ++k) {
            kern().axpy(static_cast<std::size_t>(n - j), -std::conj(a(j, k)), &a(j, k), &a(j, j));
        }
        const double pivot = a(j, j).real();
        if (!(pivot > 0.0)) {
            return false;
        }
        const double d = std::sqrt(pivot);
        a(j, j) = d;
        const double inv = 1.0 / d;
        for (int i = j + 1; i < n; ++i) {
            a(i, j) *= inv;
        }
        for (int i = 0; i < j; ++i) {
            a(i, j) = 0.0;  // keep the factor clean for later column ops
        }
    }
    return true;
}

void cholesky_solve_inplace(const CMatrix& chol, CMatrix& b) {
    const int n = chol.rows();
    assert(b.rows() == n);
    for (int rhs = 0; rhs < b.cols(); ++rhs) {
        cd* x = b.col(rhs);
        // Forward: L y = b (right-looking, contiguous column tails).
        for (int j = 0; j < n; ++j) {
            x[j] /= chol(j, j).real();
            if (j + 1 < n) {
                kern().axpy(static_cast<std::size_t>(n - j - 1), -x[j], &chol(j + 1, j), &x[j + 1]);
            }
        }
        // Backward: L^H x = y (conjugated column-tail dots).
        for (int j = n - 1; j >= 0; --j) {
            const cd s = (j + 1 < n)
                             ? kern().cdotc(static_cast<std::size_t>(n - j - 1), &chol(j + 1, j), &x[j + 1])
                             : cd{0.0};
            x[j] = (x[j] - s) / chol(j, j).real();
        }
    }
}

CMatrix solve_hermitian_pd(const CMatrix& a, const CMatrix& b) {
    CMatrix factor = a;
    if (!cholesky_factor(factor)) {
        throw numerical_error("Cholesky breakdown on a matrix expected to be positive definite");
    }
    CMatrix x = b;
    cholesky_solve_inplace(factor, x);
    // One refinement step; the residual b - A x is recomputed from the
    // original matrix, so the solve meets the 1e-10*||b|| contract even for
    // ill-conditioned systems.
    CMatrix residual = b;
    const auto n = static_cast<std::size_t>(a.rows());
    for (int j = 0; j < x.cols(); ++j) {
        for (int k = 0; k < a.cols(); ++k) {
            kern().axpy(n, -x(k, j), a.col(k), residual.col(j));
        }
    }
    cholesky_solve_inplace(factor, residual);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x.data()[i] += residual.data()[i];
    }
    return x;
}

QrPivoted qr_factor_pivoted(CMatrix a) {
    const int m = a.rows();
    const int k = a.cols();
    assert(m >= k);
    QrPivoted f;
    f.tau.assign(k, 0.0);
    f.perm.resize(k);
    for (int j = 0; j < k; ++j) f.perm[j] = j;

    for (int j = 0; j < k; ++j) {
        // Column pivot: largest remaining norm.
        int best = j;
        double best_norm = -1.0;
        for (int c = j; c < k; ++c) {
            const double nrm = kern().sum_abs2(static_cast<std::size_t>(m - j), &a(j, c));
            if (nrm > best_norm) {
                best_norm = nrm;
                best = c;
            }
        }
        if (best != j) {
            for (int r = 0; r < m; ++r) std::swap(a(r, j), a(r, best));
            std::swap(f.perm[j], f.perm[best]);
        }

        const auto len = static_cast<std::size_t>(m - j);
        const double xnorm = std::sqrt(kern().sum_abs2(len, &a(j, j)));
        if (xnorm == 0.0) {
            f.tau[j] = 0.0;
            continue;
        }
        const cd alpha = a(j, j);
        const double aabs = std::abs(alpha);
        const cd phase = (aabs == 0.0) ? cd{1.0} : alpha / aabs;
        const cd beta = -phase * xnorm;

        // u = x - beta*e1, stored scaled so u(0) = 1; H = I - tau u u^H.
        const cd u0 = alpha - beta;
        const double u0abs2 = std::norm(u0);
        const double unorm2 = u0abs2 + (xnorm * xnorm - std::norm(alpha));
        const double tau = 2.0 * u0abs2 / unorm2;
        a(j, j) = 1.0;
        const cd inv_u0 = cd{1.0} / u0;
        for (int r = j + 1; r < m; ++r) a(r, j) *= inv_u0;

        for (int c = j + 1; c < k; ++c) {
            const cd w = kern().cdotc(len, &a(j, j), &a(j, c));
            kern().axpy(len, -tau * w, &a(j, j), &a(j, c));
        }
        f.tau[j] = tau;
        a(j, j) = beta;  // diagonal of R; reflector's unit head is implicit
    }
    f.qr = std::move(a);
    return f;
}

CMatrix qr_economy_q(const QrPivoted& f) {
    const int m = f.qr.rows();
    const int k = f.qr.cols();
    CMatrix q(m, k);
    for (int j = 0; j < k; ++j) q(j, j) = 1.0;
    std::vector<cd> w(m);
    for (int j = k - 1; j >= 0; --j) {
        if (f.tau[j] == 0.0) continue;
        const auto len = static_cast<std::size_t>(m - j);
        w[0] = 1.0;  // the stored reflector's unit head is implicit
        std::copy_n(f.qr.col(j) + j + 1, m - j - 1, w.begin() + 1);
        for (int c = 0; c < k; ++c) {
            const cd dot = kern().cdotc(len, w.data(), &q(j, c));
            if (dot != 0.0) {
                kern().axpy(len, -f.tau[j] * dot, w.data(), &q(j, c));
            }
        }
    }
    return q;
}

void solve_upper_adjoint_inplace(const CMatrix& r, CMatrix& b) {
    const int n = r.cols();
    assert(b.rows() == n);
    for (int rhs = 0; rhs < b.cols(); ++rhs) {
        cd* x = b.col(rhs);
        for (int i = 0; i < n; ++i) {
            const cd s = (i > 0) ? kern().cdotc(static_cast<std::size_t>(i), r.col(i), x) : cd{0.0};
            x[i] = (x[i] - s) / std::conj(r(i, i));
        }
    }
}

EigHermitian eig_hermitian(CMatrix a) {
    const int n = a.rows();
    assert(n == a.cols());
    CMatrix v = CMatrix::identity(n);
    const double scale = frobenius_norm(a);
    const double stop = 1e-15 * (scale > 0.0 ? scale : 1.0);

    for (int sweep = 0; sweep < 40; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                off += 2.0 * std::norm(a(p, q));
            }
        }
        if (std::sqrt(off) <= stop) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cd apq = a(p, q);
                const double gabs = std::abs(apq);
                if (gabs <= stop / n) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const cd phase = apq / gabs;

                const double tau = (aqq - app) / (2.0 * gabs);
                const double t = sign_or_one(tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Two-sided rotation J^H A J with J = [[c, s*phase], [-s*conj(phase), c]]:
                // update columns p,q, mirror rows from Hermitian symmetry, and set
                // the 2x2 block in closed form.
                const cd srot = -s * std::conj(phase);
                kern().crot(static_cast<std::size_t>(n), a.col(p), a.col(q), c, srot);
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    a(p, r) = std::conj(a(r, p));
                    a(q, r) = std::conj(a(r, q));
                }
                a(p, p) = app - t * gabs;
                a(q, q) = aqq + t * gabs;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                kern().crot(static_cast<std::size_t>(n), v.col(p), v.col(q), c, srot);
            }
        }
    }

    EigHermitian out;
    out.values.resize(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) {
        out.values[i] = a(i, i).real();
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });
    EigHermitian sorted;
    sorted.values.resize(n);
    sorted.vectors = CMatrix(n, n);
    for (int i = 0; i < n; ++i) {
        sorted.values[i] = a(order[i], order[i]).real();
        std::copy_n(v.col(order[i]), n, sorted.vectors.col(i));
    }
    return sorted;
}

std::vector<double> singular_values(CMatrix a) {
    if (a.rows() < a.cols()) {
        a = adjoint(a);
    }
    const int m = a.rows();
    const int k = a.cols();
    const auto len = static_cast<std::size_t>(m);

    bool converged = false;
    for (int sweep = 0; sweep < 60 && !converged; ++sweep) {
        converged = true;
        for (int i = 0; i < k - 1; ++i) {
            for (int j = i + 1; j < k; ++j) {
                const double na = kern().sum_abs2(len, a.col(i));
                const double nb = kern().sum_abs2(len, a.col(j));
                if (na == 0.0 || nb == 0.0) continue;
                const cd g = kern().cdotc(len, a.col(i), a.col(j));
                const double gabs = std::abs(g);
                if (gabs <= 1e-15 * std::sqrt(na * nb)) continue;
                converged = false;

                // Rotate column j's phase so the pair needs only a real rotation.
                const cd phase = std::conj(g) / gabs;
                if (phase != cd{1.0}) {
                    cd* cj = a.col(j);
                    for (int r = 0; r < m; ++r) cj[r] *= phase;
                }
                const double tau = (nb - na) / (2.0 * gabs);
                const double t = sign_or_one(tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                kern().crot(len, a.col(i), a.col(j), c, cd{-s});
            }
        }
    }

    std::vector<double> sv(k);
    for (int j = 0; j < k; ++j) {
        sv[j] = std::sqrt(kern().sum_abs2(len, a.col(j)));
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    // Values at rounding level relative to sigma_max carry no significant
    // digits; snap them to exact zero so exact rank deficiency is reported
    // as such regardless of FMA contraction in the rotation kernels.
    const double floor = static_cast<double>(m) * 2.220446049250313e-16 * sv[0];
    for (double& s : sv) {
        if (s < floor) s = 0.0;
    }
    return sv;
}

CMatrix principal_sqrt_psd(const CMatrix& a) {
    EigHermitian e = eig_hermitian(a);
    const int n = a.rows();
    // Negative eigenvalues of a PSD input are rounding noise; clamp at zero.
    CMatrix w = e.vectors;
    for (int j = 0; j < n; ++j) {
        const double root = e.values[j] > 0.0 ? std::sqrt(e.values[j]) : 0.0;
        for (int r = 0; r < n; ++r) w(r, j) *= root;
    }
    return multiply(w, adjoint(e.vectors));
}

}  // namespace dmimo
