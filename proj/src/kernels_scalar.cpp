// SPDX-License-Identifier: Apache-2.0
//
// Scalar reference kernels. These define the semantics the SIMD variants are
// equivalence-tested against.

#include "dmimo/kernels.hpp"

namespace dmimo::kernels {

namespace scalar {

cd cdotc(std::size_t n, const cd* a, const cd* b) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void axpy(std::size_t n, cd alpha, const cd* x, cd* y) {
    const double wr = alpha.real(), wi = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cd{wr * xr - wi * xi, wr * xi + wi * xr};
    }
}

double sum_abs2(std::size_t n, const cd* a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    }
    return acc;
}

void crot(std::size_t n, cd* u, cd* v, double c, cd s) {
    const double sr = s.real(), si = s.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double ur = u[i].real(), ui = u[i].imag();
        const double vr = v[i].real(), vi = v[i].imag();
        u[i] = cd{c * ur + sr * vr - si * vi, c * ui + sr * vi + si * vr};
        v[i] = cd{c * vr - sr * ur - si * ui, c * vi - sr * ui + si * ur};
    }
}

}  // namespace scalar

const Table& scalar_table() {
    static const Table t{scalar::cdotc, scalar::axpy, scalar::sum_abs2, scalar::crot,
                         "scalar"};
    return t;
}

}  // namespace dmimo::kernels
