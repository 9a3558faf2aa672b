// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace dmimo::kernels {

using cd = std::complex<double>;

// Inner-loop primitives of the simulator. Every entry has a scalar reference
// implementation and (on x86-64) an AVX2+FMA variant; the active table is
// chosen once at startup from CPUID, overridable with DMIMO_KERNELS=scalar|avx2.
//
//   cdotc    : sum_i conj(a[i]) * b[i]
//   axpy     : y += alpha * x
//   sum_abs2 : sum_i |a[i]|^2
//   crot     : plane rotation on two vectors, c real, s complex:
//              u' = c*u + s*v ; v' = -conj(s)*u + c*v
struct Table {
    cd (*cdotc)(std::size_t n, const cd* a, const cd* b);
    void (*axpy)(std::size_t n, cd alpha, const cd* x, cd* y);
    double (*sum_abs2)(std::size_t n, const cd* a);
    void (*crot)(std::size_t n, cd* u, cd* v, double c, cd s);
    const char* name;
};

const Table& scalar_table();

/// AVX2+FMA table, or nullptr when the build or the CPU lacks support.
const Table* avx2_table();

/// Table selected at startup (CPUID + DMIMO_KERNELS override).
const Table& active();

/// Force a table at runtime (tests); pass "scalar", "avx2" or "auto".
/// Returns false if the request cannot be honored on this machine.
bool select(std::string_view name);

}  // namespace dmimo::kernels
