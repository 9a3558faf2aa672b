// SPDX-License-Identifier: Apache-2.0
//
// Equivalence of every SIMD kernel variant against the scalar reference.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "dmimo/kernels.hpp"
#include "dmimo/rng.hpp"

using dmimo::Stream;
using dmimo::StreamPurpose;
using dmimo::kernels::cd;

namespace {

std::vector<cd> random_vector(std::size_t n, Stream& stream) {
    std::vector<cd> v(n);
    for (auto& x : v) x = stream.normal_complex();
    return v;
}

bool close(cd a, cd b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("simd variants match the scalar reference") {
    const auto& scalar = dmimo::kernels::scalar_table();
    const auto* avx2 = dmimo::kernels::avx2_table();
    if (avx2 == nullptr) {
        MESSAGE("no AVX2 build on this platform; scalar-only");
        return;
    }

    Stream stream(7, StreamPurpose::kTest);
    // Odd lengths exercise the scalar tails.
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{7}, std::size_t{16},
                          std::size_t{33}, std::size_t{128}}) {
        const auto a = random_vector(n, stream);
        const auto b = random_vector(n, stream);
        const double scale = std::sqrt(static_cast<double>(n));

        CHECK(close(scalar.cdotc(n, a.data(), b.data()), avx2->cdotc(n, a.data(), b.data()),
                    1e-13 * scale));
        CHECK(scalar.sum_abs2(n, a.data()) ==
              doctest::Approx(avx2->sum_abs2(n, a.data())).epsilon(1e-13));

        const cd alpha{0.3, -1.7};
        auto y1 = b, y2 = b;
        scalar.axpy(n, alpha, a.data(), y1.data());
        avx2->axpy(n, alpha, a.data(), y2.data());
        for (std::size_t i = 0; i < n; ++i) CHECK(close(y1[i], y2[i], 1e-13));

        auto u1 = a, v1 = b, u2 = a, v2 = b;
        const double c = 0.8;
        const cd s{0.36, -0.48};  // c^2 + |s|^2 = 1
        scalar.crot(n, u1.data(), v1.data(), c, s);
        avx2->crot(n, u2.data(), v2.data(), c, s);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(close(u1[i], u2[i], 1e-13));
            CHECK(close(v1[i], v2[i], 1e-13));
        }
    }
}

TEST_CASE("crot is unitary on the pair") {
    const auto& t = dmimo::kernels::active();
    Stream stream(11, StreamPurpose::kTest);
    auto u = random_vector(32, stream);
    auto v = random_vector(32, stream);
    const double before = t.sum_abs2(32, u.data()) + t.sum_abs2(32, v.data());
    t.crot(32, u.data(), v.data(), 0.6, cd{0.0, 0.8});
    const double after = t.sum_abs2(32, u.data()) + t.sum_abs2(32, v.data());
    CHECK(after == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("select() honors explicit requests") {
    REQUIRE(dmimo::kernels::select("scalar"));
    CHECK(std::string(dmimo::kernels::active().name) == "scalar");
    REQUIRE(dmimo::kernels::select("auto"));
    CHECK(!dmimo::kernels::select("not-a-kernel-set"));
}

}  // TEST_SUITE
