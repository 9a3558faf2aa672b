// SPDX-License-Identifier: Apache-2.0

#include "dmimo/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace dmimo::kernels {

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Table* pick_auto() {
    if (const Table* t = avx2_table(); t != nullptr && cpu_has_avx2_fma()) {
        return t;
    }
    return &scalar_table();
}

const Table* pick_startup() {
    if (const char* env = std::getenv("DMIMO_KERNELS")) {
        const std::string_view want{env};
        if (want == "scalar") {
            return &scalar_table();
        }
        if (want == "avx2" && avx2_table() != nullptr && cpu_has_avx2_fma()) {
            return avx2_table();
        }
        // Unknown or unsupported request falls through to auto-detection.
    }
    return pick_auto();
}

std::atomic<const Table*>& slot() {
    static std::atomic<const Table*> s{pick_startup()};
    return s;
}

}  // namespace

const Table& active() { return *slot().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
    if (name == "scalar") {
        slot().store(&scalar_table(), std::memory_order_relaxed);
        return true;
    }
    if (name == "avx2") {
        if (avx2_table() == nullptr || !cpu_has_avx2_fma()) {
            return false;
        }
        slot().store(avx2_table(), std::memory_order_relaxed);
        return true;
    }
    if (name == "auto") {
        slot().store(pick_auto(), std::memory_order_relaxed);
        return true;
    }
    return false;
}

}  // namespace dmimo::kernels
