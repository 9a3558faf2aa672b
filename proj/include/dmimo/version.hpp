// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace dmimo {

inline constexpr const char* kToolName = "dmimo-sim";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace dmimo
