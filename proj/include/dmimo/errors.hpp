// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace dmimo {

/// Bad user-facing configuration (recipe keys, grids, dimension mismatches).
/// Maps to CLI exit status 2.
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure that makes a requested result undefined, e.g. every ZF
/// realization of a point was singular. Maps to CLI exit status 3.
class numerical_error : public std::runtime_error {
  public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Rank-deficient matrix where a full-rank one is required (ZF Gram).
/// Carries enough context to identify the offending realization.
class singular_matrix_error : public numerical_error {
  public:
    explicit singular_matrix_error(const std::string& what) : numerical_error(what) {}
};

/// Invalid argument to an in-process API (negative SINR, empty input, ...).
class domain_error : public std::invalid_argument {
  public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Unreadable input or unwritable output. Maps to CLI exit status 4.
class io_error : public std::runtime_error {
  public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dmimo
