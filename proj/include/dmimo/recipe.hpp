// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dmimo/montecarlo.hpp"

namespace dmimo {

enum class ExperimentKind { kSeSweep, kCorrelation, kConditionNumber };

std::string_view experiment_name(ExperimentKind kind);

/// A fully resolved experiment: which figure family to reproduce and every
/// effective parameter. Unspecified recipe keys take the paper's table of
/// simulation parameters as defaults.
struct ExperimentRecipe {
    ExperimentKind kind = ExperimentKind::kSeSweep;
    std::string output_path;  // empty = "<experiment>.csv"

    SimulationConfig sim;
    double noise_figure_db = 9.0;  // kept in dB for a drift-free config echo
    std::vector<int> q_list = {1, 2, 4, 8, 16};
    std::vector<int> s_list;  // empty: s = m/q per entry
    bool include_pure_los = false;

    // correlation experiment
    int corr_q = 1;
    std::vector<int> corr_s_list = {2, 4, 8, 16};
    long n_pairs = 10000;

    // condition-number experiment
    bool cond_average_in_db = true;

    std::string resolved_output() const;
};

/// Parses the plain-text key=value recipe format. Rejections carry the
/// offending key or the line/column of a malformed value; unknown keys and
/// keys that do not belong to the recipe's experiment are errors.
ExperimentRecipe parse_recipe_text(std::string_view text, std::string_view source_name);

/// Applies one "key=value" override on top of a parsed recipe.
void apply_override(ExperimentRecipe& recipe, std::string_view key_value);

/// Validates cross-field constraints and fills derived fields (splits from
/// q_list/s_list, pure-LoS grid point, linear noise figure).
void finalize_recipe(ExperimentRecipe& recipe);

/// Runs the experiment and writes its CSV. Identical recipes produce
/// byte-identical files regardless of worker count.
void run_recipe(const ExperimentRecipe& recipe);

/// Shortest decimal form that re-parses to exactly the same double.
std::string format_double(double v);

}  // namespace dmimo
