// SPDX-License-Identifier: Apache-2.0

#include "dmimo/recipe.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "dmimo/errors.hpp"
#include "dmimo/metrics.hpp"
#include "dmimo/version.hpp"

namespace dmimo {

std::string_view experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::kSeSweep: return "se-sweep";
        case ExperimentKind::kCorrelation: return "correlation";
        case ExperimentKind::kConditionNumber: return "condition-number";
    }
    return "?";
}

std::string ExperimentRecipe::resolved_output() const {
    if (!output_path.empty()) return output_path;
    return std::string(experiment_name(kind)) + ".csv";
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

struct SourcePos {
    std::string_view source;
    int line = 0;
    int column = 0;

    std::string str() const {
        return std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column);
    }
};

[[noreturn]] void malformed(const SourcePos& pos, const std::string& what) {
    throw config_error(pos.str() + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view v, const SourcePos& pos) {
    const std::string_view t = trim(v);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    double out = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        malformed(pos, "expected a number, got '" + std::string(t) + "'");
    }
    return out;
}

long parse_long(std::string_view v, const SourcePos& pos) {
    const std::string_view t = trim(v);
    long out = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        malformed(pos, "expected an integer, got '" + std::string(t) + "'");
    }
    return out;
}

std::uint64_t parse_u64(std::string_view v, const SourcePos& pos) {
    const std::string_view t = trim(v);
    std::uint64_t out = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        malformed(pos, "expected an unsigned integer, got '" + std::string(t) + "'");
    }
    return out;
}

bool parse_bool(std::string_view v, const SourcePos& pos) {
    const std::string_view t = trim(v);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    malformed(pos, "expected true/false, got '" + std::string(t) + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view v, const SourcePos& pos, Parse parse_one) {
    std::vector<T> out;
    std::size_t start = 0;
    const std::string value(v);
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string_view item{value.data() + start,
                                    (comma == std::string::npos ? value.size() : comma) - start};
        if (trim(item).empty()) {
            malformed(pos, "empty list element");
        }
        out.push_back(parse_one(item, pos));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

const std::set<std::string, std::less<>> kCommonKeys = {
    "experiment",      "output",
    "seed",            "workers",
    "side_length_m",   "h_ap_m",
    "h_ue_m",          "carrier_hz",
    "antenna_spacing", "pathloss_exponent",
    "reference_distance_m", "tx_power_w",
    "noise_psd_w_per_hz",   "bandwidth_hz",
    "noise_figure_db", "kappa_db_list",
    "include_pure_los"};

const std::set<std::string, std::less<>> kSeSweepKeys = {"m",     "k",    "q_list", "s_list",
                                                         "combiners", "n_net", "n_ch", "csi_mode"};
const std::set<std::string, std::less<>> kCorrelationKeys = {"q", "s_list", "n_pairs"};
const std::set<std::string, std::less<>> kConditionKeys = {"m",    "k",    "q_list", "s_list",
                                                           "n_net", "n_ch", "average_in_db"};

bool key_allowed(ExperimentKind kind, std::string_view key) {
    if (kCommonKeys.count(key) > 0) return true;
    switch (kind) {
        case ExperimentKind::kSeSweep: return kSeSweepKeys.count(key) > 0;
        case ExperimentKind::kCorrelation: return kCorrelationKeys.count(key) > 0;
        case ExperimentKind::kConditionNumber: return kConditionKeys.count(key) > 0;
    }
    return false;
}

bool key_known_anywhere(std::string_view key) {
    return kCommonKeys.count(key) > 0 || kSeSweepKeys.count(key) > 0 ||
           kCorrelationKeys.count(key) > 0 || kConditionKeys.count(key) > 0;
}

void apply_key(ExperimentRecipe& r, std::string_view key, std::string_view value,
               const SourcePos& pos) {
    if (key == "experiment") {
        const std::string_view t = trim(value);
        if (t == "se-sweep") {
            r.kind = ExperimentKind::kSeSweep;
        } else if (t == "correlation") {
            r.kind = ExperimentKind::kCorrelation;
        } else if (t == "condition-number") {
            r.kind = ExperimentKind::kConditionNumber;
        } else {
            malformed(pos, "unknown experiment '" + std::string(t) +
                               "' (expected se-sweep, correlation or condition-number)");
        }
    } else if (key == "output") {
        r.output_path = std::string(trim(value));
    } else if (key == "seed") {
        r.sim.seed = parse_u64(value, pos);
    } else if (key == "workers") {
        r.sim.workers = static_cast<int>(parse_long(value, pos));
    } else if (key == "m") {
        r.sim.total_antennas = static_cast<int>(parse_long(value, pos));
    } else if (key == "k") {
        r.sim.devices = static_cast<int>(parse_long(value, pos));
    } else if (key == "side_length_m") {
        r.sim.side_length_m = parse_double(value, pos);
    } else if (key == "h_ap_m") {
        r.sim.h_ap = parse_double(value, pos);
    } else if (key == "h_ue_m") {
        r.sim.h_ue = parse_double(value, pos);
    } else if (key == "carrier_hz") {
        r.sim.params.carrier_hz = parse_double(value, pos);
    } else if (key == "antenna_spacing") {
        r.sim.params.antenna_spacing = parse_double(value, pos);
    } else if (key == "pathloss_exponent") {
        r.sim.params.pathloss_exponent = parse_double(value, pos);
    } else if (key == "reference_distance_m") {
        r.sim.params.reference_distance_m = parse_double(value, pos);
    } else if (key == "tx_power_w") {
        r.sim.params.tx_power_w = parse_double(value, pos);
    } else if (key == "noise_psd_w_per_hz") {
        r.sim.params.noise_psd_w_per_hz = parse_double(value, pos);
    } else if (key == "bandwidth_hz") {
        r.sim.params.bandwidth_hz = parse_double(value, pos);
    } else if (key == "noise_figure_db") {
        r.noise_figure_db = parse_double(value, pos);
    } else if (key == "kappa_db_list") {
        r.sim.kappa_db_grid = parse_list<double>(value, pos, parse_double);
    } else if (key == "include_pure_los") {
        r.include_pure_los = parse_bool(value, pos);
    } else if (key == "q_list") {
        r.q_list = parse_list<int>(value, pos, [](std::string_view v, const SourcePos& p) {
            return static_cast<int>(parse_long(v, p));
        });
    } else if (key == "s_list") {
        auto list = parse_list<int>(value, pos, [](std::string_view v, const SourcePos& p) {
            return static_cast<int>(parse_long(v, p));
        });
        if (r.kind == ExperimentKind::kCorrelation) {
            r.corr_s_list = std::move(list);
        } else {
            r.s_list = std::move(list);
        }
    } else if (key == "q") {
        r.corr_q = static_cast<int>(parse_long(value, pos));
    } else if (key == "n_pairs") {
        r.n_pairs = parse_long(value, pos);
    } else if (key == "combiners") {
        r.sim.combiners = parse_list<CombinerKind>(
            value, pos, [](std::string_view v, const SourcePos& p) {
                try {
                    return parse_combiner(trim(v));
                } catch (const config_error& e) {
                    malformed(p, e.what());
                }
            });
    } else if (key == "n_net") {
        r.sim.n_net = static_cast<int>(parse_long(value, pos));
    } else if (key == "n_ch") {
        r.sim.n_ch = static_cast<int>(parse_long(value, pos));
    } else if (key == "csi_mode") {
        const std::string_view t = trim(value);
        if (t == "modeled" || t == "modeled-error") {
            r.sim.csi_mode = CsiMode::kModeledError;
        } else if (t == "perfect") {
            r.sim.csi_mode = CsiMode::kPerfect;
        } else {
            malformed(pos, "csi_mode must be modeled or perfect, got '" + std::string(t) + "'");
        }
    } else if (key == "average_in_db") {
        r.cond_average_in_db = parse_bool(value, pos);
    } else {
        malformed(pos, "unhandled key '" + std::string(key) + "'");
    }
}

struct RawEntry {
    std::string key;
    std::string value;
    SourcePos pos;
};

std::vector<RawEntry> tokenize(std::string_view text, std::string_view source_name) {
    std::vector<RawEntry> entries;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        const std::string_view line{text.data() + start,
                                    (nl == std::string_view::npos ? text.size() : nl) - start};
        ++line_no;
        const std::string_view stripped = trim(line);
        if (!stripped.empty() && stripped.front() != '#') {
            const std::size_t eq = line.find('=');
            SourcePos pos{source_name, line_no, 1};
            if (eq == std::string_view::npos) {
                malformed(pos, "expected 'key = value'");
            }
            const std::string_view key = trim(line.substr(0, eq));
            const std::string_view value = line.substr(eq + 1);
            if (key.empty()) {
                malformed(pos, "missing key before '='");
            }
            pos.column = static_cast<int>(eq) + 2;
            if (trim(value).empty()) {
                malformed(pos, "missing value for key '" + std::string(key) + "'");
            }
            entries.push_back({std::string(key), std::string(value), pos});
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return entries;
}

std::vector<ApSplit> build_splits(const ExperimentRecipe& r) {
    std::vector<ApSplit> splits;
    if (!r.s_list.empty() && r.s_list.size() != r.q_list.size()) {
        throw config_error("q_list and s_list must have the same length (" +
                           std::to_string(r.q_list.size()) + " vs " +
                           std::to_string(r.s_list.size()) + ")");
    }
    for (std::size_t i = 0; i < r.q_list.size(); ++i) {
        const int q = r.q_list[i];
        if (q < 1) {
            throw config_error("q must be positive, got " + std::to_string(q));
        }
        int s;
        if (!r.s_list.empty()) {
            s = r.s_list[i];
        } else {
            if (r.sim.total_antennas % q != 0) {
                throw config_error("q = " + std::to_string(q) + " does not divide m = " +
                                   std::to_string(r.sim.total_antennas));
            }
            s = r.sim.total_antennas / q;
        }
        if (q * s != r.sim.total_antennas) {
            throw config_error("split (q=" + std::to_string(q) + ", s=" + std::to_string(s) +
                               ") violates q*s = m = " + std::to_string(r.sim.total_antennas));
        }
        splits.push_back({q, s});
    }
    return splits;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

void echo_physics(std::ostream& os, const ExperimentRecipe& r) {
    const ChannelParams& p = r.sim.params;
    os << "# side_length_m = " << format_double(r.sim.side_length_m) << "\n";
    os << "# h_ap_m = " << format_double(r.sim.h_ap) << "\n";
    os << "# h_ue_m = " << format_double(r.sim.h_ue) << "\n";
    os << "# carrier_hz = " << format_double(p.carrier_hz) << "\n";
    os << "# antenna_spacing = " << format_double(p.antenna_spacing) << "\n";
    os << "# pathloss_exponent = " << format_double(p.pathloss_exponent) << "\n";
    os << "# reference_distance_m = " << format_double(p.reference_distance_m) << "\n";
    os << "# tx_power_w = " << format_double(p.tx_power_w) << "\n";
    os << "# noise_psd_w_per_hz = " << format_double(p.noise_psd_w_per_hz) << "\n";
    os << "# bandwidth_hz = " << format_double(p.bandwidth_hz) << "\n";
    os << "# noise_figure_db = " << format_double(r.noise_figure_db) << "\n";
    os << "# kappa_db_list = " << join_doubles(r.sim.kappa_db_grid) << "\n";
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot open '" + path + "' for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
        throw io_error("failed writing '" + path + "'");
    }
}

std::string combiner_list_string(const std::vector<CombinerKind>& kinds) {
    std::string out;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (i > 0) out += ',';
        out += std::string(combiner_name(kinds[i]));
    }
    return out;
}

void run_se_sweep(const ExperimentRecipe& recipe) {
    std::vector<SweepResult> results = run_sweep(recipe.sim);
    std::sort(results.begin(), results.end(), [](const SweepResult& a, const SweepResult& b) {
        if (a.kappa_db != b.kappa_db) return a.kappa_db < b.kappa_db;
        if (a.q != b.q) return a.q < b.q;
        return static_cast<int>(a.combiner) < static_cast<int>(b.combiner);
    });

    std::ostringstream os;
    os << "# tool = " << kToolName << " " << kToolVersion << "\n";
    os << "# experiment = se-sweep\n";
    os << "# seed = " << recipe.sim.seed << "\n";
    os << "# m = " << recipe.sim.total_antennas << "\n";
    os << "# k = " << recipe.sim.devices << "\n";
    {
        std::vector<int> qs, ss;
        for (const ApSplit& sp : recipe.sim.splits) {
            qs.push_back(sp.q);
            ss.push_back(sp.s);
        }
        os << "# q_list = " << join_ints(qs) << "\n";
        os << "# s_list = " << join_ints(ss) << "\n";
    }
    os << "# combiners = " << combiner_list_string(recipe.sim.combiners) << "\n";
    os << "# n_net = " << recipe.sim.n_net << "\n";
    os << "# n_ch = " << recipe.sim.n_ch << "\n";
    os << "# csi_mode = "
       << (recipe.sim.csi_mode == CsiMode::kPerfect ? "perfect" : "modeled") << "\n";
    echo_physics(os, recipe);
    os << "kappa_db,q,s,combiner,mean_se_bps_hz,se_stderr,n_net,n_ch,n_skipped,seed\n";
    for (const SweepResult& r : results) {
        os << format_double(r.kappa_db) << ',' << r.q << ',' << r.s << ','
           << combiner_name(r.combiner) << ',' << format_double(r.mean_se) << ','
           << format_double(r.se_std_error) << ',' << recipe.sim.n_net << ',' << recipe.sim.n_ch
           << ',' << r.n_skipped_singular << ',' << recipe.sim.seed << "\n";
    }
    write_file(recipe.resolved_output(), os.str());
}

void run_correlation(const ExperimentRecipe& recipe) {
    struct Row {
        double kappa_db;
        int s;
        AverageCorrelation stats;
    };
    std::vector<Row> rows;
    for (double kappa_db : recipe.sim.kappa_db_grid) {
        for (int s : recipe.corr_s_list) {
            ChannelParams p = recipe.sim.params;
            p.set_rician_db(kappa_db);
            rows.push_back({kappa_db, s,
                            average_correlation(recipe.corr_q, s, recipe.sim.side_length_m,
                                                recipe.sim.h_ap, recipe.sim.h_ue, p,
                                                recipe.n_pairs, recipe.sim.seed,
                                                recipe.sim.workers)});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.kappa_db != b.kappa_db) return a.kappa_db < b.kappa_db;
        return a.s < b.s;
    });

    std::ostringstream os;
    os << "# tool = " << kToolName << " " << kToolVersion << "\n";
    os << "# experiment = correlation\n";
    os << "# seed = " << recipe.sim.seed << "\n";
    os << "# q = " << recipe.corr_q << "\n";
    os << "# s_list = " << join_ints(recipe.corr_s_list) << "\n";
    os << "# n_pairs = " << recipe.n_pairs << "\n";
    echo_physics(os, recipe);
    os << "kappa_db,q,s,avg_corr,corr_stderr,n_pairs,seed\n";
    for (const Row& r : rows) {
        os << format_double(r.kappa_db) << ',' << recipe.corr_q << ',' << r.s << ','
           << format_double(r.stats.mean_abs) << ',' << format_double(r.stats.std_error) << ','
           << r.stats.n_pairs << ',' << recipe.sim.seed << "\n";
    }
    write_file(recipe.resolved_output(), os.str());
}

void run_condition_number(const ExperimentRecipe& recipe) {
    struct Row {
        double kappa_db;
        ApSplit split;
        MeanConditionNumber stats;
    };
    std::vector<Row> rows;
    for (double kappa_db : recipe.sim.kappa_db_grid) {
        for (const ApSplit& split : recipe.sim.splits) {
            ChannelParams p = recipe.sim.params;
            p.set_rician_db(kappa_db);
            CondSweepConfig cfg;
            cfg.q = split.q;
            cfg.s = split.s;
            cfg.devices = recipe.sim.devices;
            cfg.side_m = recipe.sim.side_length_m;
            cfg.h_ap = recipe.sim.h_ap;
            cfg.h_ue = recipe.sim.h_ue;
            cfg.n_net = recipe.sim.n_net;
            cfg.n_ch = recipe.sim.n_ch;
            cfg.seed = recipe.sim.seed;
            cfg.workers = recipe.sim.workers;
            cfg.average_in_db = recipe.cond_average_in_db;
            rows.push_back({kappa_db, split, mean_condition_number(cfg, p)});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.kappa_db != b.kappa_db) return a.kappa_db < b.kappa_db;
        return a.split.q < b.split.q;
    });

    std::ostringstream os;
    os << "# tool = " << kToolName << " " << kToolVersion << "\n";
    os << "# experiment = condition-number\n";
    os << "# seed = " << recipe.sim.seed << "\n";
    os << "# m = " << recipe.sim.total_antennas << "\n";
    os << "# k = " << recipe.sim.devices << "\n";
    {
        std::vector<int> qs, ss;
        for (const ApSplit& sp : recipe.sim.splits) {
            qs.push_back(sp.q);
            ss.push_back(sp.s);
        }
        os << "# q_list = " << join_ints(qs) << "\n";
        os << "# s_list = " << join_ints(ss) << "\n";
    }
    os << "# n_net = " << recipe.sim.n_net << "\n";
    os << "# n_ch = " << recipe.sim.n_ch << "\n";
    os << "# average_in_db = " << (recipe.cond_average_in_db ? "true" : "false") << "\n";
    echo_physics(os, recipe);
    os << "kappa_db,q,s,k,mean_cond_db,cond_stderr,n_net,n_ch,seed\n";
    for (const Row& r : rows) {
        os << format_double(r.kappa_db) << ',' << r.split.q << ',' << r.split.s << ','
           << recipe.sim.devices << ',' << format_double(r.stats.mean_db) << ','
           << format_double(r.stats.std_error_db) << ',' << recipe.sim.n_net << ','
           << recipe.sim.n_ch << ',' << recipe.sim.seed << "\n";
    }
    write_file(recipe.resolved_output(), os.str());
}

}  // namespace

ExperimentRecipe parse_recipe_text(std::string_view text, std::string_view source_name) {
    const std::vector<RawEntry> entries = tokenize(text, source_name);
    ExperimentRecipe recipe;

    // The experiment determines which keys are legal, so resolve it first.
    for (const RawEntry& e : entries) {
        if (e.key == "experiment") {
            apply_key(recipe, e.key, e.value, e.pos);
        }
    }
    for (const RawEntry& e : entries) {
        if (e.key == "experiment") continue;
        if (!key_known_anywhere(e.key)) {
            throw config_error(e.pos.str() + ": unknown key '" + e.key + "'");
        }
        if (!key_allowed(recipe.kind, e.key)) {
            throw config_error(e.pos.str() + ": key '" + e.key + "' does not apply to experiment '" +
                               std::string(experiment_name(recipe.kind)) + "'");
        }
        apply_key(recipe, e.key, e.value, e.pos);
    }
    return recipe;
}

void apply_override(ExperimentRecipe& recipe, std::string_view key_value) {
    const std::size_t eq = key_value.find('=');
    SourcePos pos{"<override>", 1, 1};
    if (eq == std::string_view::npos) {
        malformed(pos, "override must be key=value, got '" + std::string(key_value) + "'");
    }
    const std::string key{trim(key_value.substr(0, eq))};
    const std::string_view value = key_value.substr(eq + 1);
    if (key.empty() || trim(value).empty()) {
        malformed(pos, "override must be key=value, got '" + std::string(key_value) + "'");
    }
    if (key == "experiment") {
        apply_key(recipe, key, value, pos);
        return;
    }
    if (!key_known_anywhere(key)) {
        throw config_error("unknown override key '" + key + "'");
    }
    if (!key_allowed(recipe.kind, key)) {
        throw config_error("override key '" + key + "' does not apply to experiment '" +
                           std::string(experiment_name(recipe.kind)) + "'");
    }
    apply_key(recipe, key, value, pos);
}

void finalize_recipe(ExperimentRecipe& recipe) {
    recipe.sim.params.set_noise_figure_db(recipe.noise_figure_db);
    if (recipe.include_pure_los) {
        auto& grid = recipe.sim.kappa_db_grid;
        if (std::find_if(grid.begin(), grid.end(), [](double v) { return std::isinf(v); }) ==
            grid.end()) {
            grid.push_back(std::numeric_limits<double>::infinity());
        }
    }
    if (recipe.kind == ExperimentKind::kSeSweep || recipe.kind == ExperimentKind::kConditionNumber) {
        recipe.sim.splits = build_splits(recipe);
        recipe.sim.validate();
    }
    if (recipe.kind == ExperimentKind::kCorrelation) {
        if (recipe.corr_q < 1) {
            throw config_error("q must be positive, got " + std::to_string(recipe.corr_q));
        }
        for (int s : recipe.corr_s_list) {
            if (s < 1) {
                throw config_error("s_list entries must be positive, got " + std::to_string(s));
            }
        }
        if (recipe.n_pairs < 1) {
            throw config_error("n_pairs must be at least 1");
        }
        if (recipe.sim.kappa_db_grid.empty()) {
            throw config_error("kappa grid must not be empty");
        }
    }
}

void run_recipe(const ExperimentRecipe& recipe) {
    switch (recipe.kind) {
        case ExperimentKind::kSeSweep:
            run_se_sweep(recipe);
            return;
        case ExperimentKind::kCorrelation:
            run_correlation(recipe);
            return;
        case ExperimentKind::kConditionNumber:
            run_condition_number(recipe);
            return;
    }
    throw config_error("unhandled experiment kind");
}

}  // namespace dmimo
