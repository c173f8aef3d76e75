// tzopt: estimate discontinuity effects, design circular partitions, and
// close the loop by re-estimating against the designed boundaries.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tzopt/csv.hpp"
#include "tzopt/distortion.hpp"
#include "tzopt/dp_quantizer.hpp"
#include "tzopt/errors.hpp"
#include "tzopt/grid.hpp"
#include "tzopt/partition.hpp"
#include "tzopt/rdd.hpp"
#include "tzopt/vi_quantizer.hpp"

namespace {

using nlohmann::ordered_json;
using namespace tzopt;

std::string g_config_file;  // set when --config was expanded

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ordered_json base_output(ordered_json config) {
    if (!g_config_file.empty()) config["config_file"] = g_config_file;
    ordered_json j;
    j["schema_version"] = 1;
    j["generated_at"] = timestamp_utc();
    j["config"] = std::move(config);
    return j;
}

void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open file for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw InputError("write failed: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": malformed JSON: " + e.what());
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& tok : split_list(s)) {
        auto v = parse_double_field(tok, what);
        if (!v) throw InputError(what + ": blank entry");
        out.push_back(*v);
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

// Pulls --config out of the arguments and splices the file's key/value
// pairs in right after the subcommand so explicit flags, parsed last,
// win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args;
    std::string cfg_path;
    for (int i = 1; i < argc; ++i) {
        const std::string tok = argv[i];
        if (tok == "--config") {
            if (i + 1 >= argc) throw InputError("--config needs a file path");
            cfg_path = argv[++i];
        } else if (tok.rfind("--config=", 0) == 0) {
            cfg_path = tok.substr(9);
        } else {
            args.push_back(tok);
        }
    }
    if (cfg_path.empty()) return args;
    g_config_file = cfg_path;

    std::size_t sub_pos = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].empty() && args[i][0] != '-') {
            sub_pos = i;
            break;
        }
    }
    if (sub_pos == args.size()) throw InputError("--config requires a subcommand");

    const nlohmann::json cfg = read_json_file(cfg_path);
    if (!cfg.is_object()) throw InputError(cfg_path + ": config must be a JSON object");
    std::vector<std::string> tokens;
    for (const auto& [key, value] : cfg.items()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (value.is_boolean()) {
            if (value.get<bool>()) tokens.push_back(flag);
        } else if (value.is_number_integer()) {
            tokens.push_back(flag);
            tokens.push_back(std::to_string(value.get<long long>()));
        } else if (value.is_number()) {
            tokens.push_back(flag);
            tokens.push_back(format_double(value.get<double>()));
        } else if (value.is_string()) {
            tokens.push_back(flag);
            tokens.push_back(value.get<std::string>());
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& item : value) {
                if (!joined.empty()) joined += ",";
                joined += item.is_string() ? item.get<std::string>() : item.dump();
            }
            tokens.push_back(flag);
            tokens.push_back(joined);
        } else {
            throw InputError(cfg_path + ": unsupported value type for key '" + key + "'");
        }
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, tokens.begin(),
                tokens.end());
    return args;
}

ordered_json fit_block(const RddFit& fit) {
    const EffectEstimate e = effect_of(fit);
    ordered_json j;
    j["kind"] = fit.kind == FitKind::local ? "local" : "global";
    j["beta1"] = e.beta1;
    j["se"] = e.se;
    j["p_value"] = e.p_value;
    if (e.significant_at > 0.0) j["significant_at"] = e.significant_at;
    else j["significant_at"] = nullptr;
    j["n_left"] = fit.n_left;
    j["n_right"] = fit.n_right;
    if (fit.kind == FitKind::local) j["bandwidth"] = fit.bandwidth;
    else j["bandwidth"] = nullptr;
    if (fit.kind == FitKind::global) j["poly_order"] = fit.poly_order;
    return j;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
    std::string data, outcome = "outcome", distance = "distance";
    std::string controls, bandwidth_grid;
    double cutoff = 0.0, bandwidth = 0.0;
    int poly_order = 1, n_bins = 30;
    std::size_t min_side = 10;
    std::string out = "effect.json", curves;
    long seed = 0;
};

int run_estimate(const EstimateArgs& a) {
    if (a.bandwidth == 0.0 && a.bandwidth_grid.empty()) {
        throw InputError("provide --bandwidth or --bandwidth-grid");
    }
    const std::vector<std::string> controls = split_list(a.controls);
    const RddDataset data =
        load_rdd_dataset(a.data, a.outcome, a.distance, controls, a.cutoff, a.min_side);

    double bandwidth = a.bandwidth;
    std::string bandwidth_source = "given";
    if (bandwidth == 0.0) {
        bandwidth = select_bandwidth_cv(
            data, parse_double_list(a.bandwidth_grid, "--bandwidth-grid"));
        bandwidth_source = "cv";
    }

    const RddFit local = fit_local(data, bandwidth);
    const RddFit global = fit_global(data, a.poly_order);
    const MccraryResult mc = mccrary_test(data, a.n_bins);
    const EtaResult eta = effect_to_eta(effect_of(local));

    ordered_json config;
    config["subcommand"] = "estimate";
    config["data"] = a.data;
    config["outcome"] = a.outcome;
    config["distance"] = a.distance;
    config["controls"] = controls;
    config["cutoff"] = a.cutoff;
    config["bandwidth"] = bandwidth;
    config["bandwidth_source"] = bandwidth_source;
    if (!a.bandwidth_grid.empty()) config["bandwidth_grid"] = a.bandwidth_grid;
    config["poly_order"] = a.poly_order;
    config["n_bins"] = a.n_bins;
    config["min_side"] = a.min_side;
    config["out"] = a.out;
    if (!a.curves.empty()) config["curves"] = a.curves;
    config["seed"] = a.seed;

    ordered_json j = base_output(config);
    j["estimator"] = "conventional";  // no bias correction
    j["n_rows"] = data.rows.size();
    j["dropped_rows"] = data.dropped_rows;
    j["local"] = fit_block(local);
    j["global"] = fit_block(global);
    ordered_json mcj;
    mcj["log_ratio"] = mc.log_ratio;
    mcj["se"] = mc.se;
    mcj["p_value"] = mc.p_value;
    mcj["manipulated"] = mc.manipulated;
    mcj["bins_left"] = mc.bins_left;
    mcj["bins_right"] = mc.bins_right;
    j["mccrary"] = mcj;
    j["manipulated"] = mc.manipulated;
    ordered_json etaj;
    etaj["value"] = eta.value;
    if (!eta.note.empty()) etaj["note"] = eta.note;
    j["eta"] = etaj;
    write_json_file(a.out, j);

    if (!a.curves.empty()) {
        std::vector<std::vector<std::string>> rows;
        auto emit = [&rows](const char* kind, const std::vector<CurvePoint>& pts) {
            for (const auto& p : pts) {
                rows.push_back({kind, format_double(p.distance), format_double(p.observed),
                                format_double(p.counterfactual), p.in_support ? "1" : "0"});
            }
        };
        emit("local", counterfactual_lines(local, linspace(a.cutoff - bandwidth,
                                                           a.cutoff + bandwidth, 41)));
        emit("global",
             counterfactual_lines(global, linspace(global.support_lo, global.support_hi, 81)));
        write_csv(a.curves, {"kind", "distance", "observed", "counterfactual", "in_support"},
                  rows);
    }
    std::cerr << "estimate: beta1(local) = " << format_double(effect_of(local).beta1) << ", wrote "
              << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// design

struct DesignArgs {
    std::string population;
    std::size_t k = 0, k_min = 0, k_max = 0;
    double eta = 0.0;
    std::string eta_scale = "none";
    double alpha = 1.0, beta = 1.0, lambda = 1.0;
    int min_width = 2;
    std::string method = "dp";
    double gamma = 1.0, epsilon = 1e-9;
    bool check_dp = false;
    int threads = 1;
    std::string out = "partition.json";
    long seed = 0;
    bool eta_given = false, k_given = false, k_min_given = false, k_max_given = false;
};

int run_design(const DesignArgs& a) {
    const bool open_mode = a.k_min_given || a.k_max_given;
    if (a.k_given == open_mode) {
        throw InputError("provide --k exactly-or --k-min/--k-max (with --eta), not both");
    }
    if (open_mode && (!a.k_min_given || !a.k_max_given || !a.eta_given)) {
        throw InputError("open-k design needs --k-min, --k-max, and --eta");
    }
    if (a.method != "dp" && a.method != "vi") {
        throw InputError("--method must be dp or vi");
    }
    if (a.eta_scale != "none" && a.eta_scale != "population_total") {
        throw InputError("--eta-scale must be none or population_total");
    }

    const PopulationProfile profile = load_population_profile(a.population);
    ObjectiveConfig cfg;
    cfg.alpha = a.alpha;
    cfg.beta = a.beta;
    cfg.lambda = a.lambda;
    cfg.min_width = a.min_width;
    cfg.eta = a.eta_scale == "population_total" ? a.eta * profile.total_mass() : a.eta;
    cfg.validate();

    auto table = std::make_shared<const SegmentCostTable>(profile, cfg);
    DesignOptions opts;
    opts.threads = a.threads;

    Partition partition;
    ViDesignDiagnostics diag;
    if (a.method == "dp") {
        partition = open_mode ? design_open_k(profile, *table, a.k_min, a.k_max, cfg, opts)
                              : design_fixed_k(profile, *table, a.k, cfg, opts);
    } else {
        if (open_mode) {
            // sweep k and keep the lowest total including eta*k; ties to
            // the smaller k, matching design_open_k
            bool have = false;
            for (std::size_t k = a.k_min; k <= a.k_max; ++k) {
                ViDesignDiagnostics d;
                Partition cand =
                    design_fixed_k_vi(profile, table, k, cfg, a.gamma, a.epsilon, a.threads, &d);
                if (!have || cand.total_cost < partition.total_cost) {
                    partition = std::move(cand);
                    diag = d;
                    have = true;
                }
            }
        } else {
            partition =
                design_fixed_k_vi(profile, table, a.k, cfg, a.gamma, a.epsilon, a.threads, &diag);
        }
        if (!diag.converged) {
            std::cerr << "warning: value iteration not converged (sup_delta = "
                      << format_double(diag.sup_delta) << "); extracting policy anyway\n";
        }
    }

    ordered_json config;
    config["subcommand"] = "design";
    config["population"] = a.population;
    if (a.k_given) config["k"] = a.k;
    if (open_mode) {
        config["k_min"] = a.k_min;
        config["k_max"] = a.k_max;
    }
    config["eta"] = a.eta;
    config["eta_scale"] = a.eta_scale;
    config["eta_resolved"] = cfg.eta;
    config["alpha"] = cfg.alpha;
    config["beta"] = cfg.beta;
    config["lambda"] = cfg.lambda;
    config["min_width"] = cfg.min_width;
    config["method"] = a.method;
    if (a.method == "vi") {
        config["gamma"] = a.gamma;
        config["epsilon"] = a.epsilon;
        config["check_dp"] = a.check_dp;
    }
    config["threads"] = a.threads;
    config["out"] = a.out;
    config["seed"] = a.seed;

    ordered_json j = base_output(config);
    j["method"] = a.method;
    ordered_json pj = partition_to_json(partition, profile);
    for (auto& [key, value] : pj.items()) j[key] = value;
    if (a.method == "vi") {
        j["vi_converged"] = diag.converged;
        j["vi_sweeps_run"] = diag.sweeps_run;
        j["vi_sup_delta"] = diag.sup_delta;
        if (a.check_dp) {
            if (a.gamma != 1.0) {
                throw InputError("--check-dp requires --gamma 1 (exact DP equivalence)");
            }
            const Partition dp = open_mode
                                     ? design_open_k(profile, *table, a.k_min, a.k_max, cfg, opts)
                                     : design_fixed_k(profile, *table, a.k, cfg, opts);
            const double scale = std::max({1.0, std::abs(dp.total_cost),
                                           std::abs(partition.total_cost)});
            const double rel = std::abs(dp.total_cost - partition.total_cost) / scale;
            j["dp_total_cost"] = dp.total_cost;
            j["dp_vi_rel_diff"] = rel;
            if (rel > 1e-9) {
                throw ComputeError("VI/DP cost mismatch: dp=" + format_double(dp.total_cost) +
                                   " vi=" + format_double(partition.total_cost) +
                                   " rel_diff=" + format_double(rel));
            }
        }
    }
    write_json_file(a.out, j);
    std::cerr << "design: k = " << partition.k << ", total cost = "
              << format_double(partition.total_cost) << ", wrote " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// prime-meridian

struct PrimeArgs {
    std::string population;
    std::size_t k = 0;
    double alpha = 1.0, beta = 1.0, lambda = 1.0;
    int min_width = 2;
    std::string out = "prime_meridian.json", curve;
    long seed = 0;
};

int run_prime_meridian(const PrimeArgs& a) {
    const PopulationProfile profile = load_population_profile(a.population);
    ObjectiveConfig cfg;
    cfg.alpha = a.alpha;
    cfg.beta = a.beta;
    cfg.lambda = a.lambda;
    cfg.min_width = a.min_width;
    cfg.validate();

    std::vector<double> curve;
    const std::size_t offset = choose_prime_meridian_uniform(profile, a.k, cfg, &curve);

    ordered_json config;
    config["subcommand"] = "prime-meridian";
    config["population"] = a.population;
    config["k"] = a.k;
    config["alpha"] = cfg.alpha;
    config["beta"] = cfg.beta;
    config["lambda"] = cfg.lambda;
    config["min_width"] = cfg.min_width;
    config["out"] = a.out;
    if (!a.curve.empty()) config["curve"] = a.curve;
    config["seed"] = a.seed;

    ordered_json j = base_output(config);
    j["offset"] = offset;
    j["longitude_deg"] = boundary_longitude(profile, offset);
    j["cost"] = curve[offset];
    j["k"] = a.k;
    j["region_width_cells"] = profile.size() / a.k;
    write_json_file(a.out, j);

    if (!a.curve.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t o = 0; o < curve.size(); ++o) {
            rows.push_back({std::to_string(o), format_double(boundary_longitude(profile, o)),
                            format_double(curve[o])});
        }
        write_csv(a.curve, {"offset", "longitude_deg", "cost"}, rows);
    }
    std::cerr << "prime-meridian: offset " << offset << " (" <<
        format_double(boundary_longitude(profile, offset)) << " deg), wrote " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// reassign

struct ReassignArgs {
    std::string units, partition, population;
    std::string outcome = "outcome", controls;
    double miles_per_degree = 1.0;
    std::string out = "reassigned.csv", report;
    long seed = 0;
};

int run_reassign(const ReassignArgs& a) {
    const PopulationProfile profile = load_population_profile(a.population);
    const Partition partition = partition_from_json(read_json_file(a.partition));
    const std::vector<std::string> controls = split_list(a.controls);
    std::size_t dropped = 0;
    const std::vector<GeoUnit> units = load_geo_units(a.units, a.outcome, controls, &dropped);

    std::vector<std::string> warnings;
    const RddDataset data =
        reassign_units(units, controls, partition, profile, a.miles_per_degree, &warnings);

    std::vector<std::string> header{"unit_id", "distance", "outcome"};
    for (const auto& c : controls) header.push_back(c);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(data.rows.size());
    for (const auto& r : data.rows) {
        std::vector<std::string> row{r.unit_id, format_double(r.distance),
                                     format_double(r.outcome)};
        for (double c : r.controls) row.push_back(format_double(c));
        rows.push_back(std::move(row));
    }
    write_csv(a.out, header, rows);

    ordered_json config;
    config["subcommand"] = "reassign";
    config["units"] = a.units;
    config["partition"] = a.partition;
    config["population"] = a.population;
    config["outcome"] = a.outcome;
    config["controls"] = controls;
    config["miles_per_degree"] = a.miles_per_degree;
    config["out"] = a.out;
    config["seed"] = a.seed;

    const std::string report_path = a.report.empty() ? a.out + ".meta.json" : a.report;
    ordered_json j = base_output(config);
    j["n_units"] = data.rows.size();
    j["dropped_rows"] = dropped;
    j["warnings"] = warnings;
    write_json_file(report_path, j);
    std::cerr << "reassign: " << data.rows.size() << " units, wrote " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
    std::string population, partition;
    double alpha = 1.0, beta = 1.0, lambda = 1.0;
    int min_width = 2;
    double eta = -1.0;  // < 0: take the partition file's eta
    std::string out = "evaluation.json";
    long seed = 0;
};

int run_evaluate(const EvaluateArgs& a) {
    const PopulationProfile profile = load_population_profile(a.population);
    const Partition partition = partition_from_json(read_json_file(a.partition));
    ObjectiveConfig cfg;
    cfg.alpha = a.alpha;
    cfg.beta = a.beta;
    cfg.lambda = a.lambda;
    cfg.min_width = a.min_width;
    cfg.eta = a.eta >= 0.0 ? a.eta : partition.eta;
    cfg.validate();

    const double total = partition_cost(profile, partition, cfg);

    ordered_json config;
    config["subcommand"] = "evaluate";
    config["population"] = a.population;
    config["partition"] = a.partition;
    config["alpha"] = cfg.alpha;
    config["beta"] = cfg.beta;
    config["lambda"] = cfg.lambda;
    config["min_width"] = cfg.min_width;
    config["eta"] = cfg.eta;
    config["out"] = a.out;
    config["seed"] = a.seed;

    ordered_json j = base_output(config);
    j["k"] = partition.k;
    j["rotation"] = partition.rotation;
    j["eta"] = cfg.eta;
    j["total_cost"] = total;
    j["total_cost_in_file"] = partition.total_cost;
    const double scale = std::max({1.0, std::abs(total), std::abs(partition.total_cost)});
    j["rel_diff_vs_file"] = std::abs(total - partition.total_cost) / scale;
    write_json_file(a.out, j);
    std::cerr << "evaluate: total cost " << format_double(total) << ", wrote " << a.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::vector<const char*> argv2;
    argv2.push_back(argc > 0 ? argv[0] : "tzopt");
    for (const auto& s : args) argv2.push_back(s.c_str());

    CLI::App app{"discontinuity effect estimation and optimal circular partition design"};
    app.require_subcommand(1);

    EstimateArgs ea;
    DesignArgs da;
    PrimeArgs pa;
    ReassignArgs ra;
    EvaluateArgs va;
    int rc = 0;

    auto* est = app.add_subcommand("estimate",
                                   "sharp discontinuity estimate with manipulation check and "
                                   "counterfactual curves");
    est->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    est->add_option("--data", ea.data, "unit-level CSV (unit_id,distance,outcome[,controls])")
        ->required();
    est->add_option("--outcome", ea.outcome, "outcome column name");
    est->add_option("--distance", ea.distance, "distance column name");
    est->add_option("--controls", ea.controls, "comma-separated control columns");
    est->add_option("--cutoff", ea.cutoff, "cutoff C (default 0)");
    auto* bw = est->add_option("--bandwidth", ea.bandwidth, "local fit bandwidth");
    est->add_option("--bandwidth-grid", ea.bandwidth_grid,
                    "comma-separated grid for leave-one-out bandwidth selection")
        ->excludes(bw);
    est->add_option("--poly-order", ea.poly_order, "global fit polynomial order (1..5)");
    est->add_option("--n-bins", ea.n_bins, "bins for the manipulation check");
    est->add_option("--min-side", ea.min_side, "required rows per side at load");
    est->add_option("--out", ea.out, "effect JSON path");
    est->add_option("--curves", ea.curves, "counterfactual curves CSV path");
    est->add_option("--seed", ea.seed, "seed echoed for reproducibility");
    est->callback([&]() { rc = run_estimate(ea); });

    auto* des = app.add_subcommand("design", "optimal partition by exact DP or value iteration");
    des->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    des->add_option("--population", da.population, "population CSV")->required();
    auto* kopt = des->add_option("--k", da.k, "number of regions");
    auto* kmin = des->add_option("--k-min", da.k_min, "smallest k to consider");
    auto* kmax = des->add_option("--k-max", da.k_max, "largest k to consider");
    auto* eta = des->add_option("--eta", da.eta, "per-boundary penalty");
    des->add_option("--eta-scale", da.eta_scale, "none | population_total");
    des->add_option("--alpha", da.alpha, "circadian exponent (>= 1)");
    des->add_option("--beta", da.beta, "edge exponent (>= 1)");
    des->add_option("--lambda", da.lambda, "edge term weight (>= 0)");
    des->add_option("--min-width", da.min_width, "segment width floor in cells");
    des->add_option("--method", da.method, "dp | vi");
    des->add_option("--gamma", da.gamma, "discount factor for vi, in (0,1]");
    des->add_option("--epsilon", da.epsilon, "vi convergence threshold");
    des->add_flag("--check-dp", da.check_dp, "with vi: also run DP and assert cost equality");
    des->add_option("--threads", da.threads, "worker threads for the anchor sweep");
    des->add_option("--out", da.out, "partition JSON path");
    des->add_option("--seed", da.seed, "seed echoed for reproducibility");
    des->callback([&]() {
        da.k_given = kopt->count() > 0;
        da.k_min_given = kmin->count() > 0;
        da.k_max_given = kmax->count() > 0;
        da.eta_given = eta->count() > 0;
        rc = run_design(da);
    });

    auto* pm = app.add_subcommand("prime-meridian",
                                  "best rotation offset for uniform fixed-width regions");
    pm->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    pm->add_option("--population", pa.population, "population CSV")->required();
    pm->add_option("--k", pa.k, "number of uniform regions (must divide N)")->required();
    pm->add_option("--alpha", pa.alpha, "circadian exponent (>= 1)");
    pm->add_option("--beta", pa.beta, "edge exponent (>= 1)");
    pm->add_option("--lambda", pa.lambda, "edge term weight (>= 0)");
    pm->add_option("--min-width", pa.min_width, "segment width floor in cells");
    pm->add_option("--out", pa.out, "report JSON path");
    pm->add_option("--curve", pa.curve, "offset-cost curve CSV path");
    pm->add_option("--seed", pa.seed, "seed echoed for reproducibility");
    pm->callback([&]() { rc = run_prime_meridian(pa); });

    auto* re = app.add_subcommand("reassign",
                                  "assign units to their nearest designed boundary and emit an "
                                  "estimation-ready CSV");
    re->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    re->add_option("--units", ra.units, "units CSV (unit_id,longitude_deg,outcome[,controls])")
        ->required();
    re->add_option("--partition", ra.partition, "partition JSON from the design command")
        ->required();
    re->add_option("--population", ra.population, "population CSV (grid geometry)")->required();
    re->add_option("--outcome", ra.outcome, "outcome column name");
    re->add_option("--controls", ra.controls, "comma-separated control columns");
    re->add_option("--miles-per-degree", ra.miles_per_degree,
                   "distance scale applied to degrees (default 1 = degrees)");
    re->add_option("--out", ra.out, "output RDD CSV path");
    re->add_option("--report", ra.report, "run report JSON path (default <out>.meta.json)");
    re->add_option("--seed", ra.seed, "seed echoed for reproducibility");
    re->callback([&]() { rc = run_reassign(ra); });

    auto* ev = app.add_subcommand("evaluate",
                                  "recompute a partition file's cost against a population");
    ev->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    ev->add_option("--population", va.population, "population CSV")->required();
    ev->add_option("--partition", va.partition, "partition JSON")->required();
    ev->add_option("--alpha", va.alpha, "circadian exponent (>= 1)");
    ev->add_option("--beta", va.beta, "edge exponent (>= 1)");
    ev->add_option("--lambda", va.lambda, "edge term weight (>= 0)");
    ev->add_option("--min-width", va.min_width, "segment width floor in cells");
    ev->add_option("--eta", va.eta, "per-boundary penalty (default: the file's value)");
    ev->add_option("--out", va.out, "evaluation JSON path");
    ev->add_option("--seed", va.seed, "seed echoed for reproducibility");
    ev->callback([&]() { rc = run_evaluate(va); });

    try {
        app.parse(static_cast<int>(argv2.size()), argv2.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ComputeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
