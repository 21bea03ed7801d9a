#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "coinpi/analytics.hpp"
#include "coinpi/estimator.hpp"
#include "coinpi/experiments.hpp"
#include "coinpi/manifest.hpp"
#include "coinpi/oracle.hpp"

namespace {

using coinpi::EstimateSummary;
using coinpi::RunManifest;
using nlohmann::ordered_json;

// 17 significant digits: lossless round trip for doubles, so CSV output
// is as reproducible as the JSON.
std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

class Timer {
public:
    double elapsed_ms() const {
        const auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double, std::milli>(now - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

// JSON outputs: payload object with the manifest appended under its own
// key; the checksum covers the payload serialization alone.
void emit_json(ordered_json payload, RunManifest manifest) {
    manifest.output_checksum = coinpi::fnv1a64_hex(payload.dump(2));
    payload["manifest"] = manifest.to_json_value();
    std::cout << payload.dump(2) << "\n";
}

// CSV outputs: manifest as a leading comment line; the checksum covers
// every line after it.
void emit_csv(const std::string& body, RunManifest manifest) {
    manifest.output_checksum = coinpi::fnv1a64_hex(body);
    std::cout << "# manifest " << manifest.to_json() << "\n" << body;
}

std::string rep_row(const coinpi::RepRecord& r) {
    std::string row = std::to_string(r.run_id) + "," +
                      coinpi::method_name(r.method) + "," +
                      std::to_string(r.seed) + "," +
                      std::to_string(r.budget_flips) + "," +
                      std::to_string(r.trials) + "," +
                      std::to_string(r.censored) + ",";
    if (r.has_estimate) {
        row += fmt_double(r.pi_hat) + "," + fmt_double(r.abs_error);
    } else {
        row += ",";
    }
    return row + "\n";
}

constexpr char kRepHeader[] =
    "run_id,method,seed,budget_flips,trials,censored,pi_hat,abs_error\n";

// Row selection for long series tables: every k below 32, then powers
// of two, then the final term.
std::vector<std::uint64_t> sampled_rows(std::uint64_t terms) {
    std::vector<std::uint64_t> ks;
    if (terms <= 63) {
        for (std::uint64_t k = 0; k <= terms; ++k) ks.push_back(k);
        return ks;
    }
    for (std::uint64_t k = 0; k < 32; ++k) ks.push_back(k);
    for (std::uint64_t p = 32; p < terms; p *= 2) ks.push_back(p);
    ks.push_back(terms);
    return ks;
}

struct ExactRow {
    std::uint64_t k = 0;
    double value = 0.0;       // term, or pmf
    double accumulated = 0.0; // partial sum, or cdf
    bool has_bound = false;
    double bound = 0.0; // tail bound, or tail probability
};

int cmd_simulate(std::uint64_t seed, bool use_trials, std::uint64_t amount,
                 const std::string& method, std::uint64_t cap,
                 const std::string& format) {
    coinpi::ExperimentConfig config;
    config.seed = seed;
    config.method =
        method == "walk" ? coinpi::Method::Walk : coinpi::Method::Direct;
    config.cap = cap;
    config.budget =
        coinpi::BudgetSpec{use_trials ? coinpi::BudgetKind::Trials
                                      : coinpi::BudgetKind::Flips,
                           amount};

    const Timer timer;
    const EstimateSummary summary = coinpi::estimate_pi(config);

    RunManifest manifest;
    manifest.subcommand = "simulate";
    manifest.seed = seed;
    manifest.config = "method=" + method +
                      " budget_kind=" + (use_trials ? "trials" : "flips") +
                      " budget=" + std::to_string(amount) +
                      " cap=" + std::to_string(cap) + " format=" + format;
    manifest.wall_time_ms = timer.elapsed_ms();

    if (format == "csv") {
        coinpi::RepRecord r;
        r.run_id = 0;
        r.method = config.method;
        r.seed = seed;
        r.budget_flips = use_trials ? summary.flips_used() : amount;
        r.trials = summary.trials();
        r.censored = summary.censored_trials();
        r.has_estimate = summary.has_estimate();
        if (r.has_estimate) {
            r.pi_hat = summary.pi_hat();
            r.abs_error = std::abs(r.pi_hat - std::numbers::pi);
        }
        emit_csv(std::string(kRepHeader) + rep_row(r), manifest);
        return 0;
    }

    ordered_json payload;
    payload["method"] = method;
    payload["seed"] = seed;
    payload["budget_kind"] = use_trials ? "trials" : "flips";
    payload["budget"] = amount;
    payload.update(ordered_json::parse(summary.to_json()));
    if (config.method == coinpi::Method::Walk) {
        payload["cap"] = cap;
        payload["censor_bias_bound"] = coinpi::analytics::censor_bias_bound(cap);
    }
    emit_json(std::move(payload), std::move(manifest));
    return 0;
}

int cmd_exact(const std::string& what, std::uint64_t terms, double x,
              const std::string& format) {
    using namespace coinpi::analytics;

    const Timer timer;
    coinpi::TauTable table;
    table.extend_to(coinpi::TauTable::kMaxEntries - 1);

    const std::vector<std::uint64_t> ks = sampled_rows(terms);
    std::vector<ExactRow> rows;
    double limit = 0.0;

    if (what == "pmf") {
        limit = 1.0; // cdf limit
        for (const std::uint64_t k : ks) {
            ExactRow row;
            row.k = k;
            if (table.covers(k)) {
                row.value = table.pmf(k);
                row.accumulated = table.cdf(k);
                row.bound = 1.0 - table.cdf(k);
            } else {
                const double tail = tau_tail_far(k);
                row.value = tail / static_cast<double>(2 * k + 1);
                row.accumulated = 1.0 - tail;
                row.bound = tail;
            }
            row.has_bound = true;
            rows.push_back(row);
        }
    } else {
        SeriesTarget target = SeriesTarget::FractionMean;
        if (what == "fraction-series") {
            target = SeriesTarget::FractionMean;
            limit = std::numbers::pi / 4.0;
            x = 1.0;
        } else if (what == "invtau-series") {
            target = SeriesTarget::InvTauMean;
            limit = std::numbers::pi / 2.0 - 1.0;
            x = 1.0;
        } else {
            target = SeriesTarget::Arcsine;
            limit = std::asin(x);
        }
        SeriesIterator it(target, x);
        std::size_t next_row = 0;
        for (std::uint64_t k = 0; k <= terms; ++k) {
            const SeriesState state = it.next();
            if (next_row < ks.size() && ks[next_row] == k) {
                ExactRow row;
                row.k = k;
                row.value = state.term;
                row.accumulated = state.partial_sum;
                if (what == "fraction-series" && k >= 1) {
                    row.has_bound = true;
                    row.bound = fraction_tail_bound(k);
                } else if (what == "invtau-series") {
                    row.has_bound = true;
                    row.bound = inv_tau_tail_bound(k, table);
                } else if (what == "arcsin" && (std::abs(x) < 1.0 || k >= 1)) {
                    row.has_bound = true;
                    row.bound = arcsin_tail_bound(x, k);
                }
                rows.push_back(row);
                ++next_row;
            }
        }
    }

    RunManifest manifest;
    manifest.subcommand = "exact";
    manifest.seed = 0;
    manifest.config = "what=" + what + " terms=" + std::to_string(terms) +
                      (what == "arcsin" ? " x=" + fmt_double(x) : "") +
                      " format=" + format;
    manifest.wall_time_ms = timer.elapsed_ms();

    const bool is_pmf = what == "pmf";
    if (format == "csv") {
        std::string body = is_pmf ? "k,pmf,cdf,tail\n"
                                  : "k,term,partial_sum,tail_bound\n";
        for (const ExactRow& row : rows) {
            body += std::to_string(row.k) + "," + fmt_double(row.value) + "," +
                    fmt_double(row.accumulated) + ",";
            if (row.has_bound) body += fmt_double(row.bound);
            body += "\n";
        }
        body += "# limit " + fmt_double(limit) + "\n";
        emit_csv(body, manifest);
        return 0;
    }

    ordered_json payload;
    payload["what"] = what;
    payload["terms"] = terms;
    if (what == "arcsin") payload["x"] = x;
    payload["limit"] = limit;
    ordered_json rows_json = ordered_json::array();
    for (const ExactRow& row : rows) {
        ordered_json r;
        r["k"] = row.k;
        r[is_pmf ? "pmf" : "term"] = row.value;
        r[is_pmf ? "cdf" : "partial_sum"] = row.accumulated;
        r[is_pmf ? "tail" : "tail_bound"] =
            row.has_bound ? ordered_json(row.bound) : ordered_json(nullptr);
        rows_json.push_back(std::move(r));
    }
    payload["rows"] = std::move(rows_json);
    payload["final_partial_sum"] = rows.back().accumulated;
    emit_json(std::move(payload), std::move(manifest));
    return 0;
}

int cmd_oracle(std::uint64_t max_len, const std::string& mode_name) {
    coinpi::oracle::EnumerationMode mode =
        coinpi::oracle::EnumerationMode::PrunedParallel;
    if (mode_name == "serial") {
        mode = coinpi::oracle::EnumerationMode::PrunedSerial;
    } else if (mode_name == "brute") {
        mode = coinpi::oracle::EnumerationMode::BruteForce;
    }

    const Timer timer;
    const coinpi::oracle::OracleReport report =
        coinpi::oracle::enumerate_first_passage(max_len, mode);
    const coinpi::oracle::AnalyticsComparison cmp =
        coinpi::oracle::oracle_vs_analytics(max_len);

    double max_pmf_residual = 0.0;
    for (const double r : cmp.pmf_residuals) {
        max_pmf_residual = std::max(max_pmf_residual, r);
    }
    const bool ok = cmp.exact_match && cmp.fraction_residual <= 1e-13 &&
                    cmp.inv_tau_residual <= 1e-13 && max_pmf_residual <= 1e-13;

    RunManifest manifest;
    manifest.subcommand = "oracle";
    manifest.seed = 0;
    manifest.config =
        "max_len=" + std::to_string(max_len) + " mode=" + mode_name;
    manifest.wall_time_ms = timer.elapsed_ms();

    ordered_json payload = ordered_json::parse(report.to_json());
    ordered_json check;
    check["exact_match"] = cmp.exact_match;
    check["fraction_residual"] = cmp.fraction_residual;
    check["inv_tau_residual"] = cmp.inv_tau_residual;
    check["max_pmf_residual"] = max_pmf_residual;
    check["passed"] = ok;
    payload["analytics_check"] = std::move(check);
    emit_json(std::move(payload), std::move(manifest));

    if (!ok) {
        std::cerr << "oracle: enumeration disagrees with analytics\n";
        return 2;
    }
    return 0;
}

int cmd_converge(const std::vector<std::uint64_t>& budgets, std::uint64_t reps,
                 std::uint64_t seed) {
    const Timer timer;
    const coinpi::ConvergenceResult result =
        coinpi::convergence_experiment(budgets, reps, seed);

    std::string body = kRepHeader;
    for (const coinpi::RepRecord& r : result.records) body += rep_row(r);
    for (const coinpi::BudgetRow& row : result.rows) {
        body += "# median budget_flips=" + std::to_string(row.budget_flips) +
                " usable_reps=" + std::to_string(row.usable_reps) +
                " median_abs_error=" + fmt_double(row.median_abs_error) + "\n";
    }
    body += "# summary fit_ok=" + std::string(result.fit_ok ? "true" : "false");
    if (result.fit_ok) {
        body += " slope=" + fmt_double(result.slope) +
                " intercept=" + fmt_double(result.intercept);
    }
    body += "\n";

    RunManifest manifest;
    manifest.subcommand = "converge";
    manifest.seed = seed;
    std::string budgets_str;
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        budgets_str += (i ? "," : "") + std::to_string(budgets[i]);
    }
    manifest.config =
        "budgets=" + budgets_str + " reps=" + std::to_string(reps);
    manifest.wall_time_ms = timer.elapsed_ms();
    emit_csv(body, manifest);
    return 0;
}

int cmd_parker(std::uint64_t reps, std::uint64_t seed) {
    const Timer timer;
    const coinpi::ParkerResult result = coinpi::parker_replication(reps, seed);

    const double target =
        std::abs(coinpi::kTenThousandFlipEstimate - std::numbers::pi);
    std::string body = kRepHeader;
    for (const coinpi::RepRecord& r : result.records) body += rep_row(r);
    body += "# summary usable_reps=" + std::to_string(result.usable_reps) +
            " median_abs_error=" + fmt_double(result.median_abs_error) +
            " q25_abs_error=" + fmt_double(result.q25_abs_error) +
            " q75_abs_error=" + fmt_double(result.q75_abs_error) +
            " target_abs_error=" + fmt_double(target) +
            " target_quantile=" + fmt_double(result.target_quantile) + "\n";

    RunManifest manifest;
    manifest.subcommand = "parker";
    manifest.seed = seed;
    manifest.config = "reps=" + std::to_string(reps) + " budget=10000";
    manifest.wall_time_ms = timer.elapsed_ms();
    emit_csv(body, manifest);
    return 0;
}

int cmd_buffon(std::uint64_t drops, std::uint64_t seed, double needle_len,
               double spacing) {
    const Timer timer;
    const coinpi::BuffonSummary summary =
        coinpi::run_buffon(drops, seed, needle_len, spacing);

    std::string body =
        "drops,crossings,needle_len,spacing,frequency,stderr_frequency,"
        "pi_hat,abs_error\n";
    body += std::to_string(summary.drops()) + "," +
            std::to_string(summary.crossings()) + "," +
            fmt_double(summary.needle_len()) + "," +
            fmt_double(summary.spacing()) + ",";
    if (summary.drops() > 0) {
        body += fmt_double(summary.frequency()) + "," +
                fmt_double(summary.stderr_frequency()) + ",";
    } else {
        body += ",,";
    }
    if (summary.has_estimate()) {
        body += fmt_double(summary.pi_hat()) + "," +
                fmt_double(std::abs(summary.pi_hat() - std::numbers::pi));
    } else {
        body += ",";
    }
    body += "\n";

    RunManifest manifest;
    manifest.subcommand = "buffon";
    manifest.seed = seed;
    manifest.config = "drops=" + std::to_string(drops) +
                      " needle_len=" + fmt_double(needle_len) +
                      " spacing=" + fmt_double(spacing);
    manifest.wall_time_ms = timer.elapsed_ms();
    emit_csv(body, manifest);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Estimate pi by tossing a fair coin until heads lead"};
    app.set_version_flag("--version", std::string(coinpi::kToolVersion));
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads,
                   "Worker threads (0 = runtime default); results do not "
                   "depend on this");

    auto* sim = app.add_subcommand("simulate", "Run one seeded estimate");
    std::uint64_t sim_seed = 0;
    std::uint64_t sim_trials = 0;
    std::uint64_t sim_flips = 0;
    std::string sim_method = "walk";
    std::uint64_t sim_cap = (std::uint64_t{1} << 24) - 1;
    std::string sim_format = "json";
    sim->add_option("--seed", sim_seed, "Master seed");
    auto* sim_trials_opt =
        sim->add_option("--trials", sim_trials, "Trial budget (attempts)");
    auto* sim_flips_opt =
        sim->add_option("--flips", sim_flips, "Flip budget (coin tosses)");
    sim_trials_opt->excludes(sim_flips_opt);
    sim_flips_opt->excludes(sim_trials_opt);
    sim->add_option("--method", sim_method, "walk or direct")
        ->check(CLI::IsMember({"walk", "direct"}));
    sim->add_option("--cap", sim_cap, "Walk step limit per trial");
    sim->add_option("--format", sim_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* exact = app.add_subcommand("exact", "Closed-form series tables");
    std::string exact_what = "fraction-series";
    std::uint64_t exact_terms = 20;
    double exact_x = 1.0;
    std::string exact_format = "json";
    exact
        ->add_option("--what", exact_what,
                     "pmf, fraction-series, invtau-series, or arcsin")
        ->check(CLI::IsMember(
            {"pmf", "fraction-series", "invtau-series", "arcsin"}));
    exact->add_option("--terms", exact_terms, "Last series index K");
    exact->add_option("--x", exact_x, "Argument for arcsin, |x| <= 1");
    exact->add_option("--format", exact_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* oracle = app.add_subcommand(
        "oracle", "Exhaustive path enumeration and cross-check");
    std::uint64_t oracle_len = 21;
    std::string oracle_mode = "parallel";
    oracle->add_option("--max-len", oracle_len, "Odd sequence length, <= 25");
    oracle->add_option("--mode", oracle_mode, "parallel, serial, or brute")
        ->check(CLI::IsMember({"parallel", "serial", "brute"}));

    auto* converge =
        app.add_subcommand("converge", "Error-scaling study over flip budgets");
    std::vector<std::uint64_t> conv_budgets{1000, 10000, 100000, 1000000};
    std::uint64_t conv_reps = 50;
    std::uint64_t conv_seed = 0;
    converge->add_option("--budgets", conv_budgets, "Flip budgets, ascending")
        ->delimiter(',');
    converge->add_option("--reps", conv_reps, "Estimates per budget");
    converge->add_option("--seed", conv_seed, "Master seed");

    auto* parker = app.add_subcommand(
        "parker", "Replicate the historical 10,000-flip experiment");
    std::uint64_t parker_reps = 1000;
    std::uint64_t parker_seed = 0;
    parker->add_option("--reps", parker_reps, "Independent replications");
    parker->add_option("--seed", parker_seed, "Master seed");

    auto* buffon =
        app.add_subcommand("buffon", "Needle-drop crossing frequency");
    std::uint64_t buffon_drops = 1000000;
    std::uint64_t buffon_seed = 0;
    double buffon_len = 1.0;
    double buffon_spacing = 1.0;
    buffon->add_option("--drops", buffon_drops, "Needle drops");
    buffon->add_option("--seed", buffon_seed, "Master seed");
    buffon->add_option("--needle-len", buffon_len, "Needle length");
    buffon->add_option("--spacing", buffon_spacing, "Line spacing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (*sim) {
            const bool use_trials = sim_trials_opt->count() > 0;
            const bool use_flips = sim_flips_opt->count() > 0;
            if (use_trials == use_flips) {
                std::cerr << "simulate: exactly one of --trials or --flips "
                             "is required\n";
                return 1;
            }
            return cmd_simulate(sim_seed, use_trials,
                                use_trials ? sim_trials : sim_flips,
                                sim_method, sim_cap, sim_format);
        }
        if (*exact) {
            return cmd_exact(exact_what, exact_terms, exact_x, exact_format);
        }
        if (*oracle) return cmd_oracle(oracle_len, oracle_mode);
        if (*converge) return cmd_converge(conv_budgets, conv_reps, conv_seed);
        if (*parker) return cmd_parker(parker_reps, parker_seed);
        if (*buffon) {
            return cmd_buffon(buffon_drops, buffon_seed, buffon_len,
                              buffon_spacing);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
