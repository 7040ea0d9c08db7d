// Command-line front end: sieve primes, verify column-constrained Goldbach
// decompositions over an even range, compare against the brute-force oracle,
// and fit the row-index distribution from exported samples.

#include <cinttypes>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ggv/grid.hpp"
#include "ggv/primality.hpp"
#include "ggv/prime_table.hpp"
#include "ggv/runner.hpp"
#include "ggv/search.hpp"
#include "ggv/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAnomaly = 1;
constexpr int kExitUsage = 2;

ggv::PrimeTable make_table(std::uint64_t sieve_bound, const std::string& primes_path) {
    if (!primes_path.empty()) {
        std::cerr << "loading primes from " << primes_path << "\n";
        return ggv::PrimeTable::load_primes_dat(primes_path);
    }
    std::cerr << "sieving up to " << sieve_bound << "\n";
    return ggv::PrimeTable::build(sieve_bound);
}

int cmd_sieve(std::uint64_t bound, std::uint64_t segment, const std::string& out) {
    const auto table = ggv::PrimeTable::build(bound, segment);
    table.save_primes_dat(out);
    std::cerr << table.total_count() << " primes <= " << bound << " written to "
              << out << "\n";
    return kExitOk;
}

int cmd_verify(const ggv::RunConfig& cfg, const std::string& primes_path) {
    const auto table = make_table(cfg.sieve_bound, primes_path);
    const ggv::RunReport report = ggv::run_verification(cfg, table);
    if (cfg.report_path.empty()) std::cout << ggv::format_report(report);
    return kExitOk;
}

int cmd_oracle(std::uint64_t start, std::uint64_t end, std::uint64_t sieve_bound,
               const std::string& primes_path, const ggv::SearchParams& params,
               double b_seed, unsigned columns) {
    const auto table = make_table(sieve_bound, primes_path);
    std::uint64_t mismatches = 0;
    for (std::uint64_t t = start; t <= end; t += 2) {
        const auto found = ggv::find_decomposition(t, table, params, b_seed, columns);
        const auto oracle = ggv::brute_force_check(t, table, columns);
        if (found.has_value() != oracle.has_value()) {
            ++mismatches;
            std::cerr << "mismatch at t=" << t << ": search "
                      << (found ? "found" : "NotFound") << ", oracle "
                      << (oracle ? "found" : "NotFound") << "\n";
            continue;
        }
        if (found) {
            const auto& d = *found;
            if (d.col_prime.p + d.other_prime.p != t ||
                !ggv::is_prime_u64(d.col_prime.p) || !ggv::is_prime_u64(d.other_prime.p) ||
                d.col_prime.m != ggv::nat_to_cell(t, columns).n) {
                ++mismatches;
                std::cerr << "invalid decomposition at t=" << t << "\n";
            }
        }
    }
    std::cout << mismatches << " mismatches\n";
    return mismatches == 0 ? kExitOk : kExitAnomaly;
}

int cmd_fit(const std::string& samples_path, unsigned order, const std::string& out,
            const std::string& residuals_path) {
    const auto rows = ggv::read_samples_tsv(samples_path);
    const auto samples = ggv::to_delta_samples(rows);
    const ggv::FitModel model = ggv::fit_b(samples);
    const auto residuals = ggv::residual_series(samples, model);
    const auto hist = ggv::gamma_histogram(samples);

    std::vector<std::pair<double, double>> frac_points;
    frac_points.reserve(residuals.size());
    for (const auto& r : residuals)
        frac_points.emplace_back(static_cast<double>(r.alpha), r.fractional);

    std::ostringstream report;
    report.precision(10);
    report << "B=" << model.b_coeff << "\n"
           << "r=" << model.correlation << "\n"
           << "sample_count=" << model.sample_count << "\n"
           << "dropped_low_alpha=" << model.dropped_low_alpha << "\n"
           << "alpha_min=" << model.alpha_min << "\n"
           << "alpha_max=" << model.alpha_max << "\n"
           << "gamma_min=" << hist.min << "\n"
           << "gamma_max=" << hist.max << "\n"
           << "gamma_mode=" << hist.mode << "\n";
    if (frac_points.size() > order) {
        const auto poly = ggv::poly_regression(frac_points, order);
        for (unsigned i = 0; i <= poly.order; ++i)
            report << "poly_c" << i << "=" << poly.coefficients[i] << "\n";
        report << "poly_rss=" << poly.rss << "\n"
               << "poly_ill_conditioned=" << (poly.ill_conditioned ? 1 : 0) << "\n";
    }

    if (out.empty()) {
        std::cout << report.str();
    } else {
        std::ofstream f(out);
        f << report.str();
        if (!f) throw std::runtime_error("write failure on " + out);
    }

    if (!residuals_path.empty()) {
        std::ofstream f(residuals_path);
        f << "alpha\tfractional\tobserved_minus_predicted\n";
        for (const auto& r : residuals)
            f << r.alpha << '\t' << r.fractional << '\t' << r.observed_minus_pred << "\n";
        if (!f) throw std::runtime_error("write failure on " + residuals_path);
    }
    return kExitOk;
}

int cmd_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const ggv::RunReport r = ggv::parse_report(ss.str());
    std::cout << "Verified range   [" << r.start << ", " << r.end << "]"
              << (r.complete ? "" : "  (incomplete)") << "\n";
    std::cout << "Evens tested     " << r.evens_tested << "\n";
    std::cout << "Exceptions       ";
    if (r.exceptions.empty()) {
        std::cout << "none\n";
    } else {
        for (std::size_t i = 0; i < r.exceptions.size(); ++i)
            std::cout << (i ? ", " : "") << r.exceptions[i];
        std::cout << "\n";
    }
    std::cout << "Strategy hits    upper-window " << r.upper_window_hits
              << ", lower-window " << r.lower_window_hits << ", fallback-scan "
              << r.fallback_hits << "\n";
    std::cout << "Max expansions   " << r.max_expansions_observed << "\n";
    std::cout << "Max gamma row    " << r.max_gamma << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Column-constrained Goldbach decomposition verifier"};
    app.require_subcommand(1);

    // sieve
    auto* sieve = app.add_subcommand("sieve", "Build a prime table and write primes.dat");
    std::uint64_t sieve_bound = 1'000'000;
    std::uint64_t segment = ggv::PrimeTable::kDefaultSegmentOdds;
    std::string sieve_out = "primes.dat";
    sieve->add_option("--bound", sieve_bound, "Sieve upper bound")->required();
    sieve->add_option("--segment-size", segment, "Odd entries per sieve segment");
    sieve->add_option("--out", sieve_out, "Output path");

    // shared search flags
    ggv::RunConfig cfg;
    std::string primes_path;
    auto add_search_flags = [&](CLI::App* cmd) {
        cmd->add_option("--sup", cfg.search.sup, "Upper-window half-width (rows)");
        cmd->add_option("--inf", cfg.search.inf, "Lower-window half-width (rows)");
        cmd->add_option("--beta", cfg.search.beta, "Lower-window center row");
        cmd->add_option("--growth", cfg.search.growth_factor, "Window growth factor");
        cmd->add_option("--max-expansions", cfg.search.max_expansions,
                        "Window expansions before the exhaustive fallback");
        cmd->add_option("--columns", cfg.columns, "Grid column count K");
        cmd->add_flag("--one-sided-upper", cfg.search.one_sided_upper,
                      "Restrict the upper window to rows at or below the prediction");
        cmd->add_option("--b", cfg.b_seed, "Predictor coefficient B");
        cmd->add_option("--primes", primes_path, "Load primes.dat instead of sieving");
    };

    // verify
    auto* verify = app.add_subcommand("verify", "Verify an even range");
    verify->add_option("--start", cfg.start, "First even integer")->required();
    verify->add_option("--end", cfg.end, "Last even integer")->required();
    verify->add_option("--sieve-bound", cfg.sieve_bound, "Prime table bound")->required();
    verify->add_option("--shards", cfg.shard_count, "Worker shard count");
    verify->add_option("--checkpoint", cfg.checkpoint_path, "Checkpoint file path");
    verify->add_option("--checkpoint-interval", cfg.checkpoint_interval,
                       "Evens per shard between checkpoint flushes");
    verify->add_option("--out", cfg.report_path, "Report file (default: stdout)");
    verify->add_option("--samples", cfg.samples_path, "Samples TSV output path");
    verify->add_option("--interrupt-at", cfg.interrupt_after,
                       "Stop cooperatively after this t (for resume testing)");
    add_search_flags(verify);

    // resume
    auto* resume_cmd = app.add_subcommand("resume", "Resume a checkpointed run");
    std::string resume_path;
    resume_cmd->add_option("--checkpoint", resume_path, "Checkpoint file")->required();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Compare search against the brute-force oracle");
    std::uint64_t o_start = 4, o_end = 100000, o_bound = 0;
    oracle->add_option("--start", o_start, "First even integer");
    oracle->add_option("--end", o_end, "Last even integer")->required();
    oracle->add_option("--sieve-bound", o_bound, "Prime table bound (default: end)");
    add_search_flags(oracle);

    // fit
    auto* fit = app.add_subcommand("fit", "Fit the row-index distribution from a samples TSV");
    std::string fit_samples, fit_out, fit_residuals;
    unsigned fit_order = 10;
    fit->add_option("--samples", fit_samples, "Samples TSV from verify")->required();
    fit->add_option("--order", fit_order, "Residual polynomial order");
    fit->add_option("--out", fit_out, "Fit report file (default: stdout)");
    fit->add_option("--residuals", fit_residuals, "Residual series TSV output");

    // report
    auto* rep = app.add_subcommand("report", "Pretty-print a report file");
    std::string report_in;
    rep->add_option("--in", report_in, "Report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sieve->parsed()) return cmd_sieve(sieve_bound, segment, sieve_out);
        if (verify->parsed()) return cmd_verify(cfg, primes_path);
        if (resume_cmd->parsed()) {
            const ggv::RunReport report = ggv::resume(resume_path);
            std::cout << ggv::format_report(report);
            return kExitOk;
        }
        if (oracle->parsed()) {
            if (o_bound == 0) o_bound = o_end;
            return cmd_oracle(o_start, o_end, o_bound, primes_path, cfg.search,
                              cfg.b_seed, cfg.columns);
        }
        if (fit->parsed()) return cmd_fit(fit_samples, fit_order, fit_out, fit_residuals);
        if (rep->parsed()) return cmd_report(report_in);
    } catch (const ggv::SgcAnomaly& e) {
        std::cerr << "FATAL ANOMALY: " << e.what() << "\n";
        return kExitAnomaly;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnomaly;
    }
    return kExitUsage;
}
