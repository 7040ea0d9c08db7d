// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <unistd.h>
#include <vector>

#include "ggv/grid.hpp"
#include "ggv/primality.hpp"
#include "ggv/prime_table.hpp"
#include "ggv/runner.hpp"
#include "ggv/search.hpp"
#include "ggv/stats.hpp"

namespace {

int failures = 0;

void report(int criterion, const char* what, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, what,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. exceptions over [4, 1e7] are exactly {6, 16, 164}
void criterion_exception_set(const ggv::PrimeTable& table) {
    const auto t0 = std::chrono::steady_clock::now();
    ggv::RunConfig cfg;
    cfg.start = 4;
    cfg.end = 10'000'000;
    cfg.sieve_bound = 10'000'000;
    cfg.shard_count = 8;
    const ggv::RunReport r = ggv::run_verification(cfg, table);
    const bool ok = r.exceptions == std::vector<std::uint64_t>{6, 16, 164} && r.complete;
    std::string detail = "exceptions={";
    for (std::size_t i = 0; i < r.exceptions.size(); ++i)
        detail += (i ? "," : "") + std::to_string(r.exceptions[i]);
    char buf[48];
    std::snprintf(buf, sizeof buf, "} in %.1fs", seconds_since(t0));
    report(1, "exception set over [4, 1e7]", ok, detail + buf);
}

// 2. endpoint spot check at 8,433,220,000
void criterion_endpoint() {
    bool ok = ggv::is_prime_u64(8433219983ull);
    ok = ok && ggv::is_prime_u64(17);
    ok = ok && (8433219983ull + 17 == 8433220000ull);
    const auto small = ggv::PrimeTable::build(100);
    const ggv::PrimeCell far_prime = ggv::prime_to_cell(17, small, 3);
    ok = ok && far_prime.ordinal == 7 && far_prime.m == 1;
    ok = ok && ggv::nat_to_cell(8433220000ull, 3).n == 1;
    report(2, "endpoint 8433220000 = 8433219983 + 17, matching columns", ok);
}

// 3. search agrees with the brute-force oracle on [4, 1e5]
void criterion_oracle(const ggv::PrimeTable& table) {
    const auto t0 = std::chrono::steady_clock::now();
    const ggv::SearchParams params;
    std::uint64_t mismatches = 0;
    for (std::uint64_t t = 4; t <= 100'000; t += 2) {
        const auto found = ggv::find_decomposition(t, table, params, 0.997602);
        const auto oracle = ggv::brute_force_check(t, table);
        if (found.has_value() != oracle.has_value()) {
            ++mismatches;
            continue;
        }
        if (found) {
            const auto& d = *found;
            if (d.col_prime.p + d.other_prime.p != t ||
                !ggv::is_prime_u64(d.col_prime.p) ||
                !ggv::is_prime_u64(d.other_prime.p) ||
                d.col_prime.m != ggv::nat_to_cell(t, 3).n)
                ++mismatches;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%llu mismatches in %.1fs",
                  static_cast<unsigned long long>(mismatches), seconds_since(t0));
    report(3, "oracle equivalence and re-verification on [4, 1e5]", mismatches == 0, buf);
}

// 4. plain Goldbach pairs exist for every even t in [4, 1e6]
void criterion_sgc(const ggv::PrimeTable& table) {
    const auto t0 = std::chrono::steady_clock::now();
    std::uint64_t checked = 0;
    bool ok = true;
    try {
        for (std::uint64_t t = 4; t <= 1'000'000; t += 2) {
            ggv::unconstrained_goldbach(t, table);
            ++checked;
        }
    } catch (const ggv::SgcAnomaly&) {
        ok = false;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%llu evens in %.1fs",
                  static_cast<unsigned long long>(checked), seconds_since(t0));
    report(4, "unconstrained Goldbach baseline on [4, 1e6]", ok, buf);
}

// 5. fit on real samples from t <= 3e6 plus synthetic recovery
void criterion_fit(const ggv::PrimeTable& table) {
    const auto t0 = std::chrono::steady_clock::now();
    ggv::RunConfig cfg;
    cfg.start = 4;
    cfg.end = 3'000'000;
    cfg.sieve_bound = 10'000'000;
    cfg.shard_count = 8;
    std::vector<ggv::SampleRow> rows;
    ggv::run_verification(cfg, table, &rows);
    const ggv::FitModel model = ggv::fit_b(ggv::to_delta_samples(rows));
    const bool real_ok =
        model.correlation >= 0.999 && model.b_coeff >= 0.90 && model.b_coeff <= 1.10;

    std::vector<ggv::DeltaSample> synthetic;
    for (std::uint64_t a = 10; a <= 100'000; a += 9) {
        const double x = static_cast<double>(a) / std::log(static_cast<double>(a));
        synthetic.push_back({a, static_cast<std::uint64_t>(std::llround(x)), 1});
    }
    const ggv::FitModel sm = ggv::fit_b(synthetic);
    const bool synth_ok = std::fabs(sm.b_coeff - 1.0) < 1e-3;

    char buf[160];
    std::snprintf(buf, sizeof buf, "B=%.6f r=%.6f synthetic B=%.6f, %.1fs",
                  model.b_coeff, model.correlation, sm.b_coeff, seconds_since(t0));
    report(5, "fit consistency: r >= 0.999, B in [0.90, 1.10], synthetic recovery",
           real_ok && synth_ok, buf);
}

// 6. invariant suites
void criterion_invariants(const ggv::PrimeTable& table) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;

    for (std::uint64_t t = 1; t <= 1'000'000 && ok; ++t) {
        const ggv::NatCell c = ggv::nat_to_cell(t, 3);
        if (ggv::cell_to_nat(c.n, c.alpha, 3) != t) ok = false;
    }
    const bool grid_ok = ok;

    ok = true;
    for (std::uint64_t k = 1; k <= 100'000 && ok; ++k)
        if (table.prime_index(table.nth_prime(k)) != k) ok = false;
    const bool index_ok = ok;

    ok = true;
    auto trial_division = [](std::uint64_t x) {
        if (x < 2) return false;
        if (x % 2 == 0) return x == 2;
        for (std::uint64_t d = 3; d * d <= x; d += 2)
            if (x % d == 0) return false;
        return true;
    };
    for (std::uint64_t x = 2; x <= 1'000'000 && ok; ++x)
        if (table.contains(x) != trial_division(x)) ok = false;
    const bool sieve_ok = ok;

    std::vector<std::pair<double, double>> constant, quad;
    for (double x = 0; x <= 10; x += 0.25) {
        constant.emplace_back(x, 3.0);
        quad.emplace_back(x, x * x);
    }
    const auto pc = ggv::poly_regression(constant, 2);
    const auto pq = ggv::poly_regression(quad, 2);
    const bool poly_ok = std::fabs(pc.coefficients[0] - 3.0) < 1e-6 &&
                         std::fabs(pc.coefficients[1]) < 1e-6 &&
                         std::fabs(pc.coefficients[2]) < 1e-6 &&
                         std::fabs(pq.coefficients[2] - 1.0) < 1e-6;

    char buf[160];
    std::snprintf(buf, sizeof buf, "grid=%d index=%d sieve=%d poly=%d, %.1fs", grid_ok,
                  index_ok, sieve_ok, poly_ok, seconds_since(t0));
    report(6, "invariant suites (bijections, inverses, sieve-vs-trial, poly recovery)",
           grid_ok && index_ok && sieve_ok && poly_ok, buf);
}

// 7. determinism across shard counts and interrupt/resume equivalence
void criterion_determinism(const ggv::PrimeTable& table) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() /
        ("ggv_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);

    ggv::RunConfig one;
    one.start = 4;
    one.end = 1'000'000;
    one.sieve_bound = 10'000'000;
    one.shard_count = 1;
    const std::string r1 = ggv::format_report(ggv::run_verification(one, table));

    ggv::RunConfig eight = one;
    eight.shard_count = 8;
    const std::string r8 = ggv::format_report(ggv::run_verification(eight, table));
    const bool shards_ok = r1 == r8;

    ggv::RunConfig ck = eight;
    ck.checkpoint_path = (dir / "run.ckpt").string();
    ck.checkpoint_interval = 4096;
    ck.interrupt_after = 500'000;
    const ggv::RunReport partial = ggv::run_verification(ck, table);
    bool resume_ok = !partial.complete;
    const ggv::RunReport resumed = ggv::resume(ck.checkpoint_path);
    resume_ok = resume_ok && ggv::format_report(resumed) == r8;

    std::filesystem::remove_all(dir);
    char buf[96];
    std::snprintf(buf, sizeof buf, "shards_identical=%d resume_identical=%d, %.1fs",
                  shards_ok, resume_ok, seconds_since(t0));
    report(7, "determinism across shard counts and interrupt/resume", shards_ok && resume_ok,
           buf);
}

}  // namespace

int main() {
    std::cerr << "building prime table to 1e7...\n";
    const auto table = ggv::PrimeTable::build(10'000'000);

    criterion_exception_set(table);
    criterion_endpoint();
    criterion_oracle(table);
    criterion_sgc(table);
    criterion_fit(table);
    criterion_invariants(table);
    criterion_determinism(table);

    if (failures) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
