#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ggv/prime_table.hpp"
#include "ggv/search.hpp"
#include "ggv/stats.hpp"

namespace ggv {

struct RunConfig {
    std::uint64_t start = 4;
    std::uint64_t end = 4;
    std::uint64_t sieve_bound = 0;
    unsigned shard_count = 1;
    unsigned columns = 3;
    double b_seed = 0.997602;
    SearchParams search;

    std::string checkpoint_path;                   // empty = no checkpointing
    std::uint64_t checkpoint_interval = 1u << 16;  // evens per shard between flushes
    std::string report_path;
    std::string samples_path;

    // Test hook: request a cooperative stop once any shard finishes this t.
    std::uint64_t interrupt_after = 0;

    // Throws std::invalid_argument on violated range invariants.
    void validate() const;
    std::string canonical() const;  // deterministic key=value serialization
    std::uint64_t digest() const;
};

struct RunReport {
    std::uint64_t start = 0;
    std::uint64_t end = 0;
    std::uint64_t evens_tested = 0;
    std::vector<std::uint64_t> exceptions;  // sorted
    std::uint64_t upper_window_hits = 0;
    std::uint64_t lower_window_hits = 0;
    std::uint64_t fallback_hits = 0;
    unsigned max_expansions_observed = 0;
    std::uint64_t max_gamma = 0;
    bool complete = false;
    double seconds = 0.0;  // telemetry only, never serialized
};

// Deterministic serialization; excludes wall-clock time so reports from
// equivalent runs compare byte-identical.
std::string format_report(const RunReport& report);
RunReport parse_report(const std::string& text);

struct SampleRow {
    std::uint64_t t;
    unsigned n;
    std::uint64_t alpha;
    std::uint64_t col_prime;
    std::uint64_t delta_obs;
    std::uint64_t other_prime;
    std::uint64_t gamma_obs;
    Strategy strategy;
    unsigned expansions;
};

extern const char* const kSamplesHeader;
std::string format_sample_row(const SampleRow& row);
void write_samples_tsv(const std::string& path, const std::vector<SampleRow>& rows);

// Verifies every even t in [start, end] exactly once. Output is deterministic
// for a fixed config regardless of shard_count. SGC failure anywhere in range
// throws SgcAnomaly. Found samples are appended to *rows when non-null.
RunReport run_verification(const RunConfig& config, const PrimeTable& table,
                           std::vector<SampleRow>* rows = nullptr);

// Continues an interrupted run from its checkpoint; the final report equals
// an uninterrupted run's. A completed checkpoint reloads its report without
// recomputation. Throws std::runtime_error on digest mismatch or corruption.
RunReport resume(const std::string& checkpoint_path,
                 std::vector<SampleRow>* rows = nullptr);

std::vector<DeltaSample> to_delta_samples(const std::vector<SampleRow>& rows);

// Parses a samples TSV (with header) back into rows.
std::vector<SampleRow> read_samples_tsv(const std::string& path);

}  // namespace ggv
