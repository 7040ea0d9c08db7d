#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "ggv/grid.hpp"
#include "ggv/prime_table.hpp"

namespace ggv {

// Self-adjusting window parameters for the decomposition search.
struct SearchParams {
    std::uint64_t sup = 10;         // upper-window half-width, rows
    std::uint64_t inf = 80;         // lower-window half-width, rows
    std::uint64_t beta = 80;        // lower-window center row
    double growth_factor = 2.0;     // applied on each expansion
    unsigned max_expansions = 20;   // before the exhaustive fallback
    bool fallback_enabled = true;
    bool one_sided_upper = false;   // restrict upper window to [d_hat-sup, d_hat]
    unsigned expansions = 0;        // expansions applied so far
};

enum class Strategy { UpperWindow, LowerWindow, FallbackScan };

const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& name);

// A verified column-constrained two-prime decomposition of an even t:
// col_prime.p + other_prime.p == t and col_prime.m == nat_to_cell(t).n.
struct Decomposition {
    std::uint64_t t;
    PrimeCell col_prime;
    PrimeCell other_prime;
    std::uint64_t delta_obs;  // row of col_prime
    std::uint64_t gamma_obs;  // row of other_prime
    unsigned expansions;
    Strategy strategy;
};

// Windowed search with adaptive expansion and exhaustive fallback. An empty
// result is returned only after the exhaustive column scan, so it proves no
// decomposition exists. Throws std::invalid_argument on odd t, t < 4, or
// t > table.bound().
std::optional<Decomposition> find_decomposition(std::uint64_t t,
                                                const PrimeTable& table,
                                                const SearchParams& params,
                                                double b_coeff,
                                                unsigned columns = 3);

// Independent oracle: scans every column-n prime q <= t-2 from the largest
// down, accepting the first q with t-q prime.
std::optional<Decomposition> brute_force_check(std::uint64_t t,
                                               const PrimeTable& table,
                                               unsigned columns = 3);

// Raised when an even number in range has no two-prime decomposition at all.
struct SgcAnomaly : std::runtime_error {
    explicit SgcAnomaly(std::uint64_t t);
    std::uint64_t t;
};

// Plain Goldbach pair with no column constraint; sanity baseline.
// Throws SgcAnomaly if no pair exists.
std::pair<std::uint64_t, std::uint64_t> unconstrained_goldbach(
    std::uint64_t t, const PrimeTable& table);

// Scales sup and inf by growth_factor (rounded up) and bumps the counter.
SearchParams expand_windows(SearchParams params);

}  // namespace ggv
