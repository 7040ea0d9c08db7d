#include "ggv/search.hpp"

#include <algorithm>
#include <cmath>

#include "ggv/primality.hpp"
#include "ggv/stats.hpp"

namespace ggv {
namespace {

void check_even_range(std::uint64_t t, const PrimeTable& table, const char* who) {
    if (t < 4 || t % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": t must be an even integer >= 4, got " +
                                    std::to_string(t));
    if (t > table.bound())
        throw std::invalid_argument(std::string(who) + ": t=" + std::to_string(t) +
                                    " beyond sieved bound " + std::to_string(table.bound()));
}

// Largest row whose column-n ordinal fits in the table.
std::uint64_t max_row_for_column(unsigned n, const PrimeTable& table, unsigned columns) {
    if (table.total_count() < n) return 0;
    return (table.total_count() - n) / columns + 1;
}

Decomposition make_result(std::uint64_t t, PrimeCell col, PrimeCell other,
                          unsigned expansions, Strategy strategy) {
    Decomposition d;
    d.t = t;
    d.col_prime = col;
    d.other_prime = other;
    d.delta_obs = col.delta;
    d.gamma_obs = other.delta;
    d.expansions = expansions;
    d.strategy = strategy;
    return d;
}

}  // namespace

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::UpperWindow: return "upper-window";
        case Strategy::LowerWindow: return "lower-window";
        case Strategy::FallbackScan: return "fallback-scan";
    }
    return "?";
}

std::optional<Strategy> strategy_from_name(const std::string& name) {
    if (name == "upper-window") return Strategy::UpperWindow;
    if (name == "lower-window") return Strategy::LowerWindow;
    if (name == "fallback-scan") return Strategy::FallbackScan;
    return std::nullopt;
}

SgcAnomaly::SgcAnomaly(std::uint64_t t_)
    : std::runtime_error("no two-prime decomposition for even " + std::to_string(t_)),
      t(t_) {}

SearchParams expand_windows(SearchParams params) {
    params.sup = static_cast<std::uint64_t>(std::ceil(params.sup * params.growth_factor));
    params.inf = static_cast<std::uint64_t>(std::ceil(params.inf * params.growth_factor));
    ++params.expansions;
    return params;
}

std::optional<Decomposition> find_decomposition(std::uint64_t t, const PrimeTable& table,
                                                const SearchParams& initial, double b_coeff,
                                                unsigned columns) {
    check_even_range(t, table, "find_decomposition");
    const NatCell nc = nat_to_cell(t, columns);
    const unsigned n = nc.n;
    const std::uint64_t delta_hat =
        nc.alpha >= 2 ? predict_delta(nc.alpha, b_coeff) : 1;

    // Rows above the one holding the largest column-n prime <= t-2 can only
    // produce candidates >= t; never scan past it.
    const std::uint64_t pi = table.count_leq(t - 2);
    const std::uint64_t top_row = pi >= n ? (pi - (pi - n) % columns - 1) / columns + 1 : 0;

    SearchParams params = initial;
    for (;;) {
        // Upper window: rows around the predicted delta, column n only,
        // scanned from the top so the prime closest to t wins.
        std::uint64_t hi = params.one_sided_upper ? delta_hat : delta_hat + params.sup;
        hi = std::min(hi, top_row);
        const std::uint64_t lo = delta_hat > params.sup ? delta_hat - params.sup : 1;
        for (std::uint64_t delta = hi + 1; delta-- > lo;) {
            const std::uint64_t ordinal = columns * (delta - 1) + n;
            const std::uint64_t q = table.nth_prime(ordinal);
            if (q >= t) continue;
            const std::uint64_t r = t - q;
            if (table.contains(r)) {
                PrimeCell col{q, ordinal, n, delta};
                return make_result(t, col, prime_to_cell(r, table, columns),
                                   params.expansions, Strategy::UpperWindow);
            }
        }

        // Lower window: small rows, any column; the complement must land in
        // column n of the prime grid.
        const std::uint64_t glo = params.beta > params.inf ? params.beta - params.inf : 1;
        const std::uint64_t ghi = params.beta + params.inf;
        bool exhausted = false;
        for (std::uint64_t gamma = glo; gamma <= ghi && !exhausted; ++gamma) {
            for (unsigned m = 1; m <= columns; ++m) {
                const std::uint64_t ordinal = columns * (gamma - 1) + m;
                if (ordinal > pi) {
                    exhausted = true;
                    break;
                }
                const std::uint64_t s = table.nth_prime(ordinal);
                if (s > t - 2) {
                    exhausted = true;
                    break;
                }
                const std::uint64_t r = t - s;
                if (!table.contains(r)) continue;
                const PrimeCell rc = prime_to_cell(r, table, columns);
                if (rc.m != n) continue;
                PrimeCell other{s, ordinal, m, gamma};
                return make_result(t, rc, other, params.expansions, Strategy::LowerWindow);
            }
        }

        if (params.expansions >= params.max_expansions) break;
        params = expand_windows(params);
    }

    if (!params.fallback_enabled) return std::nullopt;

    // Exhaustive fallback over every column-n prime <= t-2, largest first.
    // Only after this scan is NotFound a proof of exception.
    if (pi >= n) {
        std::uint64_t ordinal = pi - (pi - n) % columns;
        for (;;) {
            const std::uint64_t q = table.nth_prime(ordinal);
            const std::uint64_t r = t - q;
            if (r >= 2 && table.contains(r)) {
                PrimeCell col{q, ordinal, n, (ordinal - 1) / columns + 1};
                return make_result(t, col, prime_to_cell(r, table, columns),
                                   params.expansions, Strategy::FallbackScan);
            }
            if (ordinal <= columns) break;
            ordinal -= columns;
        }
    }
    return std::nullopt;
}

std::optional<Decomposition> brute_force_check(std::uint64_t t, const PrimeTable& table,
                                               unsigned columns) {
    check_even_range(t, table, "brute_force_check");
    const unsigned n = nat_to_cell(t, columns).n;
    const std::uint64_t pi = table.count_leq(t - 2);
    if (pi < n) return std::nullopt;
    // Largest ordinal <= pi that sits in column n.
    std::uint64_t ordinal = pi - (pi - n) % columns;
    for (;;) {
        const std::uint64_t q = table.nth_prime(ordinal);
        const std::uint64_t r = t - q;
        if (r >= 2 && table.contains(r)) {
            PrimeCell col{q, ordinal, n, (ordinal - 1) / columns + 1};
            return make_result(t, col, prime_to_cell(r, table, columns), 0,
                               Strategy::FallbackScan);
        }
        if (ordinal <= columns) break;
        ordinal -= columns;
    }
    return std::nullopt;
}

std::pair<std::uint64_t, std::uint64_t> unconstrained_goldbach(std::uint64_t t,
                                                              const PrimeTable& table) {
    check_even_range(t, table, "unconstrained_goldbach");
    for (std::uint64_t k = 1; k <= table.total_count(); ++k) {
        const std::uint64_t p = table.nth_prime(k);
        if (p > t / 2) break;
        if (table.contains(t - p)) return {p, t - p};
    }
    throw SgcAnomaly(t);
}

}  // namespace ggv
