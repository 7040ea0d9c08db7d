#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ggv {

// Sieved primes up to a bound, stored as a bitmap over odd numbers with
// cumulative counts every block of words. Immutable after build; all queries
// are const and safe for concurrent readers.
class PrimeTable {
public:
    static constexpr std::uint64_t kDefaultSegmentOdds = 1u << 20;
    static constexpr std::uint64_t kDefaultMemoryBudget = 1ull << 30;  // bytes

    // Throws std::invalid_argument for bound < 2, std::length_error when the
    // bitmap would exceed memory_budget_bytes.
    static PrimeTable build(std::uint64_t bound,
                            std::uint64_t segment_odds = kDefaultSegmentOdds,
                            std::uint64_t memory_budget_bytes = kDefaultMemoryBudget);

    std::uint64_t bound() const { return bound_; }
    std::uint64_t total_count() const { return total_; }  // pi(bound)

    // Membership query, exact for all x <= bound.
    bool contains(std::uint64_t x) const;

    // Number of primes <= x (x <= bound).
    std::uint64_t count_leq(std::uint64_t x) const;

    // k-th prime, 1-based. Throws std::out_of_range when k == 0 or
    // k > total_count().
    std::uint64_t nth_prime(std::uint64_t k) const;

    // Ordinal of a prime p, inverse of nth_prime. Throws std::domain_error
    // when p is not prime, std::out_of_range when p > bound.
    std::uint64_t prime_index(std::uint64_t p) const;

    // primes.dat: ASCII decimal, one prime per line, ascending, first line "2".
    void save_primes_dat(const std::string& path) const;
    // Throws std::runtime_error naming the line on malformed or
    // non-monotonic input. The rebuilt table has bound = last prime.
    static PrimeTable load_primes_dat(const std::string& path);

private:
    PrimeTable() = default;
    void rebuild_counts();

    std::uint64_t bound_ = 0;
    std::uint64_t total_ = 0;
    // Bit i of words_ corresponds to the odd number 2*i+1; bit set = prime.
    std::vector<std::uint64_t> words_;
    // block_counts_[b] = primes (including 2) among odds below word b*kBlockWords.
    std::vector<std::uint64_t> block_counts_;

    static constexpr std::uint64_t kBlockWords = 64;
};

}  // namespace ggv
