#include "ggv/prime_table.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ggv {
namespace {

std::uint64_t isqrt_u64(std::uint64_t n) {
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Odd primes up to limit by a plain sieve; used for base primes only.
std::vector<std::uint64_t> base_primes(std::uint64_t limit) {
    std::vector<char> mark(limit + 1, 1);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t i = 3; i <= limit; i += 2) {
        if (!mark[i]) continue;
        primes.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += 2 * i) mark[j] = 0;
    }
    return primes;
}

}  // namespace

PrimeTable PrimeTable::build(std::uint64_t bound, std::uint64_t segment_odds,
                             std::uint64_t memory_budget_bytes) {
    if (bound < 2) throw std::invalid_argument("PrimeTable: bound must be >= 2");
    if (segment_odds == 0 || segment_odds % 2 != 0)
        throw std::invalid_argument("PrimeTable: segment size must be a positive multiple of 2");

    const std::uint64_t num_odds = (bound + 1) / 2;  // odds 1, 3, ..., <= bound
    const std::uint64_t num_words = (num_odds + 63) / 64;
    if (num_words * 8 > memory_budget_bytes)
        throw std::length_error("PrimeTable: bitmap for bound " + std::to_string(bound) +
                                " exceeds memory budget of " +
                                std::to_string(memory_budget_bytes) + " bytes");

    PrimeTable table;
    table.bound_ = bound;
    table.words_.assign(num_words, ~0ull);
    table.words_[0] &= ~1ull;  // 1 is not prime
    // Clear tail bits beyond the last odd <= bound.
    if (num_odds % 64 != 0)
        table.words_.back() &= (1ull << (num_odds % 64)) - 1;

    const auto sieving = base_primes(isqrt_u64(bound));

    // Sieve odd indices segment by segment so the inner loop stays in cache.
    for (std::uint64_t seg_lo = 0; seg_lo < num_odds; seg_lo += segment_odds) {
        const std::uint64_t seg_hi = std::min(seg_lo + segment_odds, num_odds);
        const std::uint64_t lo_val = 2 * seg_lo + 1;
        for (std::uint64_t p : sieving) {
            std::uint64_t start = p * p;
            if (start > bound) break;
            if (start < lo_val) {
                std::uint64_t k = (lo_val - start + 2 * p - 1) / (2 * p);
                start += k * 2 * p;
            }
            for (std::uint64_t v = start; v / 2 < seg_hi && v <= bound; v += 2 * p)
                table.words_[(v / 2) / 64] &= ~(1ull << ((v / 2) % 64));
        }
    }

    table.rebuild_counts();
    return table;
}

void PrimeTable::rebuild_counts() {
    const std::size_t num_blocks = (words_.size() + kBlockWords - 1) / kBlockWords;
    block_counts_.assign(num_blocks + 1, 0);
    std::uint64_t running = 1;  // the prime 2
    for (std::size_t w = 0; w < words_.size(); ++w) {
        if (w % kBlockWords == 0) block_counts_[w / kBlockWords] = running;
        running += std::popcount(words_[w]);
    }
    block_counts_[num_blocks] = running;
    total_ = running;
}

bool PrimeTable::contains(std::uint64_t x) const {
    if (x > bound_)
        throw std::out_of_range("PrimeTable: " + std::to_string(x) +
                                " beyond sieved bound " + std::to_string(bound_));
    if (x == 2) return true;
    if (x < 2 || x % 2 == 0) return false;
    const std::uint64_t i = x / 2;
    return (words_[i / 64] >> (i % 64)) & 1;
}

std::uint64_t PrimeTable::count_leq(std::uint64_t x) const {
    if (x > bound_)
        throw std::out_of_range("PrimeTable: count_leq beyond bound");
    if (x < 2) return 0;
    if (x == 2) return 1;
    const std::uint64_t i = (x % 2 == 0 ? x - 1 : x) / 2;  // last odd <= x
    const std::uint64_t w = i / 64;
    std::uint64_t count = block_counts_[w / kBlockWords];
    for (std::uint64_t j = (w / kBlockWords) * kBlockWords; j < w; ++j)
        count += std::popcount(words_[j]);
    const std::uint64_t mask = (i % 64 == 63) ? ~0ull : (1ull << (i % 64 + 1)) - 1;
    count += std::popcount(words_[w] & mask);
    return count;
}

std::uint64_t PrimeTable::nth_prime(std::uint64_t k) const {
    if (k == 0 || k > total_)
        throw std::out_of_range("PrimeTable: prime ordinal " + std::to_string(k) +
                                " outside sieved range (count " +
                                std::to_string(total_) + ")");
    if (k == 1) return 2;

    // Locate the count block, then the word, then the bit.
    auto it = std::upper_bound(block_counts_.begin(), block_counts_.end(), k - 1);
    std::size_t block = static_cast<std::size_t>(it - block_counts_.begin()) - 1;
    std::uint64_t remaining = k - block_counts_[block];  // primes still to skip, >= 1
    for (std::uint64_t w = block * kBlockWords; w < words_.size(); ++w) {
        const int pc = std::popcount(words_[w]);
        if (remaining > static_cast<std::uint64_t>(pc)) {
            remaining -= pc;
            continue;
        }
        std::uint64_t word = words_[w];
        for (; remaining > 1; --remaining) word &= word - 1;
        const std::uint64_t bit = std::countr_zero(word);
        return 2 * (w * 64 + bit) + 1;
    }
    throw std::logic_error("PrimeTable: inconsistent cumulative counts");
}

std::uint64_t PrimeTable::prime_index(std::uint64_t p) const {
    if (!contains(p))
        throw std::domain_error("PrimeTable: " + std::to_string(p) + " is not prime");
    return count_leq(p);
}

void PrimeTable::save_primes_dat(const std::string& path) const {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    for (std::uint64_t k = 1; k <= total_; ++k)
        out << nth_prime(k) << '\n';
    if (!out)
        throw std::runtime_error("write failure on " + path);
}

PrimeTable PrimeTable::load_primes_dat(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);

    std::vector<std::uint64_t> primes;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() && in.eof()) break;
        std::uint64_t value = 0;
        std::size_t pos = 0;
        try {
            value = std::stoull(line, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != line.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": malformed prime line \"" + line + "\"");
        if (!primes.empty() && value <= primes.back())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": non-monotonic sequence (" + std::to_string(value) +
                                     " after " + std::to_string(primes.back()) + ")");
        primes.push_back(value);
    }
    if (primes.empty() || primes.front() != 2)
        throw std::runtime_error(path + ": prime list must start with 2");

    PrimeTable table;
    table.bound_ = primes.back();
    const std::uint64_t num_odds = (table.bound_ + 1) / 2;
    table.words_.assign((num_odds + 63) / 64, 0);
    for (std::uint64_t p : primes) {
        if (p == 2) continue;
        if (p % 2 == 0)
            throw std::runtime_error(path + ": even entry " + std::to_string(p));
        table.words_[(p / 2) / 64] |= 1ull << ((p / 2) % 64);
    }
    table.rebuild_counts();
    return table;
}

}  // namespace ggv
