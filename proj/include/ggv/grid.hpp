#pragma once

#include <cstdint>

namespace ggv {

class PrimeTable;

// A positive integer t written into K infinite columns row by row:
// t = K*(alpha-1) + n with n in {1..K}.
struct NatCell {
    std::uint64_t t;
    unsigned n;           // column, 1-based
    std::uint64_t alpha;  // row, 1-based
    unsigned columns;     // K
};

// The k-th prime placed in the same K-column layout by its ordinal:
// k = K*(delta-1) + m.
struct PrimeCell {
    std::uint64_t p;
    std::uint64_t ordinal;  // k, 1-based
    unsigned m;             // column, 1-based
    std::uint64_t delta;    // row, 1-based
};

// Throws std::invalid_argument for t == 0 or columns < 2.
NatCell nat_to_cell(std::uint64_t t, unsigned columns = 3);

// Inverse of nat_to_cell. Throws std::invalid_argument on out-of-range n.
std::uint64_t cell_to_nat(unsigned n, std::uint64_t alpha, unsigned columns = 3);

// Prime occupying column m, row delta. Throws std::out_of_range when the
// ordinal K*(delta-1)+m exceeds the sieved prime count.
PrimeCell prime_cell_at(unsigned m, std::uint64_t delta, const PrimeTable& table,
                        unsigned columns = 3);

// Cell of a known prime, located via its ordinal. Throws std::domain_error if
// p is not prime, std::out_of_range if p exceeds the table bound.
PrimeCell prime_to_cell(std::uint64_t p, const PrimeTable& table,
                        unsigned columns = 3);

}  // namespace ggv
