#include "ggv/grid.hpp"

#include <stdexcept>
#include <string>

#include "ggv/prime_table.hpp"

namespace ggv {

NatCell nat_to_cell(std::uint64_t t, unsigned columns) {
    if (t == 0) throw std::invalid_argument("nat_to_cell: t must be positive");
    if (columns < 2) throw std::invalid_argument("nat_to_cell: need at least 2 columns");
    NatCell cell;
    cell.t = t;
    cell.columns = columns;
    cell.n = static_cast<unsigned>((t - 1) % columns) + 1;
    cell.alpha = (t - 1) / columns + 1;
    return cell;
}

std::uint64_t cell_to_nat(unsigned n, std::uint64_t alpha, unsigned columns) {
    if (columns < 2) throw std::invalid_argument("cell_to_nat: need at least 2 columns");
    if (n < 1 || n > columns)
        throw std::invalid_argument("cell_to_nat: column " + std::to_string(n) +
                                    " out of range 1.." + std::to_string(columns));
    if (alpha < 1) throw std::invalid_argument("cell_to_nat: row must be >= 1");
    return columns * (alpha - 1) + n;
}

PrimeCell prime_cell_at(unsigned m, std::uint64_t delta, const PrimeTable& table,
                        unsigned columns) {
    std::uint64_t ordinal = cell_to_nat(m, delta, columns);
    PrimeCell cell;
    cell.p = table.nth_prime(ordinal);
    cell.ordinal = ordinal;
    cell.m = m;
    cell.delta = delta;
    return cell;
}

PrimeCell prime_to_cell(std::uint64_t p, const PrimeTable& table, unsigned columns) {
    std::uint64_t ordinal = table.prime_index(p);
    PrimeCell cell;
    cell.p = p;
    cell.ordinal = ordinal;
    cell.m = static_cast<unsigned>((ordinal - 1) % columns) + 1;
    cell.delta = (ordinal - 1) / columns + 1;
    return cell;
}

}  // namespace ggv
