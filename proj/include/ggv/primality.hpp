#pragma once

#include <cstdint>

namespace ggv {

// Deterministic Miller-Rabin primality test, exact for the full 64-bit range.
bool is_prime_u64(std::uint64_t x);

}  // namespace ggv
