#include "ggv/primality.hpp"

#include <initializer_list>

namespace ggv {
namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// One strong-pseudoprime round for base a; n-1 = d * 2^s with d odd.
bool witness_passes(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
    a %= n;
    if (a == 0) return true;
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

bool is_prime_u64(std::uint64_t x) {
    if (x < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                            19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (x == p) return true;
        if (x % p == 0) return false;
    }

    std::uint64_t d = x - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }

    // Sinclair's base set, deterministic for all n < 2^64.
    for (std::uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull,
                            9780504ull, 1795265022ull}) {
        if (!witness_passes(x, a, d, s)) return false;
    }
    return true;
}

}  // namespace ggv
