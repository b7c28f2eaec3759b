#pragma once

#include <cstdint>
#include <vector>

namespace fibrank {

// All primes in [2, x_max], ascending. x_max < 2 yields an empty list.
std::vector<uint32_t> sieve_primes(uint64_t x_max);

}  // namespace fibrank
