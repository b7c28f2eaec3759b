#include "fibrank/primes.hpp"

#include <cmath>

namespace fibrank {

std::vector<uint32_t> sieve_primes(uint64_t x_max) {
  std::vector<uint32_t> primes;
  if (x_max < 2) return primes;
  std::vector<uint8_t> composite(x_max + 1, 0);
  for (uint64_t i = 2; i * i <= x_max; ++i) {
    if (composite[i]) continue;
    for (uint64_t j = i * i; j <= x_max; j += i) composite[j] = 1;
  }
  for (uint64_t i = 2; i <= x_max; ++i)
    if (!composite[i]) primes.push_back(static_cast<uint32_t>(i));
  return primes;
}

}  // namespace fibrank
