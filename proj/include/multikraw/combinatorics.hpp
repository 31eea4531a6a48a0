#pragma once

#include <span>
#include <vector>

#include "multikraw/rational.hpp"

namespace multikraw {

/// C(n,k); zero when k < 0 or k > n.
BigInt binomial(long n, long k);

BigInt factorial(long n);

/// x(x-1)...(x-k+1); equals 1 when k == 0, even for x == 0.
BigInt falling_factorial(long x, long k);

/// n! / (parts_1! ... parts_m! (n - sum)!), the implicit last part being
/// n - sum(parts). Rejects sum(parts) > n.
BigInt multinomial_coeff(long n, std::span<const int> parts);

}  // namespace multikraw
