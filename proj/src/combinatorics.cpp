#include "multikraw/combinatorics.hpp"

#include <numeric>
#include <stdexcept>

namespace multikraw {

BigInt binomial(long n, long k) {
    if (n < 0) throw std::invalid_argument("binomial: n must be non-negative");
    if (k < 0 || k > n) return 0;
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return r;
}

BigInt factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial: n must be non-negative");
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

BigInt falling_factorial(long x, long k) {
    if (x < 0 || k < 0) throw std::invalid_argument("falling_factorial: negative argument");
    BigInt r = 1;
    for (long i = 0; i < k; ++i) r *= (x - i);
    return r;
}

BigInt multinomial_coeff(long n, std::span<const int> parts) {
    if (n < 0) throw std::invalid_argument("multinomial_coeff: n must be non-negative");
    long sum = 0;
    for (int p : parts) {
        if (p < 0) throw std::invalid_argument("multinomial_coeff: negative part");
        sum += p;
    }
    if (sum > n) throw std::invalid_argument("multinomial_coeff: parts exceed n");
    BigInt r = 1;
    long rem = n;
    for (int p : parts) {
        r *= binomial(rem, p);
        rem -= p;
    }
    return r;
}

}  // namespace multikraw
