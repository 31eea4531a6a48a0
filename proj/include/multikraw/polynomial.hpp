#pragma once

#include <vector>

#include "multikraw/rational.hpp"

namespace multikraw {

/// Dense univariate polynomial with exact rational coefficients. Used as an
/// independent route for generating-function identities: products are formed
/// by convolution, never by the closed-form sums they are checked against.
class Polynomial {
  public:
    Polynomial() : coeffs_{Rational(0)} {}
    explicit Polynomial(std::vector<Rational> coeffs);
    static Polynomial constant(const Rational& c);
    /// a + b t
    static Polynomial linear(const Rational& a, const Rational& b);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    Rational coeff(int k) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial pow(int e) const;

    Rational operator()(const Rational& t) const;

    bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

  private:
    void trim();
    std::vector<Rational> coeffs_;
};

}  // namespace multikraw
