#include "multikraw/polynomial.hpp"

#include <algorithm>

namespace multikraw {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(Rational(0));
    trim();
}

Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }

Polynomial Polynomial::linear(const Rational& a, const Rational& b) {
    return Polynomial({a, b});
}

Rational Polynomial::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Rational(0);
    return coeffs_[static_cast<std::size_t>(k)];
}

void Polynomial::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Rational> out(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    std::vector<Rational> out(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = coeff(static_cast<int>(i)) - o.coeff(static_cast<int>(i));
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * o.coeffs_[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    *this = *this + o;
    return *this;
}

Polynomial Polynomial::pow(int e) const {
    Polynomial r = constant(1);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

Rational Polynomial::operator()(const Rational& t) const {
    Rational r = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) r = r * t + coeffs_[i];
    return r;
}

}  // namespace multikraw
