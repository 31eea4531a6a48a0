#include "multikraw/configuration.hpp"

#include <numeric>
#include <stdexcept>

namespace multikraw {

Configuration::Configuration(std::vector<int> counts) : counts_(std::move(counts)) {
    if (counts_.empty()) throw std::invalid_argument("Configuration: needs d >= 1 cells");
    for (int c : counts_) {
        if (c < 0) throw std::invalid_argument("Configuration: negative count");
    }
    total_ = std::accumulate(counts_.begin(), counts_.end(), 0);
}

Configuration pure_configuration(int N, int d, int j) {
    if (j < 0 || j >= d) throw std::invalid_argument("pure_configuration: cell out of range");
    std::vector<int> c(static_cast<std::size_t>(d), 0);
    c[static_cast<std::size_t>(j)] = N;
    return Configuration(std::move(c));
}

SimplexWeights::SimplexWeights(std::vector<Rational> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw std::invalid_argument("SimplexWeights: empty");
    Rational sum = 0;
    for (const Rational& p : w_) {
        if (p <= 0) throw std::invalid_argument("SimplexWeights: weights must be positive");
        sum += p;
    }
    if (sum != 1) {
        throw std::invalid_argument("SimplexWeights: weights must sum to 1, got " + to_string(sum));
    }
}

Rational SimplexWeights::min() const {
    Rational m = w_[0];
    for (const Rational& p : w_) {
        if (p < m) m = p;
    }
    return m;
}

namespace {

void emit(int remaining, int cells_left, std::vector<int>& prefix,
          std::vector<Configuration>& out) {
    if (cells_left == 1) {
        prefix.push_back(remaining);
        out.emplace_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int first = remaining; first >= 0; --first) {
        prefix.push_back(first);
        emit(remaining - first, cells_left - 1, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<Configuration> enumerate_configurations(int N, int d) {
    if (N < 0 || d < 1) throw std::invalid_argument("enumerate_configurations: need N >= 0, d >= 1");
    std::vector<Configuration> out;
    std::vector<int> prefix;
    emit(N, d, prefix, out);
    return out;
}

BigInt configuration_count(int N, int d) { return binomial(N + d - 1, d - 1); }

BigInt configuration_multinomial(const Configuration& x) {
    std::span<const int> parts(x.counts().data(), x.counts().size() - 1);
    return multinomial_coeff(x.total(), parts);
}

Rational multinomial_pmf(const Configuration& x, const SimplexWeights& p) {
    if (x.dim() != p.dim()) throw std::invalid_argument("multinomial_pmf: dimension mismatch");
    Rational r(configuration_multinomial(x));
    for (int j = 0; j < x.dim(); ++j) r *= rational_pow(p[j], x[j]);
    return r;
}

}  // namespace multikraw
