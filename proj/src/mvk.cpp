#include "multikraw/mvk.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace multikraw {

MultiIndex::MultiIndex(std::vector<int> deg) : degrees(std::move(deg)) {
    for (int n : degrees) {
        if (n < 0) throw std::invalid_argument("MultiIndex: negative degree");
    }
}

int MultiIndex::total() const {
    return std::accumulate(degrees.begin(), degrees.end(), 0);
}

std::vector<MultiIndex> multi_indices_of_degree(int n, int d) {
    std::vector<MultiIndex> out;
    for (const Configuration& c : enumerate_configurations(n, d - 1)) {
        out.push_back(MultiIndex(c.counts()));
    }
    return out;
}

namespace {

Rational weighted_inner(const std::vector<Rational>& a, const std::vector<Rational>& b,
                        const SimplexWeights& p) {
    Rational s = 0;
    for (int j = 0; j < p.dim(); ++j) {
        s += a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(j)] * p[j];
    }
    return s;
}

}  // namespace

OrthonormalBasis::OrthonormalBasis(std::vector<std::vector<Rational>> rows, SimplexWeights p)
    : rows_(std::move(rows)), weights_(std::move(p)) {
    const int d = weights_.dim();
    if (static_cast<int>(rows_.size()) != d - 1) {
        throw std::invalid_argument("OrthonormalBasis: need d-1 rows");
    }
    const std::vector<Rational> ones(static_cast<std::size_t>(d), Rational(1));
    for (const auto& r : rows_) {
        if (static_cast<int>(r.size()) != d) {
            throw std::invalid_argument("OrthonormalBasis: row length mismatch");
        }
        if (weighted_inner(r, ones, weights_) != 0) {
            throw std::invalid_argument("OrthonormalBasis: row not orthogonal to constants");
        }
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        for (std::size_t l = k + 1; l < rows_.size(); ++l) {
            if (weighted_inner(rows_[k], rows_[l], weights_) != 0) {
                throw std::invalid_argument("OrthonormalBasis: rows not mutually orthogonal");
            }
        }
    }
    for (const auto& r : rows_) {
        Rational s = weighted_inner(r, r, weights_);
        if (s == 0) throw std::invalid_argument("OrthonormalBasis: zero row");
        norms_.push_back(std::move(s));
    }
}

OrthonormalBasis OrthonormalBasis::gram_schmidt(const SimplexWeights& p,
                                                std::vector<int> seed_order) {
    const int d = p.dim();
    if (d < 2) throw std::invalid_argument("OrthonormalBasis: need d >= 2");
    if (seed_order.empty()) {
        seed_order.resize(static_cast<std::size_t>(d - 1));
        std::iota(seed_order.begin(), seed_order.end(), 0);
    }
    if (static_cast<int>(seed_order.size()) != d - 1) {
        throw std::invalid_argument("OrthonormalBasis: seed order needs d-1 cells");
    }
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> norms;
    for (int idx : seed_order) {
        if (idx < 0 || idx >= d) throw std::invalid_argument("OrthonormalBasis: bad seed cell");
        std::vector<Rational> f(static_cast<std::size_t>(d), Rational(0));
        f[static_cast<std::size_t>(idx)] = 1;
        // subtract the mean (projection onto the constant function)
        Rational mean = p[idx];
        std::vector<Rational> v(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) v[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(j)] - mean;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            Rational c = weighted_inner(f, rows[r], p) / norms[r];
            for (int j = 0; j < d; ++j) {
                v[static_cast<std::size_t>(j)] -= c * rows[r][static_cast<std::size_t>(j)];
            }
        }
        Rational s = weighted_inner(v, v, p);
        if (s == 0) throw std::invalid_argument("OrthonormalBasis: degenerate seed order");
        rows.push_back(std::move(v));
        norms.push_back(std::move(s));
    }
    return OrthonormalBasis(std::move(rows), p);
}

const std::vector<Rational>& OrthonormalBasis::row(int l) const {
    if (l < 1 || l > row_count()) throw std::invalid_argument("OrthonormalBasis: row index out of range");
    return rows_[static_cast<std::size_t>(l - 1)];
}

const Rational& OrthonormalBasis::squared_norm(int l) const {
    if (l < 1 || l > row_count()) throw std::invalid_argument("OrthonormalBasis: row index out of range");
    return norms_[static_cast<std::size_t>(l - 1)];
}

double OrthonormalBasis::entry(int l, int j) const {
    return to_double(row(l)[static_cast<std::size_t>(j)]) /
           std::sqrt(to_double(squared_norm(l)));
}

namespace {

// Sparse multivariate polynomial in w_1..w_m truncated at a total-degree cap.
class TruncatedPoly {
  public:
    TruncatedPoly(int vars, int cap) : vars_(vars), cap_(cap) {
        terms_[std::vector<int>(static_cast<std::size_t>(vars), 0)] = 1;
    }

    // multiply by (1 + sum_l w_l coeff[l])^e
    void multiply_linear_power(const std::vector<Rational>& coeff, int e) {
        for (int i = 0; i < e; ++i) multiply_linear(coeff);
    }

    Rational coefficient(const std::vector<int>& expo) const {
        auto it = terms_.find(expo);
        return it == terms_.end() ? Rational(0) : it->second;
    }

  private:
    void multiply_linear(const std::vector<Rational>& coeff) {
        std::map<std::vector<int>, Rational> out;
        for (const auto& [expo, c] : terms_) {
            out[expo] += c;
            int deg = std::accumulate(expo.begin(), expo.end(), 0);
            if (deg == cap_) continue;
            for (int l = 0; l < vars_; ++l) {
                if (coeff[static_cast<std::size_t>(l)] == 0) continue;
                std::vector<int> e = expo;
                ++e[static_cast<std::size_t>(l)];
                out[e] += c * coeff[static_cast<std::size_t>(l)];
            }
        }
        terms_ = std::move(out);
    }

    int vars_;
    int cap_;
    std::map<std::vector<int>, Rational> terms_;
};

}  // namespace

Rational mvk_eval_raw(const MultiIndex& n, const Configuration& x,
                      const OrthonormalBasis& basis) {
    const int d = basis.dim();
    if (x.dim() != d) throw std::invalid_argument("mvk_eval_raw: dimension mismatch");
    if (n.size() != d - 1) throw std::invalid_argument("mvk_eval_raw: multi-index needs d-1 entries");
    if (n.total() > x.total()) throw std::invalid_argument("mvk_eval_raw: degree exceeds N");
    TruncatedPoly poly(d - 1, n.total());
    std::vector<Rational> coeff(static_cast<std::size_t>(d - 1));
    for (int j = 0; j < d; ++j) {
        for (int l = 1; l < d; ++l) {
            coeff[static_cast<std::size_t>(l - 1)] = basis.row(l)[static_cast<std::size_t>(j)];
        }
        poly.multiply_linear_power(coeff, x[j]);
    }
    return poly.coefficient(n.degrees);
}

double mvk_eval(const MultiIndex& n, const Configuration& x, const OrthonormalBasis& basis) {
    double v = to_double(mvk_eval_raw(n, x, basis));
    for (int l = 1; l <= basis.row_count(); ++l) {
        v /= std::pow(std::sqrt(to_double(basis.squared_norm(l))),
                      n.degrees[static_cast<std::size_t>(l - 1)]);
    }
    return v;
}

Rational mvk_transform_raw(int N, const MultiIndex& n, std::span<const Rational> s,
                           const OrthonormalBasis& basis) {
    const int d = basis.dim();
    if (static_cast<int>(s.size()) != d) throw std::invalid_argument("mvk_transform_raw: dimension mismatch");
    if (n.size() != d - 1) throw std::invalid_argument("mvk_transform_raw: multi-index needs d-1 entries");
    if (n.total() > N) throw std::invalid_argument("mvk_transform_raw: degree exceeds N");
    const SimplexWeights& p = basis.weights();
    Rational t0 = 0;
    for (int j = 0; j < d; ++j) t0 += p[j] * s[static_cast<std::size_t>(j)];
    Rational result(multinomial_coeff(N, n.degrees));
    result *= rational_pow(t0, N - n.total());
    for (int l = 1; l < d; ++l) {
        Rational tl = 0;
        for (int j = 0; j < d; ++j) {
            tl += p[j] * s[static_cast<std::size_t>(j)] * basis.row(l)[static_cast<std::size_t>(j)];
        }
        result *= rational_pow(tl, n.degrees[static_cast<std::size_t>(l - 1)]);
    }
    return result;
}

double mvk_transform(int N, const MultiIndex& n, std::span<const Rational> s,
                     const OrthonormalBasis& basis) {
    double v = to_double(mvk_transform_raw(N, n, s, basis));
    for (int l = 1; l <= basis.row_count(); ++l) {
        v /= std::pow(std::sqrt(to_double(basis.squared_norm(l))),
                      n.degrees[static_cast<std::size_t>(l - 1)]);
    }
    return v;
}

BivariateLaw contingency_marginal_law(int N, const SimplexWeights& p, const Rational& rho) {
    const int d = p.dim();
    BivariateLaw law;
    law.states = enumerate_configurations(N, d);
    const std::size_t S = law.states.size();
    law.prob.assign(S, std::vector<Rational>(S, Rational(0)));
    law.min_entry = 1;

    // P(X=x, Y=y) = sum over shared diagonal counts z <= x,y of
    //   C(N; z, N-|z|) rho^|z| (1-rho)^{N-|z|} p^z
    //   * C(N-|z|; x-z) p^{x-z} * C(N-|z|; y-z) p^{y-z}
    for (std::size_t xi = 0; xi < S; ++xi) {
        const Configuration& x = law.states[xi];
        for (std::size_t yi = 0; yi < S; ++yi) {
            const Configuration& y = law.states[yi];
            Rational total = 0;
            std::vector<int> z(static_cast<std::size_t>(d), 0);
            // enumerate z <= min(x,y) componentwise
            auto advance = [&]() {
                for (int j = 0; j < d; ++j) {
                    int cap = std::min(x[j], y[j]);
                    if (z[static_cast<std::size_t>(j)] < cap) {
                        ++z[static_cast<std::size_t>(j)];
                        return true;
                    }
                    z[static_cast<std::size_t>(j)] = 0;
                }
                return false;
            };
            do {
                int zt = std::accumulate(z.begin(), z.end(), 0);
                Rational term = Rational(multinomial_coeff(N, z)) *
                                rational_pow(rho, zt) * rational_pow(1 - rho, N - zt);
                std::vector<int> xr(static_cast<std::size_t>(d)), yr(static_cast<std::size_t>(d));
                for (int j = 0; j < d; ++j) {
                    xr[static_cast<std::size_t>(j)] = x[j] - z[static_cast<std::size_t>(j)];
                    yr[static_cast<std::size_t>(j)] = y[j] - z[static_cast<std::size_t>(j)];
                    term *= rational_pow(p[j], x[j] + y[j] - z[static_cast<std::size_t>(j)]);
                }
                term *= Rational(multinomial_coeff(N - zt, xr));
                term *= Rational(multinomial_coeff(N - zt, yr));
                total += term;
            } while (advance());
            if (total < law.min_entry) law.min_entry = total;
            law.prob[xi][yi] = std::move(total);
        }
    }
    law.nonnegative = law.min_entry >= 0;
    return law;
}

}  // namespace multikraw
