#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "multikraw/kernel.hpp"
#include "multikraw/polynomial.hpp"

namespace multikraw {

/// Kernel parameters plus the independent hold parameter p_dup (q = 1-p_dup)
/// of the duplication structure. Admissible when q <= min_j p_j; boundary
/// equality counts as admissible.
struct DuplicationParams {
    KernelParams kernel;
    Rational p_dup;
    Rational q_dup;

    DuplicationParams(KernelParams kernel, Rational p_dup);
    bool admissible() const { return q_dup <= kernel.p.min(); }
};

/// K(x,y,z) = sum_{n=0}^N Q_n(z;N,p_dup) Q_n(x,y;N,p). Nonnegative on the
/// whole grid exactly when the parameters are admissible.
Rational triple_sum_K(const Configuration& x, const Configuration& y, int z,
                      const DuplicationParams& params);

/// Probability law on {0..N} realizing the duplication formula.
struct MixingMeasure {
    std::vector<Rational> masses;  // indexed by z = 0..N

    Rational mean() const;
    Rational falling_moment(int r, bool of_complement) const;  // E[Z_[r]] or E[(N-Z)_[r]]
};

/// phi_{x,y}(z) = C(N,z) p_dup^z q_dup^{N-z} K(x,y,z). Rejects inadmissible
/// parameters with a diagnostic naming min_j p_j.
MixingMeasure mixing_measure(const Configuration& x, const Configuration& y,
                             const DuplicationParams& params);

/// The same measure from the inverted transform: an alternating sum over
/// shared sub-configurations, bypassing K entirely. Exact agreement with
/// mixing_measure is a two-route identity.
MixingMeasure mixing_measure_explicit(const Configuration& x, const Configuration& y,
                                      const DuplicationParams& params);

/// Returns (Q_n(x,y;N,p), h_n(p_dup) E_phi[Q_n(Z;N,p_dup)]); the duplication
/// formula asserts the two are equal.
std::pair<Rational, Rational> duplication_identity_check(int n, const Configuration& x,
                                                         const Configuration& y,
                                                         const DuplicationParams& params);

/// Univariate triple product sum
///   K(x,y,z;N,r,s) = sum_n h_n(s) Q_n(x;N,s) Q_n(y;N,s) Q_n(z;N,r),
/// nonnegative on the grid iff 1-r <= min(s,1-s).
Rational triple_product_1d(int x, int y, int z, int N, const Rational& r, const Rational& s);

/// E[I_1...I_r]: probability that r specific trial pairs all land in the
/// thinned match set, conditional on the counts (x,y).
Rational match_indicator_moment(int r, const Configuration& x, const Configuration& y,
                                const DuplicationParams& params);

/// pgf of the thinned match count |R| by inclusion-exclusion:
/// sum_r C(N,r) (-1)^r (1-psi)^r E[I_1...I_r], as an exact polynomial in psi.
Polynomial match_pgf_inclusion_exclusion(const Configuration& x, const Configuration& y,
                                         const DuplicationParams& params);

/// pgf of N - Z from the duplication side:
/// sum_n (q(psi-1))^n (p + q psi)^{N-n} Q_n(x,y;N,p), as an exact polynomial.
Polynomial match_pgf_transform(const Configuration& x, const Configuration& y,
                               const DuplicationParams& params);

struct MatchingResult {
    std::vector<std::int64_t> counts;  // histogram of N - |R| over 0..N
    std::uint64_t replicates;
    std::uint64_t seed;

    std::vector<double> frequencies() const;
    /// Total variation distance to an exact mixing measure.
    double tv_distance(const MixingMeasure& phi) const;
    double falling_moment(int r, bool of_complement) const;
};

/// Conditional simulation of the matching construction: fixed multisets
/// realizing x and y are independently shuffled, matched positionwise, and
/// matches of colour k are kept with probability tau_k = q/p_k. Records
/// N - |R|. Replicates are partitioned into chunks, each with an
/// independently seeded stream; counts merge by integer addition, so the
/// result does not depend on scheduling.
MatchingResult matching_simulate(const Configuration& x, const Configuration& y,
                                 const DuplicationParams& params,
                                 std::uint64_t replicates, std::uint64_t seed);

}  // namespace multikraw
