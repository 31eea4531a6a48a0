#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "multikraw/configuration.hpp"
#include "multikraw/random.hpp"
#include "multikraw/rational.hpp"

namespace multikraw {

/// Extreme-point urn chain: N balls of d colours with multinomial(N,p)
/// stationary law. A step redraws z balls chosen uniformly without
/// replacement; a chosen ball of colour j moves to colour i != j with
/// probability p_i/p_dup and holds with probability (p_j - q)/p_dup,
/// q = 1 - p_dup. Admissible when q <= min_j p_j (q = 0, p_dup = 1 allowed:
/// redrawn balls then resample exactly from p).
struct UrnChainSpec {
    int N;
    SimplexWeights p;
    int z;
    Rational p_dup;
    Rational q_dup;

    UrnChainSpec(int N, SimplexWeights p, int z, Rational p_dup);
};

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Eigenvalues rho_n = Q_n(z;N,p_dup) for n = 0..N; the eigenvalue of the
/// degree-n kernel eigenspace.
std::vector<Rational> chain_eigenvalues(const UrnChainSpec& spec);

/// Exact transition matrix indexed by enumerate_configurations(N,d):
/// P(x,y) = m(y,p) sum_n rho_n Q_n(x,y;N,p). Row-stochastic, reversible with
/// stationary vector multinomial_pmf. Throws when the state count exceeds cap.
RationalMatrix transition_matrix(const UrnChainSpec& spec, std::size_t cap = 5000);

/// One step of the urn dynamics.
Configuration step_simulate(const Configuration& state, const UrnChainSpec& spec, Rng& rng);

/// chi^2 distance after l steps from x0, by the spectral formula
/// sum_{n>=1} rho_n^{2l} Q_n(x0,x0;N,p); needs only the kernel diagonal, so
/// it scales far beyond the exact-matrix cap.
double chi2_distance_spectral(const Configuration& x0, long l, const UrnChainSpec& spec);

/// The same quantity from exact matrix powers: sum_y (P^l(x0,y)-m(y))^2/m(y).
double chi2_distance_exact(const Configuration& x0, long l, const UrnChainSpec& spec,
                           std::size_t cap = 5000);

/// (1/2) sum_y |P^l(x0,y) - m(y)| via exact matrix powers.
double tv_distance_exact(const Configuration& x0, long l, const UrnChainSpec& spec,
                         std::size_t cap = 5000);

struct CutoffBounds {
    long l;
    double lower;
    double upper;
};

/// z = 1 cutoff window around l = (N p_dup / 2)(log N(1/p_i - 1) + c) for the
/// pure start N e_i: l is the ceiling of the real-valued step count,
/// lower = (1 - 1/(N p_dup))^{2l} N(1/p_i - 1) and upper = e^{e^{-c}} - 1.
CutoffBounds cutoff_bounds(int colour, double c, const UrnChainSpec& spec);

/// General-z window: with u = 1 - |1 - z/(N p_dup)|,
/// l = ceil( (1/(2u)) (log N(1/min_j p_j - 1) + c) ), lower bound
/// rho_1^{2l} Q_1(x0,x0) with the exact rho_1 = 1 - z/(N p_dup), upper
/// e^{e^{-c}} - 1. Requires x0 not uniform and z/N != p_dup.
CutoffBounds cutoff_bounds_general_z(const Configuration& x0, double c,
                                     const UrnChainSpec& spec);

struct SstResult {
    std::vector<std::int64_t> counts;  // histogram of T = first time all balls hit
    std::uint64_t replicates;
    std::uint64_t seed;

    double mean() const;
    double prob_greater(long l) const;
};

/// Strong stationary time for q = 0: the first step at which every ball index
/// has been selected at least once (coupon collecting N balls, z per step).
SstResult strong_stationary_time_sim(const UrnChainSpec& spec, std::uint64_t replicates,
                                     std::uint64_t seed);

/// Birth-death chain for the count of one tracked colour under z = 1.
struct LumpedChain {
    int N;
    Rational p_i;
    Rational p_dup;
    Rational alpha;  // down-rate factor 1 - (p_i - q)/p_dup
    Rational beta;   // up-rate factor p_i/p_dup

    LumpedChain(int N, Rational p_i, Rational p_dup);
};

RationalMatrix lumped_transition_matrix(const LumpedChain& chain);

struct LumpedMoments {
    double mean;
    double second_moment;
    double variance;
};

/// Closed-form moments of X_l started from X_0 = N:
///   E[X_l]  = N q_i (1 - 1/(N p))^l + N p_i
///   E[X_l^2] = a (1 - 2/(N p))^l (q_i/p_i)^2 - b (1 - 1/(N p))^l (q_i/p_i) + c
/// where x^2 = a Q_2 + b Q_1 + c Q_0 with a = p_i^2 N(N-1),
/// c = N^2 p_i^2 + N p_i q_i and b = -(a + c).
LumpedMoments lumped_moments(const LumpedChain& chain, long l);

/// The x^2 expansion coefficients (a, b, c) above, exact.
std::array<Rational, 3> lumped_x2_coefficients(const LumpedChain& chain);

struct EigenReport {
    std::vector<double> computed;  // ascending
    std::vector<double> expected;  // rho_n repeated C(n+d-2,d-2) times, ascending
    double max_abs_deviation;
    bool matches;  // within tolerance 1e-8
};

/// Diagonalizes the exact transition matrix (as floats, after the reversible
/// symmetrization) and compares the spectrum with {Q_n(z;N,p_dup)} carrying
/// multiplicities C(n+d-2,d-2).
EigenReport eigenstructure_check(const UrnChainSpec& spec, std::size_t cap = 5000);

struct MixingCurve {
    std::vector<long> steps;
    std::vector<double> chi2;                 // spectral
    std::vector<std::optional<double>> tv;    // exact, when the matrix fits the cap
    std::vector<double> lower;
    std::vector<double> upper;
};

/// Curve over l = 0..l_max from start x0. TV columns are filled by exact
/// evolution when the state space fits the cap, otherwise left empty.
/// Per-step bounds come from the cutoff window read backwards: c(l) solves
/// the step-count equation at integer l.
MixingCurve mixing_curve(const Configuration& x0, long l_max, const UrnChainSpec& spec,
                         std::size_t cap = 5000);

/// CSV with header "l,chi2,tv,lower,upper"; empty tv cells when unavailable.
std::string to_csv(const MixingCurve& curve);

}  // namespace multikraw
