#pragma once

#include <vector>

#include "asepldp/model_params.hpp"

namespace asepldp::qfn {

// Truncation control for the infinite products/series in this module.
struct QFuncConfig {
    int product_truncation;  // number of retained factors/terms
    double tail_tol;         // bound on the discarded geometric tail

    // Picks N so that tau^N * max(zeta_max,1) < tail_tol.
    static QFuncConfig for_range(const ModelParams& mp, double zeta_max,
                                 double tail_tol = 1e-16);
};

// F_q(zeta) = prod_{n>=0} (1 + zeta tau^n)^{-1}, zeta >= 0; values in (0,1].
double F_q(const ModelParams& mp, double zeta, const QFuncConfig& cfg);

// log F_q by direct summation of -log(1 + zeta tau^n); independent route
// used as an oracle for F_q.
double log_F_q(const ModelParams& mp, double zeta, const QFuncConfig& cfg);

// G^{(m)}(zeta) = -sum_{j>=0} tau^j f_j^{(m)}(zeta) with
// f_j^{(m)} = (-1)^m m! tau^{mj} / (1 + zeta tau^j)^{m+1}.
// G^{(0)} = F_q'/F_q; |G^{(m)}| <= m!/(1-tau^{m+1}).
double G_m(const ModelParams& mp, int m, double zeta, const QFuncConfig& cfg);

// n-th derivative of F_q via the product-rule recurrence
// F^{(n+1)} = sum_k C(n,k) F^{(n-k)} G^{(k)}.
double F_q_deriv(const ModelParams& mp, int n, double zeta, const QFuncConfig& cfg);

// All derivatives F^{(0..n)} at once (the recurrence produces them anyway).
std::vector<double> F_q_deriv_ladder(const ModelParams& mp, int n, double zeta,
                                     const QFuncConfig& cfg);

// (-1)^n int_0^inf zeta^{-alpha} F^{(n)}(zeta) dzeta, n >= 1, alpha in [0,1).
// Split at 1; the power singularity and the unbounded tail are mapped away.
double weighted_integral(const ModelParams& mp, int n, double alpha, double tol);

// A finitely supported distribution on [0,1].
struct DiscreteDistribution {
    std::vector<double> atoms;
    std::vector<double> probs;
};

// Checks the fractional-moment identity
//   E[U^{n-1+alpha}] = int zeta^{-alpha} E[U^n F^{(n)}(zeta U)] dzeta
//                      / int zeta^{-alpha} F^{(n)}(zeta) dzeta
// for a discrete U; returns true iff both sides agree within tol.
bool fractional_moment_check(const ModelParams& mp, const FractionalOrder& order,
                             const DiscreteDistribution& U, double tol);

// Both sides, for diagnostics.
struct MomentIdentitySides {
    double direct;
    double via_integrals;
};
MomentIdentitySides fractional_moment_sides(const ModelParams& mp,
                                            const FractionalOrder& order,
                                            const DiscreteDistribution& U, double tol);

}  // namespace asepldp::qfn
