#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "asepldp/model_params.hpp"
#include "asepldp/simulator.hpp"

namespace asepldp::est {

struct DegenerateSampleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InconclusiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct McEstimate {
    double mean;
    double std_error;  // sample sd / sqrt(n)
    int64_t n;
    uint64_t seed;
};

// Sample mean of F_q(zeta tau^{H_0(t)}); the tau-Laplace observable.
McEstimate estimate_tau_laplace(const ModelParams& mp, double zeta, double t,
                                int64_t n_samples, uint64_t seed, int workers = 1,
                                sim::H0Convention conv = sim::H0Convention::GEQ_ZERO);

struct LyapunovReport {
    double s;
    std::vector<double> t_grid;
    std::vector<McEstimate> empirical;  // (1/t) log mean of tau^{s H_0(t)}
    double exact;                       // -h_q(s)
    double extrapolated;                // fitted t-slope of log mean
    double log_t_coeff;                 // fitted log(t) coefficient (~ -1/2)
    double intercept;
};

// Per-t Lyapunov estimates and the regression
//   log mean(t) ~ a t + c log t + d,
// whose t-slope estimates -h_q(s); the log t column absorbs the known
// sqrt(t)-order prefactor.
LyapunovReport estimate_lyapunov(const ModelParams& mp, double s,
                                 const std::vector<double>& t_grid, int64_t n_samples,
                                 uint64_t seed, int workers = 1,
                                 sim::H0Convention conv = sim::H0Convention::GEQ_ZERO);

// Empirical probability of { -H_0(t/gamma) + t/4 > t y/4 }; note the
// simulation horizon is t/gamma, not t.
McEstimate estimate_tail(const ModelParams& mp, double y, double t, int64_t n_samples,
                         uint64_t seed, int workers = 1,
                         sim::H0Convention conv = sim::H0Convention::GEQ_ZERO);

// One-sided 95% upper bound to report when no sample lands in the tail.
double zero_hit_upper_bound(int64_t n_samples);

// Runs the tau-Laplace/determinant cross-check under both conventions on a
// small (zeta, t) grid and returns the unique convention consistent with the
// determinants; throws InconclusiveError (with the table in the message)
// when both or neither pass.
sim::H0Convention convention_discriminator(const ModelParams& mp, double t_small,
                                           int64_t n_samples, uint64_t seed,
                                           int workers = 1);

// Empirical P(H(N) >= N z) for the last-passage value.
McEstimate lpp_tail(int N, double z, int64_t n_samples, uint64_t seed, int workers = 1);

// -(1/N) log p as a rate companion; +inf when the estimate is zero.
double lpp_rate(int N, const McEstimate& estimate);

}  // namespace asepldp::est
