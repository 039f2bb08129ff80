#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "asepldp/model_params.hpp"
#include "asepldp/rng.hpp"

namespace asepldp::sim {

// Reading of "number of particles to the right of zero": count sites >= 0
// (the particle has crossed the (-1,0) bond) or sites > 0.
enum class H0Convention { GEQ_ZERO, GT_ZERO };

struct TruncationViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Smallest particle count for which the finite system provably shadows the
// infinite one over [0, horizon] up to probability ~1e-12.
int mandated_truncation(double horizon_t);

struct SimConfig {
    double q;  // right-jump probability; q = 1 is the totally asymmetric mode
    double horizon_t;
    int truncation_M;
    uint64_t seed;
    H0Convention h0_convention = H0Convention::GEQ_ZERO;

    static SimConfig make(const ModelParams& mp, double horizon_t, uint64_t seed,
                          H0Convention conv = H0Convention::GEQ_ZERO);
    static SimConfig make_tasep(double horizon_t, uint64_t seed,
                                H0Convention conv = H0Convention::GEQ_ZERO);
    void validate() const;
};

struct TrajectoryResult {
    uint32_t h0;
    uint64_t n_events;  // clock rings, including suppressed attempts
    int32_t rightmost;
};

// Current counters under both conventions, from one trajectory.
struct BondCrossings {
    uint32_t h0_geq;
    uint32_t h0_gt;
    uint64_t n_events;
    int32_t rightmost;
};

// One trajectory on a fresh stream; both convention counters are tracked.
BondCrossings asep_run_raw(double q, double horizon_t, int truncation_M,
                           Xoshiro256pp& rng);

// Same, recording the counters at each checkpoint time (sorted ascending).
std::vector<BondCrossings> asep_run_checkpoints(double q,
                                                std::span<const double> times,
                                                int truncation_M, Xoshiro256pp& rng);

TrajectoryResult asep_run(const SimConfig& cfg);

// n_samples independent trajectories; per-run streams are derived from the
// master seed by run index, so the output is identical for any worker count.
std::vector<TrajectoryResult> asep_batch(const SimConfig& cfg, int64_t n_samples,
                                         int workers);

// Blocked fold over raw trajectories. Worker chunks are aligned to
// kFoldBlock runs, so fn may be called concurrently only for indices in
// different kFoldBlock-sized blocks; per-block accumulators need no locks.
inline constexpr int64_t kFoldBlock = 4096;
void asep_fold(const SimConfig& cfg, int64_t n_samples, int workers,
               const std::function<void(int64_t, const BondCrossings&)>& fn);

struct LppResult {
    int N;
    double value;
};

// Last passage value over the NxN grid of unit exponentials, by the
// row-rolling dynamic program.
LppResult lpp_sample(int N, uint64_t seed);
std::vector<LppResult> lpp_batch(int N, int64_t n_samples, uint64_t seed, int workers);

// DP on explicit weights (row-major NxN); test hook for coupling arguments.
double lpp_from_weights(std::span<const double> w, int N);

// Compact binary record per trajectory: h0 as u32 LE, n_events as u64 LE.
void write_trajectories_binary(std::ostream& os, std::span<const TrajectoryResult> t);
void write_trajectories_csv(std::ostream& os, std::span<const TrajectoryResult> t);

}  // namespace asepldp::sim
