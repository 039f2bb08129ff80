#include "asepldp/estimator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "asepldp/exact_rates.hpp"
#include "asepldp/fredholm.hpp"
#include "asepldp/qfunctions.hpp"

namespace asepldp::est {

namespace {

constexpr int64_t kBlock = sim::kFoldBlock;

// Per-block accumulation keeps the reduction order fixed for any worker
// count: block sums are formed in index order and combined sequentially.
struct BlockSums {
    std::vector<double> sum;
    std::vector<double> sumsq;
    explicit BlockSums(int64_t n_samples)
        : sum((n_samples + kBlock - 1) / kBlock, 0.0),
          sumsq((n_samples + kBlock - 1) / kBlock, 0.0) {}
    void add(int64_t i, double v) {
        sum[i / kBlock] += v;
        sumsq[i / kBlock] += v * v;
    }
    std::pair<double, double> reduce() const {
        double s = 0.0, s2 = 0.0;
        for (size_t b = 0; b < sum.size(); ++b) {
            s += sum[b];
            s2 += sumsq[b];
        }
        return {s, s2};
    }
};

McEstimate finish(const BlockSums& bs, int64_t n, uint64_t seed) {
    const auto [s, s2] = bs.reduce();
    const double mean = s / n;
    double var = (s2 - n * mean * mean) / std::max<int64_t>(1, n - 1);
    // cancellation noise from the single-pass sums; constant samples
    // must report a zero standard error
    if (var < 1e-13 * s2 / std::max<int64_t>(1, n - 1)) var = 0.0;
    return McEstimate{mean, std::sqrt(var / n), n, seed};
}

uint32_t max_h0(const sim::SimConfig& cfg) {
    // h0 can never exceed the tracked particle count
    return static_cast<uint32_t>(cfg.truncation_M);
}

}  // namespace

McEstimate estimate_tau_laplace(const ModelParams& mp, double zeta, double t,
                                int64_t n_samples, uint64_t seed, int workers,
                                sim::H0Convention conv) {
    if (n_samples < 1) throw std::invalid_argument("estimate_tau_laplace: n_samples < 1");
    if (!(zeta >= 0.0)) throw std::domain_error("estimate_tau_laplace: zeta < 0");
    const sim::SimConfig cfg = sim::SimConfig::make(mp, t, seed, conv);

    // F_q(zeta tau^k) table over the attainable h0 range
    const auto qcfg = qfn::QFuncConfig::for_range(mp, zeta);
    std::vector<double> table(max_h0(cfg) + 1);
    double power = 1.0;
    for (size_t k = 0; k < table.size(); ++k) {
        table[k] = qfn::F_q(mp, zeta * power, qcfg);
        power *= mp.tau;
    }

    BlockSums bs(n_samples);
    const bool geq = conv == sim::H0Convention::GEQ_ZERO;
    sim::asep_fold(cfg, n_samples, workers, [&](int64_t i, const sim::BondCrossings& b) {
        bs.add(i, table[geq ? b.h0_geq : b.h0_gt]);
    });
    return finish(bs, n_samples, seed);
}

LyapunovReport estimate_lyapunov(const ModelParams& mp, double s,
                                 const std::vector<double>& t_grid, int64_t n_samples,
                                 uint64_t seed, int workers, sim::H0Convention conv) {
    if (!(s > 0.0)) throw std::domain_error("estimate_lyapunov: s must be > 0");
    if (t_grid.empty()) throw std::invalid_argument("estimate_lyapunov: empty t grid");
    for (size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i] < t_grid[i + 1]))
            throw std::invalid_argument("estimate_lyapunov: t grid must be increasing");
    if (!(t_grid.front() > 0.0))
        throw std::invalid_argument("estimate_lyapunov: t grid must be positive");

    LyapunovReport rep;
    rep.s = s;
    rep.t_grid = t_grid;
    rep.exact = -rates::h_q(mp, s);

    const bool geq = conv == sim::H0Convention::GEQ_ZERO;
    std::vector<double> log_means;
    for (size_t ti = 0; ti < t_grid.size(); ++ti) {
        const double t = t_grid[ti];
        const sim::SimConfig cfg =
            sim::SimConfig::make(mp, t, seed + static_cast<uint64_t>(ti), conv);
        std::vector<double> table(max_h0(cfg) + 1);
        for (size_t k = 0; k < table.size(); ++k)
            table[k] = std::pow(mp.tau, s * static_cast<double>(k));

        BlockSums bs(n_samples);
        const size_t nblocks = (n_samples + kBlock - 1) / kBlock;
        std::vector<uint32_t> bmin(nblocks, UINT32_MAX), bmax(nblocks, 0);
        sim::asep_fold(cfg, n_samples, workers,
                       [&](int64_t i, const sim::BondCrossings& b) {
                           const uint32_t h = geq ? b.h0_geq : b.h0_gt;
                           bs.add(i, table[h]);
                           const size_t blk = i / kBlock;
                           bmin[blk] = std::min(bmin[blk], h);
                           bmax[blk] = std::max(bmax[blk], h);
                       });
        uint32_t h_min = UINT32_MAX, h_max = 0;
        for (size_t blk = 0; blk < nblocks; ++blk) {
            h_min = std::min(h_min, bmin[blk]);
            h_max = std::max(h_max, bmax[blk]);
        }
        if (h_min == h_max)
            throw DegenerateSampleError(
                "estimate_lyapunov: all h0 identical; log-mean stderr undefined");
        const McEstimate raw = finish(bs, n_samples, seed);
        // delta method for (1/t) log(mean)
        rep.empirical.push_back(McEstimate{std::log(raw.mean) / t,
                                           raw.std_error / (t * raw.mean), n_samples,
                                           seed});
        log_means.push_back(std::log(raw.mean));
    }

    // least squares on [t, log t, 1], trimmed when the grid is short
    const int cols = std::min<size_t>(3, t_grid.size());
    Eigen::MatrixXd X(t_grid.size(), cols);
    Eigen::VectorXd Y(t_grid.size());
    for (size_t i = 0; i < t_grid.size(); ++i) {
        X(i, 0) = t_grid[i];
        if (cols > 1) X(i, 1) = std::log(t_grid[i]);
        if (cols > 2) X(i, 2) = 1.0;
        Y(i) = log_means[i];
    }
    Eigen::VectorXd beta = X.colPivHouseholderQr().solve(Y);
    rep.extrapolated = beta(0);
    rep.log_t_coeff = cols > 1 ? beta(1) : 0.0;
    rep.intercept = cols > 2 ? beta(2) : 0.0;
    return rep;
}

McEstimate estimate_tail(const ModelParams& mp, double y, double t, int64_t n_samples,
                         uint64_t seed, int workers, sim::H0Convention conv) {
    if (n_samples < 1) throw std::invalid_argument("estimate_tail: n_samples < 1");
    if (y >= 1.0) return McEstimate{0.0, 0.0, n_samples, seed};  // event is empty
    // the event is taken at the gamma-rescaled horizon
    const double horizon = t / mp.gamma;
    const sim::SimConfig cfg = sim::SimConfig::make(mp, horizon, seed, conv);
    const double threshold = 0.25 * t * (1.0 - y);  // h0 < threshold, strictly

    const bool geq = conv == sim::H0Convention::GEQ_ZERO;
    std::vector<int64_t> hits((n_samples + kBlock - 1) / kBlock, 0);
    sim::asep_fold(cfg, n_samples, workers, [&](int64_t i, const sim::BondCrossings& b) {
        const uint32_t h = geq ? b.h0_geq : b.h0_gt;
        if (static_cast<double>(h) < threshold) ++hits[i / kBlock];
    });
    int64_t k = 0;
    for (int64_t h : hits) k += h;
    const double phat = static_cast<double>(k) / n_samples;
    const double se = std::sqrt(phat * (1.0 - phat) / n_samples);
    return McEstimate{phat, se, n_samples, seed};
}

double zero_hit_upper_bound(int64_t n_samples) {
    // rule-of-three bound: P <= 1 - 0.05^{1/n} ~ 3/n
    return 1.0 - std::pow(0.05, 1.0 / static_cast<double>(n_samples));
}

sim::H0Convention convention_discriminator(const ModelParams& mp, double t_small,
                                           int64_t n_samples, uint64_t seed,
                                           int workers) {
    if (!(t_small <= 3.0))
        throw std::domain_error("convention_discriminator: t_small must be <= 3");
    std::vector<double> zetas{0.5, 1.0};
    std::vector<double> ts;
    for (double t : {0.5, 1.0, 2.0})
        if (t <= t_small) ts.push_back(t);
    if (ts.empty()) throw std::domain_error("convention_discriminator: empty t grid");

    bool geq_ok = true, gt_ok = true;
    std::ostringstream table;
    table << "zeta t det geq_mean geq_z gt_mean gt_z\n";
    uint64_t cell_seed = seed;
    for (double t : ts) {
        for (double zeta : zetas) {
            const double det = fredholm::fredholm_det_certified(mp, zeta, t, 1e-9).value;
            const McEstimate a =
                estimate_tau_laplace(mp, zeta, t, n_samples, cell_seed, workers,
                                     sim::H0Convention::GEQ_ZERO);
            const McEstimate b =
                estimate_tau_laplace(mp, zeta, t, n_samples, cell_seed, workers,
                                     sim::H0Convention::GT_ZERO);
            const double za = std::fabs(a.mean - det) / std::max(a.std_error, 1e-15);
            const double zb = std::fabs(b.mean - det) / std::max(b.std_error, 1e-15);
            if (za > 3.0) geq_ok = false;
            if (zb > 3.0) gt_ok = false;
            table << zeta << ' ' << t << ' ' << det << ' ' << a.mean << ' ' << za << ' '
                  << b.mean << ' ' << zb << '\n';
            ++cell_seed;
        }
    }
    if (geq_ok == gt_ok)
        throw InconclusiveError("convention_discriminator: " +
                                std::string(geq_ok ? "both" : "neither") +
                                " conventions pass\n" + table.str());
    return geq_ok ? sim::H0Convention::GEQ_ZERO : sim::H0Convention::GT_ZERO;
}

McEstimate lpp_tail(int N, double z, int64_t n_samples, uint64_t seed, int workers) {
    if (!(z >= 4.0)) throw std::domain_error("lpp_tail: z must be >= 4");
    if (n_samples < 1) throw std::invalid_argument("lpp_tail: n_samples < 1");
    const auto batch = sim::lpp_batch(N, n_samples, seed, workers);
    const double threshold = static_cast<double>(N) * z;
    int64_t k = 0;
    for (const auto& r : batch)
        if (r.value >= threshold) ++k;
    const double phat = static_cast<double>(k) / n_samples;
    const double se = std::sqrt(phat * (1.0 - phat) / n_samples);
    return McEstimate{phat, se, n_samples, seed};
}

double lpp_rate(int N, const McEstimate& estimate) {
    if (estimate.mean <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(estimate.mean) / static_cast<double>(N);
}

}  // namespace asepldp::est
