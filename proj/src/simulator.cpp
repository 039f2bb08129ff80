#include "asepldp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

namespace asepldp::sim {

int mandated_truncation(double horizon_t) {
    if (!(horizon_t >= 0.0)) throw std::domain_error("mandated_truncation: horizon < 0");
    return static_cast<int>(std::ceil(horizon_t)) +
           10 * static_cast<int>(std::ceil(std::sqrt(horizon_t))) + 20;
}

SimConfig SimConfig::make(const ModelParams& mp, double horizon_t, uint64_t seed,
                          H0Convention conv) {
    SimConfig cfg{mp.q, horizon_t, mandated_truncation(horizon_t), seed, conv};
    cfg.validate();
    return cfg;
}

SimConfig SimConfig::make_tasep(double horizon_t, uint64_t seed, H0Convention conv) {
    SimConfig cfg{1.0, horizon_t, mandated_truncation(horizon_t), seed, conv};
    cfg.validate();
    return cfg;
}

void SimConfig::validate() const {
    if (!(q > 0.5) || !(q <= 1.0))
        throw std::domain_error("SimConfig: q must lie in (1/2, 1]");
    if (!(horizon_t >= 0.0)) throw std::domain_error("SimConfig: horizon must be >= 0");
    if (truncation_M < mandated_truncation(horizon_t))
        throw std::domain_error("SimConfig: truncation_M below the mandated bound");
}

namespace {

// Occupancy bitmap over sites [-(M+1), M]; site -(M+1) is a permanent wall
// standing in for the untracked bulk.
class Occupancy {
  public:
    explicit Occupancy(int M) : M_(M), bits_((2 * M + 2 + 63) / 64, 0) {
        for (int site = -(M + 1); site <= -1; ++site) set(site);
    }
    bool test(int site) const {
        const unsigned idx = static_cast<unsigned>(site + M_ + 1);
        return (bits_[idx >> 6] >> (idx & 63)) & 1u;
    }
    void set(int site) {
        const unsigned idx = static_cast<unsigned>(site + M_ + 1);
        bits_[idx >> 6] |= uint64_t{1} << (idx & 63);
    }
    void clear(int site) {
        const unsigned idx = static_cast<unsigned>(site + M_ + 1);
        bits_[idx >> 6] &= ~(uint64_t{1} << (idx & 63));
    }

  private:
    int M_;
    std::vector<uint64_t> bits_;
};

struct EngineState {
    std::vector<int32_t> x;
    Occupancy occ;
    uint32_t h0_geq = 0;
    uint32_t h0_gt = 0;
    uint64_t n_events = 0;

    explicit EngineState(int M) : x(M), occ(M) {
        for (int j = 0; j < M; ++j) x[j] = -(j + 1);
    }
};

// One uniform-particle attempt: right with probability q, suppressed when
// the target is occupied.
inline void step(EngineState& st, int M, uint64_t qthr, Xoshiro256pp& rng) {
    const uint64_t r = rng();
    const uint32_t hi = static_cast<uint32_t>(r >> 32);
    const uint32_t lo = static_cast<uint32_t>(r);
    const int j = static_cast<int>((static_cast<uint64_t>(hi) * M) >> 32);
    const int32_t pos = st.x[j];
    ++st.n_events;
    int32_t target;
    if (lo < qthr) {
        target = pos + 1;
        if (target > M)
            throw TruncationViolation("asep: particle escaped the tracked window");
        if (st.occ.test(target)) return;
        st.occ.clear(pos);
        st.occ.set(target);
        st.x[j] = target;
        if (target == 0)
            ++st.h0_geq;
        else if (target == 1)
            ++st.h0_gt;
        if (j == M - 1)
            throw TruncationViolation("asep: leftmost tracked particle moved");
    } else {
        target = pos - 1;
        if (st.occ.test(target)) return;
        st.occ.clear(pos);
        st.occ.set(target);
        st.x[j] = target;
        if (pos == 0)
            --st.h0_geq;
        else if (pos == 1)
            --st.h0_gt;
        if (j == M - 1)
            throw TruncationViolation("asep: leftmost tracked particle moved");
    }
}

inline uint64_t q_threshold(double q) {
    return static_cast<uint64_t>(q * 4294967296.0);  // q=1 covers every draw
}

}  // namespace

BondCrossings asep_run_raw(double q, double horizon_t, int M, Xoshiro256pp& rng) {
    EngineState st(M);
    const uint64_t qthr = q_threshold(q);
    std::poisson_distribution<int64_t> pois(static_cast<double>(M) * horizon_t);
    const int64_t n = horizon_t > 0.0 ? pois(rng) : 0;
    for (int64_t e = 0; e < n; ++e) step(st, M, qthr, rng);
    return BondCrossings{st.h0_geq, st.h0_gt, st.n_events, st.x[0]};
}

std::vector<BondCrossings> asep_run_checkpoints(double q, std::span<const double> times,
                                                int M, Xoshiro256pp& rng) {
    EngineState st(M);
    const uint64_t qthr = q_threshold(q);
    std::vector<BondCrossings> out;
    out.reserve(times.size());
    double prev = 0.0;
    for (double tk : times) {
        if (tk < prev) throw std::invalid_argument("checkpoints must be ascending");
        const double dt = tk - prev;
        if (dt > 0.0) {
            std::poisson_distribution<int64_t> pois(static_cast<double>(M) * dt);
            const int64_t n = pois(rng);
            for (int64_t e = 0; e < n; ++e) step(st, M, qthr, rng);
        }
        out.push_back(BondCrossings{st.h0_geq, st.h0_gt, st.n_events, st.x[0]});
        prev = tk;
    }
    return out;
}

namespace {
TrajectoryResult select_convention(const BondCrossings& b, H0Convention conv) {
    return TrajectoryResult{conv == H0Convention::GEQ_ZERO ? b.h0_geq : b.h0_gt,
                            b.n_events, b.rightmost};
}
}  // namespace

TrajectoryResult asep_run(const SimConfig& cfg) {
    cfg.validate();
    Xoshiro256pp rng = derive_stream(cfg.seed, 0);
    return select_convention(asep_run_raw(cfg.q, cfg.horizon_t, cfg.truncation_M, rng),
                             cfg.h0_convention);
}

void asep_fold(const SimConfig& cfg, int64_t n_samples, int workers,
               const std::function<void(int64_t, const BondCrossings&)>& fn) {
    cfg.validate();
    if (n_samples < 0) throw std::invalid_argument("asep_fold: n_samples < 0");
    if (workers < 1) workers = 1;
    auto body = [&](int64_t begin, int64_t end) {
        for (int64_t i = begin; i < end; ++i) {
            Xoshiro256pp rng = derive_stream(cfg.seed, static_cast<uint64_t>(i));
            fn(i, asep_run_raw(cfg.q, cfg.horizon_t, cfg.truncation_M, rng));
        }
    };
    if (workers == 1 || n_samples < 2 * workers) {
        body(0, n_samples);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mtx;
    int64_t chunk = (n_samples + workers - 1) / workers;
    chunk = ((chunk + kFoldBlock - 1) / kFoldBlock) * kFoldBlock;
    for (int w = 0; w < workers; ++w) {
        const int64_t b = w * chunk;
        const int64_t e = std::min<int64_t>(n_samples, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e] {
            try {
                body(b, e);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mtx);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

std::vector<TrajectoryResult> asep_batch(const SimConfig& cfg, int64_t n_samples,
                                         int workers) {
    std::vector<TrajectoryResult> out(static_cast<size_t>(n_samples));
    asep_fold(cfg, n_samples, workers, [&](int64_t i, const BondCrossings& b) {
        out[static_cast<size_t>(i)] = select_convention(b, cfg.h0_convention);
    });
    return out;
}

namespace {
double lpp_run(int N, Xoshiro256pp& rng) {
    // row[j] holds H(i-1, j) entering row i and H(i, j) after the update
    std::vector<double> row(static_cast<size_t>(N) + 1, 0.0);
    for (int i = 1; i <= N; ++i) {
        double left = 0.0;  // H(i, 0) boundary
        for (int j = 1; j <= N; ++j) {
            const double w = -std::log1p(-rng.uniform01());
            left = w + std::max(row[j], left);
            row[j] = left;
        }
    }
    return row[N];
}
}  // namespace

LppResult lpp_sample(int N, uint64_t seed) {
    if (N < 1) throw std::domain_error("lpp_sample: N must be >= 1");
    Xoshiro256pp rng = derive_stream(seed, 0);
    return LppResult{N, lpp_run(N, rng)};
}

std::vector<LppResult> lpp_batch(int N, int64_t n_samples, uint64_t seed, int workers) {
    if (N < 1) throw std::domain_error("lpp_batch: N must be >= 1");
    if (workers < 1) workers = 1;
    std::vector<LppResult> out(static_cast<size_t>(n_samples));
    auto body = [&](int64_t begin, int64_t end) {
        for (int64_t i = begin; i < end; ++i) {
            Xoshiro256pp rng = derive_stream(seed, static_cast<uint64_t>(i));
            out[static_cast<size_t>(i)] = LppResult{N, lpp_run(N, rng)};
        }
    };
    if (workers == 1 || n_samples < 2 * workers) {
        body(0, n_samples);
        return out;
    }
    std::vector<std::thread> pool;
    const int64_t chunk = (n_samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int64_t b = w * chunk;
        const int64_t e = std::min<int64_t>(n_samples, b + chunk);
        if (b >= e) break;
        pool.emplace_back(body, b, e);
    }
    for (auto& th : pool) th.join();
    return out;
}

double lpp_from_weights(std::span<const double> w, int N) {
    if (static_cast<int>(w.size()) != N * N)
        throw std::invalid_argument("lpp_from_weights: size mismatch");
    std::vector<double> row(static_cast<size_t>(N) + 1, 0.0);
    for (int i = 1; i <= N; ++i) {
        double left = 0.0;
        for (int j = 1; j <= N; ++j) {
            left = w[static_cast<size_t>(i - 1) * N + (j - 1)] + std::max(row[j], left);
            row[j] = left;
        }
    }
    return row[N];
}

void write_trajectories_binary(std::ostream& os, std::span<const TrajectoryResult> t) {
    for (const auto& r : t) {
        unsigned char buf[12];
        const uint32_t h = r.h0;
        const uint64_t e = r.n_events;
        for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>(h >> (8 * i));
        for (int i = 0; i < 8; ++i) buf[4 + i] = static_cast<unsigned char>(e >> (8 * i));
        os.write(reinterpret_cast<const char*>(buf), 12);
    }
}

void write_trajectories_csv(std::ostream& os, std::span<const TrajectoryResult> t) {
    os << "h0,n_events\n";
    for (const auto& r : t) os << r.h0 << ',' << r.n_events << '\n';
}

}  // namespace asepldp::sim
