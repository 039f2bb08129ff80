#include "asepldp/qfunctions.hpp"

#include <cmath>
#include <stdexcept>

#include "asepldp/quadrature.hpp"

namespace asepldp::qfn {

QFuncConfig QFuncConfig::for_range(const ModelParams& mp, double zeta_max, double tail_tol) {
    const double z = std::max(zeta_max, 1.0);
    int n = static_cast<int>(std::ceil(std::log(tail_tol / z) / mp.log_tau())) + 2;
    if (n < 16) n = 16;
    return QFuncConfig{n, tail_tol};
}

double F_q(const ModelParams& mp, double zeta, const QFuncConfig& cfg) {
    if (!(zeta >= 0.0)) throw std::domain_error("F_q: zeta must be >= 0");
    double prod = 1.0;
    double tn = 1.0;
    for (int n = 0; n < cfg.product_truncation; ++n) {
        prod /= 1.0 + zeta * tn;
        tn *= mp.tau;
    }
    return prod;
}

double log_F_q(const ModelParams& mp, double zeta, const QFuncConfig& cfg) {
    if (!(zeta >= 0.0)) throw std::domain_error("log_F_q: zeta must be >= 0");
    double acc = 0.0;
    double tn = 1.0;
    for (int n = 0; n < cfg.product_truncation; ++n) {
        acc -= std::log1p(zeta * tn);
        tn *= mp.tau;
    }
    return acc;
}

double G_m(const ModelParams& mp, int m, double zeta, const QFuncConfig& cfg) {
    if (m < 0) throw std::domain_error("G_m: m must be >= 0");
    if (!(zeta >= 0.0)) throw std::domain_error("G_m: zeta must be >= 0");
    double mfact = 1.0;
    for (int k = 2; k <= m; ++k) mfact *= k;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    // term_j = tau^{(m+1)j} / (1+zeta tau^j)^{m+1}
    double acc = 0.0;
    double tj = 1.0;  // tau^j
    for (int j = 0; j < cfg.product_truncation; ++j) {
        const double base = 1.0 + zeta * tj;
        double p = tj / base;  // tau^j/(1+zeta tau^j)
        double term = 1.0;
        for (int k = 0; k < m; ++k) term *= p;
        term *= tj / base;  // one more tau^j and denominator power
        acc += term;
        tj *= mp.tau;
    }
    return -sign * mfact * acc;
}

std::vector<double> F_q_deriv_ladder(const ModelParams& mp, int n, double zeta,
                                     const QFuncConfig& cfg) {
    if (n < 0) throw std::domain_error("F_q_deriv: n must be >= 0");
    std::vector<double> F(n + 1);
    F[0] = F_q(mp, zeta, cfg);
    if (n == 0) return F;
    std::vector<double> G(n);
    for (int m = 0; m < n; ++m) G[m] = G_m(mp, m, zeta, cfg);
    // binomial row updated in place
    std::vector<double> binom{1.0};
    for (int j = 0; j + 1 <= n; ++j) {
        // F^{(j+1)} = sum_{k=0}^{j} C(j,k) F^{(j-k)} G^{(k)}
        double acc = 0.0;
        for (int k = 0; k <= j; ++k) acc += binom[k] * F[j - k] * G[k];
        F[j + 1] = acc;
        binom.push_back(1.0);
        for (int k = j; k >= 1; --k) binom[k] += binom[k - 1];
    }
    return F;
}

double F_q_deriv(const ModelParams& mp, int n, double zeta, const QFuncConfig& cfg) {
    return F_q_deriv_ladder(mp, n, zeta, cfg).back();
}

double weighted_integral(const ModelParams& mp, int n, double alpha, double tol) {
    if (n < 1) throw std::domain_error("weighted_integral: n must be >= 1");
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::domain_error("weighted_integral: alpha must be in [0,1)");
    if (!(tol > 0.0)) throw std::domain_error("weighted_integral: tol must be > 0");

    const double sign = (n % 2 == 0) ? 1.0 : -1.0;

    // Lower piece [0,1]: zeta = v^{1/(1-alpha)} removes the power singularity,
    // zeta^{-alpha} dzeta = dv/(1-alpha).
    const double inv = 1.0 / (1.0 - alpha);
    auto lower = [&](double v) {
        const double zeta = std::pow(v, inv);
        const QFuncConfig cfg = QFuncConfig::for_range(mp, 1.0);
        return inv * F_q_deriv(mp, n, zeta, cfg);
    };
    const double I_low = integrate_adaptive(lower, 0.0, 1.0, tol * 0.5);

    // Upper piece [1,inf): zeta = u/(1-u); superpolynomial decay of F^{(n)}
    // keeps the mapped integrand smooth at u -> 1.
    auto upper = [&](double u) {
        const double om = 1.0 - u;
        const double zeta = u / om;
        const QFuncConfig cfg = QFuncConfig::for_range(mp, zeta);
        return std::pow(zeta, -alpha) * F_q_deriv(mp, n, zeta, cfg) / (om * om);
    };
    const double I_up = integrate_adaptive(upper, 0.5, 1.0, tol * 0.5);

    return sign * (I_low + I_up);
}

MomentIdentitySides fractional_moment_sides(const ModelParams& mp,
                                            const FractionalOrder& order,
                                            const DiscreteDistribution& U, double tol) {
    if (U.atoms.size() != U.probs.size() || U.atoms.empty())
        throw std::invalid_argument("fractional_moment: malformed distribution");
    for (double u : U.atoms)
        if (u < 0.0 || u > 1.0)
            throw std::domain_error("fractional_moment: support must lie in [0,1]");

    const int n = order.n;
    const double alpha = order.alpha;
    const double s = order.s;

    double direct = 0.0;
    for (size_t i = 0; i < U.atoms.size(); ++i)
        direct += U.probs[i] * std::pow(U.atoms[i], s);

    const double denom = weighted_integral(mp, n, alpha, tol * 0.1);

    // numerator with the same sign convention as the denominator
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    auto integrand_at = [&](double zeta) {
        double acc = 0.0;
        for (size_t i = 0; i < U.atoms.size(); ++i) {
            const double u = U.atoms[i];
            if (u == 0.0) continue;
            const QFuncConfig cfg = QFuncConfig::for_range(mp, zeta * u);
            acc += U.probs[i] * std::pow(u, n) * F_q_deriv(mp, n, zeta * u, cfg);
        }
        return acc;
    };
    const double inv = 1.0 / (1.0 - alpha);
    auto lower = [&](double v) {
        const double zeta = std::pow(v, inv);
        return inv * integrand_at(zeta);
    };
    auto upper = [&](double u) {
        const double om = 1.0 - u;
        const double zeta = u / om;
        return std::pow(zeta, -alpha) * integrand_at(zeta) / (om * om);
    };
    const double num = sign * (integrate_adaptive(lower, 0.0, 1.0, tol * 0.1) +
                               integrate_adaptive(upper, 0.5, 1.0, tol * 0.1));

    return MomentIdentitySides{direct, num / denom};
}

bool fractional_moment_check(const ModelParams& mp, const FractionalOrder& order,
                             const DiscreteDistribution& U, double tol) {
    // all-zero support: both sides vanish, identity holds trivially
    bool all_zero = true;
    for (double u : U.atoms) all_zero = all_zero && u == 0.0;
    if (all_zero) return true;
    const auto sides = fractional_moment_sides(mp, order, U, tol);
    return std::fabs(sides.direct - sides.via_integrals) <= tol;
}

}  // namespace asepldp::qfn
