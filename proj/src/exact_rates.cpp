#include "asepldp/exact_rates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "asepldp/quadrature.hpp"

namespace asepldp::rates {

double h_q(const ModelParams& mp, double s) {
    if (!(s > 0.0)) throw std::domain_error("h_q: s must be > 0");
    // 1 - tau^{s/2} via expm1 keeps full precision for small s
    const double x = 0.5 * s * mp.log_tau();
    return mp.gamma * (-std::expm1(x)) / (1.0 + std::exp(x));
}

double h_q_prime(const ModelParams& mp, double s) {
    if (!(s > 0.0)) throw std::domain_error("h_q_prime: s must be > 0");
    const double ts2 = std::pow(mp.tau, 0.5 * s);
    const double d = 1.0 + ts2;
    return -mp.gamma * ts2 * mp.log_tau() / (d * d);
}

double B_q(const ModelParams& mp, double s) {
    if (!(s > 0.0)) throw std::domain_error("B_q: s must be > 0");
    return h_q(mp, s) / s;
}

double B_q_limit0(const ModelParams& mp) {
    // equals h_q'(0+); written with |log tau| so the sign is manifest
    return 0.25 * mp.gamma * std::fabs(mp.log_tau());
}

double h_q_subadditivity_deficit(const ModelParams& mp, double x, double y) {
    const double tx = std::pow(mp.tau, 0.5 * x);
    const double ty = std::pow(mp.tau, 0.5 * y);
    const double txy = std::pow(mp.tau, 0.5 * (x + y));
    return -mp.gamma * (1.0 - ty) * (1.0 - tx) * (1.0 - txy) /
           ((1.0 + txy) * (1.0 + tx) * (1.0 + ty));
}

double artanh_stable(double u) {
    if (!(u >= 0.0) || !(u < 1.0)) throw std::domain_error("artanh_stable: u must be in [0,1)");
    if (u < 1e-4) {
        const double u2 = u * u;
        return u * (1.0 + u2 * (1.0 / 3.0 + u2 * (1.0 / 5.0 + u2 / 7.0)));
    }
    return 0.5 * std::log((1.0 + u) / (1.0 - u));
}

double phi_plus(double y) {
    if (!(y > 0.0) || !(y < 1.0)) throw std::domain_error("phi_plus: y must be in (0,1)");
    const double r = std::sqrt(y);
    return r - (1.0 - y) * artanh_stable(r);
}

double phi_asymptotic_ratio(double y) {
    if (!(y > 0.0) || !(y < 1.0))
        throw std::domain_error("phi_asymptotic_ratio: y must be in (0,1)");
    const double r = std::sqrt(y);
    if (y < 1e-8) {
        // expand sqrt(y)[1 - (1-y) artanh(r)/r] to avoid cancellation:
        // ratio = (2/3) + y*(2/5) + ... - y*(series cross terms)
        // Direct series of phi/y^{3/2}: 2/3 + (2/5) y + (2/7) y^2 - ... minus
        // the (1-y) cross term; compute from the artanh series explicitly.
        // phi = r - (1-y)(r + r^3/3 + r^5/5 + r^7/7)
        //     = r^3 (1 - 1/3) + r^5 (1/3 - 1/5) + r^7 (1/5 - 1/7) + ...
        const double y2 = y * y;
        return 2.0 / 3.0 + y * (2.0 / 15.0) + y2 * (2.0 / 35.0);
    }
    return phi_plus(y) / (y * r);
}

double dual_objective(const ModelParams& mp, double y, double s) {
    return s * 0.25 * (1.0 - y) * mp.log_tau() + h_q(mp, s) / mp.gamma;
}

double dual_objective_prime(const ModelParams& mp, double y, double s) {
    const double ts2 = std::pow(mp.tau, 0.5 * s);
    const double d = 1.0 + ts2;
    return (0.25 * (1.0 - y) - ts2 / (d * d)) * mp.log_tau();
}

double dual_maximizer(const ModelParams& mp, double y) {
    const double r = std::sqrt(y);
    return 2.0 * std::log((1.0 - r) / (1.0 + r)) / mp.log_tau();
}

RateReport legendre_dual(const ModelParams& mp, double y) {
    if (!(y > 0.0) || !(y < 1.0)) throw std::domain_error("legendre_dual: y must be in (0,1)");

    // bracket the maximum: g' > 0 near 0, double s_up until g' < 0
    const double s_lo = 1e-8;
    if (!(dual_objective_prime(mp, y, s_lo) > 0.0))
        throw std::runtime_error("legendre_dual: objective not increasing at the left bracket");
    double s_up = 1.0;
    while (dual_objective_prime(mp, y, s_up) > 0.0) {
        s_up *= 2.0;
        if (s_up > 1e8)
            throw std::runtime_error("legendre_dual: failed to bracket a maximum");
    }

    // golden-section to 1e-12 in s
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = s_lo, b = s_up;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = dual_objective(mp, y, c), fd = dual_objective(mp, y, d);
    while (b - a > 1e-12) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = dual_objective(mp, y, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = dual_objective(mp, y, d);
        }
    }
    const double s_num = 0.5 * (a + b);

    RateReport rep;
    rep.y = y;
    rep.phi_plus = phi_plus(y);
    rep.s_star = dual_maximizer(mp, y);
    rep.dual_value = dual_objective(mp, y, s_num);
    return rep;
}

double y0_threshold(const ModelParams& mp) {
    const double r = 2.0 * std::sqrt(mp.q * (1.0 - mp.q));
    return (1.0 - r) / (1.0 + r);
}

double tasep_J(double t) {
    if (!(t >= 4.0)) throw std::domain_error("tasep_J: t must be >= 4");
    const double rad = std::sqrt(t * t - 4.0 * t);
    return rad - 2.0 * std::log(0.5 * (t - 2.0 + rad));
}

double tasep_GV_integral(double t, double tol) {
    if (!(t >= 4.0)) throw std::domain_error("tasep_GV_integral: t must be >= 4");
    if (!(tol > 0.0)) throw std::domain_error("tasep_GV_integral: tol must be > 0");
    if (t == 4.0) return 0.0;
    // x = 4/(1-u^2) turns sqrt(x^2-4x)/x dx into 8u^2/(1-u^2)^2 du
    const double u_top = std::sqrt(1.0 - 4.0 / t);
    auto f = [](double u) {
        const double d = 1.0 - u * u;
        return 8.0 * u * u / (d * d);
    };
    return integrate_adaptive(f, 0.0, u_top, tol);
}

double mp_density(double x) {
    if (x <= 0.0 || x > 4.0) return 0.0;
    return std::sqrt(x * (4.0 - x)) / (2.0 * std::numbers::pi * x);
}

}  // namespace asepldp::rates
