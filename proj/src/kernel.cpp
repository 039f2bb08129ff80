#include "asepldp/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "asepldp/quadrature.hpp"

namespace asepldp::kernel {

namespace {
constexpr double kPi = std::numbers::pi;

// Lanczos g=7, 9 coefficients.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace

cd complex_gamma(cd z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw SingularityError("complex_gamma: pole at nonpositive integer");
    if (z.real() < 0.5) {
        // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1-z))
        return kPi / (std::sin(kPi * z) * complex_gamma(1.0 - z));
    }
    z -= 1.0;
    cd x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cd t = z + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cd tau_pow(const ModelParams& mp, cd u) { return std::exp(u * mp.log_tau()); }

cd phase_f(const ModelParams& mp, cd u, cd z) {
    const cd a = 1.0 + z / mp.tau;
    const cd b = 1.0 + tau_pow(mp, u) * z / mp.tau;
    if (std::abs(a) < 1e-14 || std::abs(b) < 1e-14)
        throw SingularityError("phase_f: z at a pole of the phase function");
    return mp.gamma / a - mp.gamma / b;
}

PhasePoint PhasePoint::at(const ModelParams& mp, cd u, cd z) {
    return PhasePoint{u, z, phase_f(mp, u, z)};
}

std::pair<cd, cd> critical_points(const ModelParams& mp, cd u) {
    const cd c = tau_pow(mp, 1.0 - 0.5 * u);
    return {c, -c};
}

cd second_derivative_at_cp(const ModelParams& mp, cd u, int sign) {
    const cd t32 = tau_pow(mp, 1.5 * u - 2.0);
    const cd t22 = tau_pow(mp, 2.0 * u - 2.0);
    const cd th = tau_pow(mp, 0.5 * u);
    if (sign > 0) {
        const cd d = 1.0 + th;
        return 2.0 * mp.gamma * (t32 - t22) / (d * d * d);
    }
    const cd d = 1.0 - th;
    if (std::abs(d) < 1e-14)
        throw SingularityError("second_derivative_at_cp: 1 - tau^{u/2} vanishes");
    return -2.0 * mp.gamma * (t32 + t22) / (d * d * d);
}

cd h_q_complex(const ModelParams& mp, cd u) {
    const cd th = tau_pow(mp, 0.5 * u);
    return mp.gamma * (1.0 - th) / (1.0 + th);
}

double ContourSpec::radius(const ModelParams& mp) const {
    return std::pow(mp.tau, 1.0 - 0.5 * delta);
}

ContourSpec ContourSpec::refined() const {
    ContourSpec s = *this;
    s.u_nodes *= 2;
    s.w_nodes *= 2;
    return s;
}

ContourSpec make_contour(const ModelParams& mp, int order_n, double t, double delta,
                         int w_nodes) {
    (void)mp;
    ContourSpec s;
    s.delta = delta;
    const double lt = std::log(std::max(t, std::numbers::e));
    s.u_truncation = (order_n * lt + 40.0) / kPi;
    const int panels = static_cast<int>(std::ceil(2.0 * s.u_truncation));
    s.u_nodes = 16 * panels;
    s.w_nodes = w_nodes;
    return s;
}

ULineTable build_uline(const ModelParams& mp, int order_n, const ContourSpec& spec) {
    if (order_n < 0) throw std::domain_error("build_uline: order must be >= 0");
    const double dmax = std::max(order_n, 1);
    if (!(spec.delta > 0.0) || !(spec.delta < dmax))
        throw std::domain_error("build_uline: delta must lie in (0, max(n,1))");
    // discarded tail of the sine envelope must stay below the working budget
    const double ym = spec.u_truncation;
    const double tail = 2.0 * std::exp(-kPi * ym) * std::pow(ym + order_n + 1.0, order_n);
    if (!(tail < 1e-10))
        throw QuadratureError("build_uline: u-line truncation budget exceeded");

    const int panels = std::max(1, spec.u_nodes / 16);
    PanelRule rule = composite_gauss(-spec.u_truncation, spec.u_truncation, panels);

    ULineTable tab;
    tab.order_n = order_n;
    tab.delta = spec.delta;
    tab.y = rule.nodes;
    tab.sw.resize(rule.nodes.size());
    tab.tau_u.resize(rule.nodes.size());
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const cd u{spec.delta, rule.nodes[i]};
        // (1/2pi) * pi/sin(-pi u) folded with the quadrature weight
        const cd s = std::sin(-kPi * u);
        tab.sw[i] = rule.weights[i] * 0.5 * falling_factorial(u, order_n) / s;
        tab.tau_u[i] = tau_pow(mp, u);
    }
    return tab;
}

cd falling_factorial(cd a, int n) {
    cd p = 1.0;
    for (int i = 0; i < n; ++i) p *= a - static_cast<double>(i);
    return p;
}

cd kernel_eval(const ModelParams& mp, const ULineTable& tab, double zeta, double t,
               cd w, cd w_prime) {
    if (!(zeta > 0.0)) throw std::domain_error("kernel_eval: zeta must be > 0");
    const double lz = std::log(zeta);
    const double zpow = std::exp((tab.delta - tab.order_n) * lz);
    cd acc{0.0, 0.0};
    for (size_t i = 0; i < tab.y.size(); ++i) {
        const cd u{tab.delta, tab.y[i]};
        const cd den = w_prime - tab.tau_u[i] * w;
        if (std::abs(den) < 1e-12)
            throw SingularityError("kernel_eval: w' - tau^u w vanishes on the line");
        const cd osc = std::polar(zpow, tab.y[i] * lz);
        acc += tab.sw[i] * osc * std::exp(t * phase_f(mp, u, w)) / den;
    }
    return acc;
}

cd kernel_K(const ModelParams& mp, int order_n, double zeta, double t,
            const ContourSpec& spec, cd w, cd w_prime) {
    const ULineTable tab = build_uline(mp, order_n, spec);
    return kernel_eval(mp, tab, zeta, t, w, w_prime);
}

}  // namespace asepldp::kernel
