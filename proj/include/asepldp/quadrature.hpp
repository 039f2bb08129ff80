#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace asepldp {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Kronrod on a finite interval; throws if the requested
// tolerance was not certified.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double tol) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, 14, tol, &err);
    if (!(err <= tol * std::max(1.0, std::abs(v)) + 1e-300))
        throw QuadratureError("adaptive quadrature did not reach tolerance");
    return v;
}

// Node/weight table for composite Gauss-Legendre panels on [a,b].
struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline PanelRule composite_gauss(double a, double b, int panels, int order = 16) {
    if (order != 16) throw std::invalid_argument("composite_gauss: order 16 only");
    using G = boost::math::quadrature::gauss<double, 16>;
    PanelRule r;
    r.nodes.reserve(static_cast<size_t>(panels) * 16);
    r.weights.reserve(static_cast<size_t>(panels) * 16);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (size_t i = 0; i < G::abscissa().size(); ++i) {
            const double x = G::abscissa()[i];
            const double w = G::weights()[i] * 0.5 * h;
            // boost stores only the nonnegative half of the symmetric rule
            if (x == 0.0) {
                r.nodes.push_back(mid);
                r.weights.push_back(w);
            } else {
                r.nodes.push_back(mid + 0.5 * h * x);
                r.weights.push_back(w);
                r.nodes.push_back(mid - 0.5 * h * x);
                r.weights.push_back(w);
            }
        }
    }
    return r;
}

template <typename F>
std::complex<double> integrate_complex_panels(F&& f, const PanelRule& rule) {
    std::complex<double> acc{0.0, 0.0};
    for (size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

}  // namespace asepldp
