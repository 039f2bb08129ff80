#pragma once

#include "asepldp/model_params.hpp"

namespace asepldp::rates {

// Lyapunov exponent h_q(s) = (q-p)(1-tau^{s/2})/(1+tau^{s/2}), s > 0.
double h_q(const ModelParams& mp, double s);

// d/ds h_q(s); positive and decreasing.
double h_q_prime(const ModelParams& mp, double s);

// B_q(s) = h_q(s)/s, strictly decreasing; limit (q-p)|log tau|/4 at 0+.
double B_q(const ModelParams& mp, double s);
double B_q_limit0(const ModelParams& mp);

// Exact subadditivity deficit h_q(x+y) - h_q(x) - h_q(y) in product form.
double h_q_subadditivity_deficit(const ModelParams& mp, double x, double y);

// Upper-tail rate function Phi_+(y) = sqrt(y) - (1-y) artanh(sqrt(y)), y in (0,1).
double phi_plus(double y);

// Phi_+(y) / y^{3/2}; tends to 2/3 as y -> 0+.
double phi_asymptotic_ratio(double y);

// artanh computed stably: log form away from 0, series below 1e-4.
double artanh_stable(double u);

struct RateReport {
    double y;
    double phi_plus;
    double s_star;      // analytic maximizer of the dual problem
    double dual_value;  // numerically maximized value, equals phi_plus
};

// g_y(s) = s (1-y)/4 log(tau) + h_q(s)/(q-p); concave in s.
double dual_objective(const ModelParams& mp, double y, double s);
double dual_objective_prime(const ModelParams& mp, double y, double s);

// Analytic maximizer s*(y) = 2 log_tau((1-sqrt y)/(1+sqrt y)).
double dual_maximizer(const ModelParams& mp, double y);

// Maximizes g_y over s>0 by golden-section on a sign-change bracket.
RateReport legendre_dual(const ModelParams& mp, double y);

// Threshold below which the one-sided bound of earlier work is sharp;
// diagnostic only.
double y0_threshold(const ModelParams& mp);

// TASEP rate function J(t) = sqrt(t^2-4t) - 2 log((t-2+sqrt(t^2-4t))/2), t >= 4.
double tasep_J(double t);

// Same J via the integral int_4^t sqrt(x^2-4x)/x dx with the square-root
// endpoint removed by x = 4/(1-u^2).
double tasep_GV_integral(double t, double tol);

// Marchenko-Pastur density sqrt(4x-x^2)/(2 pi x) on (0,4], 0 elsewhere.
double mp_density(double x);

}  // namespace asepldp::rates
