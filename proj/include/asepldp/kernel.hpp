#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "asepldp/model_params.hpp"

namespace asepldp::kernel {

using cd = std::complex<double>;

struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gamma on the complex plane: Lanczos approximation, reflection for
// Re z < 1/2. Throws at nonpositive integers.
cd complex_gamma(cd z);

// tau^u with the principal branch exp(u log tau).
cd tau_pow(const ModelParams& mp, cd u);

// Phase function f(u,z) = (q-p)/(1+z/tau) - (q-p)/(1+tau^u z/tau).
// The kernel's exponential factor is exp(t f(u,w)).
cd phase_f(const ModelParams& mp, cd u, cd z);

// A sampled point of the phase surface.
struct PhasePoint {
    cd u;
    cd z;
    cd f_value;

    static PhasePoint at(const ModelParams& mp, cd u, cd z);
};

// Saddle points of z -> f(u,z): (+tau^{1-u/2}, -tau^{1-u/2}).
std::pair<cd, cd> critical_points(const ModelParams& mp, cd u);

// d^2/dz^2 f at the saddle selected by sign (+1 -> +tau^{1-u/2}).
cd second_derivative_at_cp(const ModelParams& mp, cd u, int sign);

// h_q extended to complex order; f(u, tau^{1-u/2}) = -h_q(u).
cd h_q_complex(const ModelParams& mp, cd u);

// Discretization of the two contours: the vertical u-line Re u = delta
// truncated at |Im u| <= u_truncation, and the circle |w| = tau^{1-delta/2}.
struct ContourSpec {
    double delta;
    double u_truncation;  // Y_max
    int u_nodes;          // total Gauss-Legendre nodes on the truncated line
    int w_nodes;          // trapezoidal nodes on the circle

    double radius(const ModelParams& mp) const;
    ContourSpec refined() const;  // doubled node counts, same geometry
};

// Default contour for a kernel of derivative order n at time scale t.
// Y_max follows the exponential sine envelope so the discarded tail is
// below 1e-15 relative to the peak.
ContourSpec make_contour(const ModelParams& mp, int order_n, double t,
                         double delta = 0.5, int w_nodes = 64);

// Precomputed u-line data shared by every (w,w') evaluation: node ordinates,
// the sine/falling-factorial weight, and tau^u per node.
struct ULineTable {
    int order_n;
    double delta;
    std::vector<double> y;
    std::vector<cd> sw;     // quadrature weight * (u)_n / (2 sin(-pi u))
    std::vector<cd> tau_u;  // tau^{delta + i y}
};

ULineTable build_uline(const ModelParams& mp, int order_n, const ContourSpec& spec);

// Kernel K^{(n)}_{zeta,t}(w, w') evaluated with a prebuilt table.
cd kernel_eval(const ModelParams& mp, const ULineTable& tab, double zeta, double t,
               cd w, cd w_prime);

// One-shot evaluation; builds the table internally.
cd kernel_K(const ModelParams& mp, int order_n, double zeta, double t,
            const ContourSpec& spec, cd w, cd w_prime);

// Falling-factorial product (a)_n = a (a-1) ... (a-n+1).
cd falling_factorial(cd a, int n);

}  // namespace asepldp::kernel
