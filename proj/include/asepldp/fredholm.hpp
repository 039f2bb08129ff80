#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "asepldp/kernel.hpp"
#include "asepldp/model_params.hpp"

namespace asepldp::fredholm {

using cd = std::complex<double>;

// Quadrature discretization of the contour operator: trapezoidal nodes on
// the circle |w| = tau^{1-delta/2}, contour weights w_j/m (the 1/2pi i and
// the arc-length Jacobian folded in), and the row-weighted kernel matrix
// M[a][b] = K(w_a, w_b) * weight_b.
struct NystromOperator {
    std::vector<cd> nodes;
    std::vector<cd> weights;
    Eigen::MatrixXcd matrix;
};

NystromOperator build_nystrom(const ModelParams& mp, int order_n, double zeta, double t,
                              const kernel::ContourSpec& spec);

// det(I + M) by pivoted LU. The real part is the estimate; the imaginary
// part is a discretization diagnostic.
cd fredholm_det(const NystromOperator& op);

struct CertifiedDet {
    double value;
    double imag_residue;
    int w_nodes_used;
};

// Node-doubling until two successive determinants agree within tol.
CertifiedDet fredholm_det_certified(const ModelParams& mp, double zeta, double t,
                                    double tol = 1e-9);

// tr K^{(n)} = (1/2pi i) oint K^{(n)}(w,w) dw on the discretized contour.
cd trace_Kn(const ModelParams& mp, int order_n, double zeta, double t,
            const kernel::ContourSpec& spec);

// L-th elementary symmetric function of the eigenvalues of M.
cd exterior_trace(const NystromOperator& op, int L);

// e_1..e_Lmax in one eigen-decomposition.
std::vector<cd> exterior_traces_upto(const NystromOperator& op, int Lmax);

// Nonnegative integer vectors of length L summing to n.
struct CompositionSet {
    int L;
    int n;
    std::vector<std::vector<int>> members;
};
CompositionSet compositions(int L, int n);

double multinomial(int n, const std::vector<int>& m);

// n-th zeta-derivative of tr(K^{wedge L}):
//   (1/L!) sum_{m in M(L,n)} binom(n,m) I_zeta(m),
// with the mixed-order determinant integrals discretized on the same nodes.
cd dzeta_exterior_trace(const ModelParams& mp, int L, int n, double zeta, double t,
                        const kernel::ContourSpec& spec);

// Scale data for the leading-term integral.
struct LeadingTermParams {
    FractionalOrder order;
    double t;
    double zeta_upper;  // exp(t B_q(s/2))

    static LeadingTermParams make(const ModelParams& mp, const FractionalOrder& order,
                                  double t);
    double v_k(const ModelParams& mp, int k) const;
};

// Contour through the saddle for the leading-term evaluation: the u-line
// sits at Re u = s and the circle at radius tau^{1-s/2}.
kernel::ContourSpec leading_term_contour(const ModelParams& mp,
                                         const FractionalOrder& order, double t,
                                         int w_nodes = 64);

// A_s(t) = (-1)^n int_1^{zeta_upper} zeta^{-alpha} tr K^{(n)}_{zeta,t} dzeta.
// Under zeta = e^r each u-node contributes a closed-form mode integral;
// the contour is refined until the value is certified to relative tol.
cd leading_term_A(const ModelParams& mp, const LeadingTermParams& lt,
                  const kernel::ContourSpec& spec, double tol);

// e^{t h_q(s)} A_s(t): the phase is shifted by h_q(s) inside the integrand,
// so the value stays in range for t h_q(s) beyond the exp underflow point.
cd leading_term_scaled(const ModelParams& mp, const LeadingTermParams& lt,
                       const kernel::ContourSpec& spec, double tol);

// Saddle-point constant: sqrt(t) e^{t h_q(s)} Re A_s(t) -> C0(0) as t grows.
// Integer s is handled by symmetric perturbation s +- eps.
cd steepest_descent_C0(const ModelParams& mp, const FractionalOrder& order, int k);
cd steepest_descent_C0_eps(const ModelParams& mp, const FractionalOrder& order, int k,
                           double eps);

}  // namespace asepldp::fredholm
