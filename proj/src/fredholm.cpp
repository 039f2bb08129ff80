#include "asepldp/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "asepldp/exact_rates.hpp"
#include "asepldp/quadrature.hpp"

namespace asepldp::fredholm {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<cd> circle_nodes(const ModelParams& mp, const kernel::ContourSpec& spec) {
    std::vector<cd> w(spec.w_nodes);
    const double R = spec.radius(mp);
    for (int j = 0; j < spec.w_nodes; ++j)
        w[j] = std::polar(R, 2.0 * kPi * j / spec.w_nodes);
    return w;
}
}  // namespace

NystromOperator build_nystrom(const ModelParams& mp, int order_n, double zeta, double t,
                              const kernel::ContourSpec& spec) {
    const auto tab = kernel::build_uline(mp, order_n, spec);
    const auto w = circle_nodes(mp, spec);
    const int m = spec.w_nodes;
    const size_t nu = tab.y.size();

    // phase table E[i][a] = sw_i * zeta^{u_i - n} * exp(t f(u_i, w_a))
    const double lz = std::log(zeta);
    const double zpow = std::exp((tab.delta - order_n) * lz);
    std::vector<cd> E(nu * m);
    std::vector<cd> tw(nu * m);
    for (size_t i = 0; i < nu; ++i) {
        const cd u{tab.delta, tab.y[i]};
        const cd pre = tab.sw[i] * std::polar(zpow, tab.y[i] * lz);
        for (int a = 0; a < m; ++a) {
            E[i * m + a] = pre * std::exp(t * kernel::phase_f(mp, u, w[a]));
            tw[i * m + a] = tab.tau_u[i] * w[a];
        }
    }

    NystromOperator op;
    op.nodes = w;
    op.weights.resize(m);
    for (int j = 0; j < m; ++j) op.weights[j] = w[j] / static_cast<double>(m);
    op.matrix.resize(m, m);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            cd acc{0.0, 0.0};
            for (size_t i = 0; i < nu; ++i) acc += E[i * m + a] / (w[b] - tw[i * m + a]);
            op.matrix(a, b) = acc * op.weights[b];
        }
    }
    return op;
}

cd fredholm_det(const NystromOperator& op) {
    const auto n = op.matrix.rows();
    Eigen::MatrixXcd A = op.matrix + Eigen::MatrixXcd::Identity(n, n);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const cd d = lu.determinant();
    if (!std::isfinite(d.real()) || !std::isfinite(d.imag()))
        throw std::runtime_error("fredholm_det: factorization produced non-finite value");
    return d;
}

CertifiedDet fredholm_det_certified(const ModelParams& mp, double zeta, double t,
                                    double tol) {
    kernel::ContourSpec spec = kernel::make_contour(mp, 0, t);
    cd prev = fredholm_det(build_nystrom(mp, 0, zeta, t, spec));
    for (int pass = 0; pass < 4; ++pass) {
        spec = spec.refined();
        const cd cur = fredholm_det(build_nystrom(mp, 0, zeta, t, spec));
        if (std::abs(cur - prev) <= tol)
            return CertifiedDet{cur.real(), std::abs(cur.imag()), spec.w_nodes};
        prev = cur;
    }
    throw QuadratureError("fredholm_det_certified: node doubling did not converge");
}

cd trace_Kn(const ModelParams& mp, int order_n, double zeta, double t,
            const kernel::ContourSpec& spec) {
    const auto tab = kernel::build_uline(mp, order_n, spec);
    const auto w = circle_nodes(mp, spec);
    const int m = spec.w_nodes;
    const double lz = std::log(zeta);
    const double zpow = std::exp((tab.delta - order_n) * lz);

    cd acc{0.0, 0.0};
    for (size_t i = 0; i < tab.y.size(); ++i) {
        const cd u{tab.delta, tab.y[i]};
        cd theta_sum{0.0, 0.0};
        for (int a = 0; a < m; ++a) theta_sum += std::exp(t * kernel::phase_f(mp, u, w[a]));
        theta_sum /= static_cast<double>(m);
        acc += tab.sw[i] * std::polar(zpow, tab.y[i] * lz) * theta_sum /
               (1.0 - tab.tau_u[i]);
    }
    return acc;
}

cd exterior_trace(const NystromOperator& op, int L) {
    return exterior_traces_upto(op, L).back();
}

std::vector<cd> exterior_traces_upto(const NystromOperator& op, int Lmax) {
    if (Lmax < 1 || Lmax > op.matrix.rows())
        throw std::invalid_argument("exterior_trace: L out of range");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.matrix, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("exterior_trace: eigensolver failed");
    const auto& ev = es.eigenvalues();
    // elementary symmetric functions via prod (1 + lambda x), truncated
    std::vector<cd> e(Lmax + 1, cd{0.0, 0.0});
    e[0] = 1.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        for (int k = std::min<int>(Lmax, static_cast<int>(i) + 1); k >= 1; --k)
            e[k] += ev[i] * e[k - 1];
    return std::vector<cd>(e.begin() + 1, e.end());
}

CompositionSet compositions(int L, int n) {
    CompositionSet cs;
    cs.L = L;
    cs.n = n;
    std::vector<int> cur(L, 0);
    // lexicographic enumeration
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == L - 1) {
            cur[pos] = rem;
            cs.members.push_back(cur);
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            cur[pos] = v;
            self(self, pos + 1, rem - v);
        }
    };
    rec(rec, 0, n);
    return cs;
}

double multinomial(int n, const std::vector<int>& m) {
    double v = std::tgamma(n + 1.0);
    for (int mi : m) v /= std::tgamma(mi + 1.0);
    return v;
}

namespace {

// sum over permutations of sgn(sigma) * prod over cycles of tr(prod A_{m_i});
// this is the node-quadrature value of the L-fold determinant integral.
cd mixed_determinant_integral(const std::vector<Eigen::MatrixXcd>& A,
                              const std::vector<int>& orders) {
    const int L = static_cast<int>(orders.size());
    std::vector<int> perm(L);
    std::iota(perm.begin(), perm.end(), 0);
    cd total{0.0, 0.0};
    std::sort(perm.begin(), perm.end());
    do {
        // cycle decomposition
        std::vector<bool> seen(L, false);
        cd prod{1.0, 0.0};
        int cycles = 0;
        for (int start = 0; start < L; ++start) {
            if (seen[start]) continue;
            ++cycles;
            // trace of the matrix product along the cycle
            int i = start;
            Eigen::MatrixXcd P = A[orders[i]];
            i = perm[i];
            seen[start] = true;
            while (i != start) {
                seen[i] = true;
                P = P * A[orders[i]];
                i = perm[i];
            }
            prod *= P.trace();
        }
        const double sgn = ((L - cycles) % 2 == 0) ? 1.0 : -1.0;
        total += sgn * prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace

cd dzeta_exterior_trace(const ModelParams& mp, int L, int n, double zeta, double t,
                        const kernel::ContourSpec& spec) {
    if (L < 1) throw std::domain_error("dzeta_exterior_trace: L must be >= 1");
    if (n < 0) throw std::domain_error("dzeta_exterior_trace: n must be >= 0");
    if (L > 6) throw std::invalid_argument("dzeta_exterior_trace: L > 6 not supported");
    if (L == 1) return trace_Kn(mp, n, zeta, t, spec);

    // weighted kernel matrices for every derivative order that can appear
    std::vector<Eigen::MatrixXcd> A(n + 1);
    for (int o = 0; o <= n; ++o) A[o] = build_nystrom(mp, o, zeta, t, spec).matrix;

    const CompositionSet cs = compositions(L, n);
    cd acc{0.0, 0.0};
    for (const auto& m : cs.members)
        acc += multinomial(n, m) * mixed_determinant_integral(A, m);
    double lfact = 1.0;
    for (int k = 2; k <= L; ++k) lfact *= k;
    return acc / lfact;
}

LeadingTermParams LeadingTermParams::make(const ModelParams& mp,
                                          const FractionalOrder& order, double t) {
    LeadingTermParams lt{order, t, 0.0};
    lt.zeta_upper = std::exp(t * rates::B_q(mp, 0.5 * order.s));
    return lt;
}

double LeadingTermParams::v_k(const ModelParams& mp, int k) const {
    return -2.0 * kPi * k / mp.log_tau();
}

kernel::ContourSpec leading_term_contour(const ModelParams& mp,
                                         const FractionalOrder& order, double t,
                                         int w_nodes) {
    return kernel::make_contour(mp, order.n, t, order.s, w_nodes);
}

namespace {

// single evaluation of e^{t h_q(s)} A_s(t) on a fixed contour; exact in the
// zeta variable, phase-shifted so the saddle region sits at exp(0)
cd leading_term_once(const ModelParams& mp, const LeadingTermParams& lt,
                     const kernel::ContourSpec& spec) {
    const int n = lt.order.n;
    const double hq = rates::h_q(mp, lt.order.s);
    const auto tab = kernel::build_uline(mp, n, spec);
    const auto w = circle_nodes(mp, spec);
    const int m = spec.w_nodes;
    const double Rlog = std::log(lt.zeta_upper);  // = t B_q(s/2)

    cd acc{0.0, 0.0};
    for (size_t i = 0; i < tab.y.size(); ++i) {
        const cd u{tab.delta, tab.y[i]};
        cd theta_sum{0.0, 0.0};
        for (int a = 0; a < m; ++a)
            theta_sum += std::exp(lt.t * (kernel::phase_f(mp, u, w[a]) + hq));
        theta_sum /= static_cast<double>(m);
        // int_0^{R} e^{i y r} dr, the zeta-integral of this Fourier mode
        const double y = tab.y[i];
        const cd mode = (std::polar(1.0, y * Rlog) - 1.0) / cd{0.0, y};
        acc += tab.sw[i] * theta_sum * mode / (1.0 - tab.tau_u[i]);
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * acc;
}

}  // namespace

cd leading_term_scaled(const ModelParams& mp, const LeadingTermParams& lt,
                       const kernel::ContourSpec& spec, double tol) {
    kernel::ContourSpec cur = spec;
    cd prev = leading_term_once(mp, lt, cur);
    for (int pass = 0; pass < 7; ++pass) {
        cur = cur.refined();
        const cd val = leading_term_once(mp, lt, cur);
        if (std::abs(val - prev) <= tol * std::abs(val)) return val;
        prev = val;
    }
    throw QuadratureError("leading_term_A: contour refinement did not converge");
}

cd leading_term_A(const ModelParams& mp, const LeadingTermParams& lt,
                  const kernel::ContourSpec& spec, double tol) {
    const double hq = rates::h_q(mp, lt.order.s);
    return leading_term_scaled(mp, lt, spec, tol) * std::exp(-lt.t * hq);
}

namespace {

// C0(k) at a non-integer order; n is held fixed so the integer case can be
// approached symmetrically.
cd C0_formula(const ModelParams& mp, double s, int n, double vk) {
    const double ts2 = std::pow(mp.tau, 0.5 * s);
    const double ts = std::pow(mp.tau, s);
    const double envelope =
        std::sqrt(kPi * std::pow(1.0 + ts2, 3) / (4.0 * mp.gamma * (ts2 - ts)));
    const cd sv{s, vk};
    const cd num = kernel::falling_factorial(sv, n);
    const cd den = std::sin(-kPi * sv) * (1.0 - std::pow(cd(mp.tau, 0.0), sv));
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return envelope * sign * num / den;
}

}  // namespace

cd steepest_descent_C0_eps(const ModelParams& mp, const FractionalOrder& order, int k,
                           double eps) {
    const double vk = -2.0 * kPi * k / mp.log_tau();
    const double nearest = std::round(order.s);
    if (std::fabs(order.s - nearest) < 1e-9) {
        // removable 0/0 between (s)_n and sin(-pi s): symmetric average
        const cd a = C0_formula(mp, order.s + eps, order.n, vk);
        const cd b = C0_formula(mp, order.s - eps, order.n, vk);
        return 0.5 * (a + b);
    }
    return C0_formula(mp, order.s, order.n, vk);
}

cd steepest_descent_C0(const ModelParams& mp, const FractionalOrder& order, int k) {
    return steepest_descent_C0_eps(mp, order, k, 1e-6);
}

}  // namespace asepldp::fredholm
