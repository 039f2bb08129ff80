#include <doctest.h>

#include <cmath>
#include <random>

#include "asepldp/qfunctions.hpp"

using namespace asepldp;
using namespace asepldp::qfn;

namespace {
const ModelParams kQ07{0.7};
const QFuncConfig kCfg = QFuncConfig::for_range(kQ07, 100.0);
}  // namespace

TEST_CASE("F_q basics") {
    CHECK(F_q(kQ07, 0.0, kCfg) == 1.0);
    const double f1 = F_q(kQ07, 1.0, kCfg);
    CHECK(f1 > 0.0);
    CHECK(f1 < 0.5);  // first factor alone is 1/2
    CHECK_THROWS_AS(F_q(kQ07, -1.0, kCfg), std::domain_error);

    // monotone decreasing in zeta
    double prev = 1.0;
    for (double z = 0.25; z <= 64.0; z *= 2.0) {
        const double v = F_q(kQ07, z, kCfg);
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
    }

    // log-domain oracle
    for (double z : {0.3, 1.0, 7.5}) {
        CHECK(std::fabs(std::log(F_q(kQ07, z, kCfg)) - log_F_q(kQ07, z, kCfg)) < 1e-12);
    }
}

TEST_CASE("truncation tail is below the configured bound") {
    // doubling the truncation changes nothing at working precision
    QFuncConfig big = kCfg;
    big.product_truncation *= 2;
    for (double z : {0.5, 1.0, 50.0})
        CHECK(F_q(kQ07, z, kCfg) == doctest::Approx(F_q(kQ07, z, big)).epsilon(1e-15));
}

TEST_CASE("G ladder values and bounds") {
    CHECK(G_m(kQ07, 0, 0.0, kCfg) == doctest::Approx(-1.75).epsilon(1e-12));
    CHECK_THROWS_AS(G_m(kQ07, -1, 0.0, kCfg), std::domain_error);

    for (int m = 0; m <= 5; ++m) {
        double mfact = 1.0;
        for (int k = 2; k <= m; ++k) mfact *= k;
        const double bound = mfact / (1.0 - std::pow(kQ07.tau, m + 1));
        for (double z : {0.0, 0.3, 1.0, 10.0, 100.0})
            CHECK(std::fabs(G_m(kQ07, m, z, kCfg)) <= bound * (1.0 + 1e-12));
    }
    // decay of G^{(1)} for large zeta
    CHECK(std::fabs(G_m(kQ07, 1, 1e6, kCfg)) < 1e-10);
}

TEST_CASE("G is the log-derivative of F_q") {
    const double h = 1e-6;
    for (double z : {0.2, 1.0, 3.0}) {
        const double fd =
            (std::log(F_q(kQ07, z + h, kCfg)) - std::log(F_q(kQ07, z - h, kCfg))) /
            (2.0 * h);
        CHECK(G_m(kQ07, 0, z, kCfg) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("derivative recurrence base cases") {
    CHECK(F_q_deriv(kQ07, 0, 0.7, kCfg) == F_q(kQ07, 0.7, kCfg));
    CHECK(F_q_deriv(kQ07, 1, 0.0, kCfg) == doctest::Approx(-1.75).epsilon(1e-12));
    CHECK_THROWS_AS(F_q_deriv(kQ07, -2, 0.0, kCfg), std::domain_error);
}

TEST_CASE("recurrence matches finite differences") {
    // n-th derivative vs order-4 central difference of the (n-1)-th
    for (int n = 1; n <= 4; ++n) {
        for (double z : {0.1, 0.5, 1.0, 2.5}) {
            const double h = 1e-3;
            auto g = [&](double x) { return F_q_deriv(kQ07, n - 1, x, kCfg); };
            const double fd = (-g(z + 2 * h) + 8 * g(z + h) - 8 * g(z - h) + g(z - 2 * h)) /
                              (12.0 * h);
            CHECK(F_q_deriv(kQ07, n, z, kCfg) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
    // second derivative vs plain central difference of F_q itself
    const double h = 1e-4;
    const double fd2 =
        (F_q(kQ07, 0.5 + h, kCfg) - 2.0 * F_q(kQ07, 0.5, kCfg) + F_q(kQ07, 0.5 - h, kCfg)) /
        (h * h);
    CHECK(std::fabs(F_q_deriv(kQ07, 2, 0.5, kCfg) - fd2) < 1e-5);
}

TEST_CASE("sign alternation and superpolynomial decay") {
    for (int n = 0; n <= 5; ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        for (double z = 0.0; z <= 100.0; z += 2.5)
            CHECK(sign * F_q_deriv(kQ07, n, z, kCfg) >= 0.0);
    }
    for (int n = 0; n <= 4; ++n) {
        for (int m = 0; m <= 4; ++m) {
            // zeta^m F^{(n)} shrinks along a growing tail grid
            double prev = 1e300;
            for (double z : {1e2, 1e3, 1e4}) {
                const auto c = QFuncConfig::for_range(kQ07, z);
                const double v = std::fabs(std::pow(z, m) * F_q_deriv(kQ07, n, z, c));
                CHECK(v < prev);
                prev = v;
            }
            CHECK(prev < 1e-4);
        }
    }
}

TEST_CASE("weighted integral values") {
    // n=1, alpha=0 equals F_q(0) = 1 by the fundamental theorem of calculus
    CHECK(weighted_integral(kQ07, 1, 0.0, 1e-10) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(weighted_integral(kQ07, 1, 0.5, 1e-9) > 0.0);
    CHECK(weighted_integral(kQ07, 2, 0.3, 1e-9) > 0.0);
    CHECK_THROWS_AS(weighted_integral(kQ07, 0, 0.0, 1e-9), std::domain_error);
    CHECK_THROWS_AS(weighted_integral(kQ07, 1, 1.0, 1e-9), std::domain_error);
}

TEST_CASE("fractional moment identity") {
    // point mass at 1: both sides are 1
    {
        DiscreteDistribution U{{1.0}, {1.0}};
        const auto sides = fractional_moment_sides(kQ07, FractionalOrder{0.5}, U, 1e-8);
        CHECK(sides.direct == doctest::Approx(1.0));
        CHECK(sides.via_integrals == doctest::Approx(1.0).epsilon(1e-7));
    }
    // point mass at 0: trivially true
    {
        DiscreteDistribution U{{0.0}, {1.0}};
        CHECK(fractional_moment_check(kQ07, FractionalOrder{0.5}, U, 1e-8));
    }
    // uniform on {1, tau, tau^2} at s = 1/2: E[U^s] = (1 + tau^{1/2} + tau)/3
    {
        const double t = kQ07.tau;
        DiscreteDistribution U{{1.0, t, t * t}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
        const auto sides = fractional_moment_sides(kQ07, FractionalOrder{0.5}, U, 1e-8);
        const double expect = (1.0 + std::pow(t, 0.5) + t) / 3.0;
        CHECK(sides.direct == doctest::Approx(expect).epsilon(1e-12));
        CHECK(std::fabs(sides.direct - sides.via_integrals) < 1e-6);
    }
    // randomized distributions across fractional and integer-adjacent orders
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double s : {0.3, 1.5, 2.7}) {
        for (int rep = 0; rep < 7; ++rep) {
            const int k = 2 + static_cast<int>(gen() % 4);
            DiscreteDistribution U;
            double total = 0.0;
            for (int i = 0; i < k; ++i) {
                U.atoms.push_back(unif(gen));
                const double w = 0.05 + unif(gen);
                U.probs.push_back(w);
                total += w;
            }
            for (auto& w : U.probs) w /= total;
            CHECK(fractional_moment_check(kQ07, FractionalOrder{s}, U, 1e-6));
        }
    }
}
