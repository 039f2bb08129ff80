#pragma once

#include <cmath>
#include <stdexcept>

namespace asepldp {

// Asymmetry parameters shared by every formula in the library.
// q is the right-jump probability, p = 1-q the left one; the model is
// only considered in the rightward-drift regime q > 1/2.
struct ModelParams {
    double q;
    double p;      // 1 - q
    double tau;    // p/q, in (0,1)
    double gamma;  // q - p = 2q - 1, in (0,1)

    explicit ModelParams(double q_) : q(q_) {
        if (!(q > 0.5) || !(q < 1.0))
            throw std::domain_error("ModelParams: q must lie in (1/2, 1)");
        p = 1.0 - q;
        tau = p / q;
        gamma = q - p;
    }

    double log_tau() const { return std::log(tau); }
};

// A moment order s > 0 split as s = n - 1 + alpha with n = floor(s)+1
// and alpha = s - floor(s) in [0,1).
struct FractionalOrder {
    double s;
    int n;
    double alpha;

    explicit FractionalOrder(double s_) : s(s_) {
        if (!(s > 0.0)) throw std::domain_error("FractionalOrder: s must be > 0");
        n = static_cast<int>(std::floor(s)) + 1;
        alpha = s - std::floor(s);
    }
};

}  // namespace asepldp
