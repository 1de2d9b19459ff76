#include "sml/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sml {

namespace {

// log(1 + e^{-x}) without overflow for large |x|.
double logistic_eval(double x) {
    if (x < -30.0) return -x;
    return std::log1p(std::exp(-x));
}

double logistic_derivative(double x) {
    // -e^{-x}/(1+e^{-x}) = -1/(1+e^{x})
    if (x > 30.0) return -std::exp(-x);
    return -1.0 / (1.0 + std::exp(x));
}

}  // namespace

LossSpec make_loss(const std::string& name, double beta) {
    if (beta <= 0.0) throw std::invalid_argument("make_loss: beta must be positive");
    LossSpec spec;
    spec.name = name;
    if (name == "logistic") {
        spec.eval = logistic_eval;
        spec.derivative = logistic_derivative;
        spec.lipschitz = 1.0;
    } else if (name == "exponential") {
        spec.eval = [](double x) { return std::exp(-x); };
        spec.derivative = [](double x) { return -std::exp(-x); };
        spec.lipschitz = std::exp(2.0 * beta);  // sup of |phi'| at x = -2*beta
    } else if (name == "hinge") {
        spec.eval = [](double x) { return std::max(0.0, 1.0 - x); };
        // subgradient 0 at the kink x = 1 (one-sided limit from the flat side)
        spec.derivative = [](double x) { return x < 1.0 ? -1.0 : 0.0; };
        spec.lipschitz = 1.0;
    } else if (name == "truncated_quadratic") {
        spec.eval = [](double x) {
            double m = std::max(0.0, 1.0 - x);
            return m * m;
        };
        spec.derivative = [](double x) { return -2.0 * std::max(0.0, 1.0 - x); };
        spec.lipschitz = 2.0 * (1.0 + 2.0 * beta);  // |phi'(-2*beta)|
    } else {
        throw std::invalid_argument("make_loss: unsupported loss '" + name + "'");
    }
    spec.phi_at_0 = spec.eval(0.0);
    return spec;
}

Assumption1Report verify_assumption1(const LossSpec& spec, double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi > lo)) throw std::invalid_argument("verify_assumption1: empty grid");
    Assumption1Report rep;
    const double tol = 1e-12;

    double prev = spec.eval(lo);
    double prev2 = prev;
    int idx = 0;
    for (double x = lo + step; x <= hi + step * 0.5; x += step, ++idx) {
        double cur = spec.eval(x);
        // monotonicity: phi must not increase
        double mono_violation = cur - prev;
        if (mono_violation > tol) {
            rep.non_increasing.pass = false;
            rep.non_increasing.worst_violation =
                std::max(rep.non_increasing.worst_violation, mono_violation);
        }
        // Lipschitz: |slope| must not exceed L
        double slope_excess = std::abs(cur - prev) / step - spec.lipschitz;
        if (slope_excess > 1e-9) {
            rep.lipschitz.pass = false;
            rep.lipschitz.worst_violation = std::max(rep.lipschitz.worst_violation, slope_excess);
        }
        // midpoint convexity on consecutive triples
        if (idx >= 1) {
            double mid_violation = prev - (prev2 + cur) / 2.0;
            if (mid_violation > tol) {
                rep.convexity.pass = false;
                rep.convexity.worst_violation =
                    std::max(rep.convexity.worst_violation, mid_violation);
            }
        }
        prev2 = prev;
        prev = cur;
    }

    double d0 = spec.derivative(0.0);
    if (!(d0 < 0.0)) {
        rep.negative_slope_at_0.pass = false;
        rep.negative_slope_at_0.worst_violation = d0;
    }

    rep.all_pass = rep.convexity.pass && rep.non_increasing.pass &&
                   rep.negative_slope_at_0.pass && rep.lipschitz.pass;
    return rep;
}

}  // namespace sml
