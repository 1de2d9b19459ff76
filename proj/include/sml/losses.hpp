#pragma once
// Classification-calibrated loss functions: convex, non-increasing,
// differentiable at 0 with phi'(0) < 0, and L-Lipschitz on the reachable
// argument range [-2*beta, 2*beta].

#include <functional>
#include <string>

namespace sml {

struct LossSpec {
    std::string name;
    std::function<double(double)> eval;        // phi(x) >= 0
    std::function<double(double)> derivative;  // phi'(x), subgradient at kinks
    double lipschitz = 0.0;                    // L_phi on [-2*beta, 2*beta]
    double phi_at_0 = 0.0;
};

// Supported names: logistic, exponential, hinge, truncated_quadratic.
// beta fixes the reachable range over which the Lipschitz constant is valid;
// it only affects the constants of the exponential and truncated quadratic
// losses. Throws std::invalid_argument for unknown names.
LossSpec make_loss(const std::string& name, double beta);

struct PropertyCheck {
    bool pass = true;
    double worst_violation = 0.0;
};

struct Assumption1Report {
    PropertyCheck convexity;          // phi((x+y)/2) <= (phi(x)+phi(y))/2
    PropertyCheck non_increasing;     // phi(x) >= phi(y) for x <= y
    PropertyCheck negative_slope_at_0;
    PropertyCheck lipschitz;          // |phi(x)-phi(y)| <= L|x-y|
    bool all_pass = false;
};

// Diagnostic sweep of the four loss-function conditions on the grid
// {lo, lo+step, ..., hi}. Never throws; failures are reported with the
// worst violation magnitude.
Assumption1Report verify_assumption1(const LossSpec& spec, double lo, double hi, double step);

}  // namespace sml
