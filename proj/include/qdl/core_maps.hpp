#pragma once

#include <span>
#include <string>
#include <vector>

namespace qdl {

// Every member of the family has its turning point here, whatever the deformation chain.
inline constexpr double kTurningPoint = 0.5;

// Slack accepted on x in [0,1] before a point is rejected as outside the interval.
inline constexpr double kIntervalSlack = 1e-12;

/// The q-deformation phi_q(x) = (1 - q^x) / (1 - q), with cached log q.
///
/// q^x is always formed as exp(x log q) and the quotient is evaluated as
/// expm1(x log q) / expm1(log q), which stays accurate as q -> 1. At q == 1
/// (log q == 0) the deformation is the identity.
class Deformation {
public:
    explicit Deformation(double q);

    double q() const noexcept { return q_; }
    double log_q() const noexcept { return log_q_; }
    bool is_identity() const noexcept { return log_q_ == 0.0; }

    double value(double y) const noexcept;

    // phi^(k)(y) = (log q)^k exp(y log q) / expm1(log q) for k >= 1.
    double d1(double y) const noexcept;
    double d2(double y) const noexcept;
    double d3(double y) const noexcept;

    // S(phi_q) = -(log q)^2 / 2, independent of the point.
    double schwarzian() const noexcept { return -0.5 * log_q_ * log_q_; }

private:
    double q_;
    double log_q_;
    double denom_; // expm1(log q)
};

/// The logistic map f_r followed by a chain of q-deformations.
///
/// `chain()` is stored in application order: chain()[0] is applied right after
/// f_r. The usual subscript notation Phi_{q_k,...,q_1,r} lists the same chain
/// outermost first, so it corresponds to chain() == {q_1, ..., q_k}.
class DeformedMap {
public:
    explicit DeformedMap(double r, std::vector<double> chain = {});

    double r() const noexcept { return r_; }
    const std::vector<double>& chain() const noexcept { return chain_; }
    std::span<const Deformation> deformations() const noexcept { return deformations_; }

    double operator()(double x) const;

    // Compact human-readable form, e.g. "r=3.5 chain=(0.5,2)".
    std::string describe() const;

private:
    double r_;
    std::vector<double> chain_;
    std::vector<Deformation> deformations_;
};

// Value and first three derivatives at a point.
struct DerivativeBundle {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

double eval_phi(double q, double x);
double eval_logistic(double r, double x);
double eval_map(const DeformedMap& m, double x);

/// Exact value/derivative jet of the composed map, propagated through the chain
/// with the third-order chain rule.
DerivativeBundle jet(const DeformedMap& m, double x);

/// Schwarzian derivative via the composition rule
/// S(f o g)(x) = S(f)(g(x)) g'(x)^2 + S(g)(x), seeded with S(f_r) = -6/(1-2x)^2.
/// Throws SingularityError at the turning point.
double schwarzian(const DeformedMap& m, double x);

/// Unique stationary point in (0,1) of phi_{q1} - phi_{q2}.
double critical_point_of_difference(double q1, double q2);

} // namespace qdl
