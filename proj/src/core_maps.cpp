#include "qdl/core_maps.hpp"

#include "qdl/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace qdl {

namespace {

std::string fmt_num(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void check_q(double q)
{
    if (!(q > 0.0) || !std::isfinite(q)) {
        throw DomainError("deformation parameter q must be a positive finite real, got " + fmt_num(q));
    }
}

void check_r(double r)
{
    if (!(r > 0.0 && r <= 4.0)) {
        throw DomainError("logistic parameter r must lie in (0,4], got " + fmt_num(r));
    }
}

// Accepts x within kIntervalSlack of [0,1] and snaps it inside.
double checked_point(double x)
{
    if (!(x >= -kIntervalSlack && x <= 1.0 + kIntervalSlack)) {
        throw DomainError("point must lie in [0,1], got " + fmt_num(x));
    }
    return std::clamp(x, 0.0, 1.0);
}

double logistic_unchecked(double r, double x) noexcept { return r * x * (1.0 - x); }

} // namespace

Deformation::Deformation(double q)
    : q_(q)
{
    check_q(q);
    log_q_ = std::log(q);
    denom_ = std::expm1(log_q_);
}

double Deformation::value(double y) const noexcept
{
    if (is_identity()) {
        return y;
    }
    return std::clamp(std::expm1(y * log_q_) / denom_, 0.0, 1.0);
}

double Deformation::d1(double y) const noexcept
{
    if (is_identity()) {
        return 1.0;
    }
    return log_q_ * std::exp(y * log_q_) / denom_;
}

double Deformation::d2(double y) const noexcept
{
    return is_identity() ? 0.0 : log_q_ * d1(y);
}

double Deformation::d3(double y) const noexcept
{
    return is_identity() ? 0.0 : log_q_ * log_q_ * d1(y);
}

DeformedMap::DeformedMap(double r, std::vector<double> chain)
    : r_(r)
    , chain_(std::move(chain))
{
    check_r(r_);
    deformations_.reserve(chain_.size());
    for (double q : chain_) {
        deformations_.emplace_back(q);
    }
}

double DeformedMap::operator()(double x) const { return eval_map(*this, x); }

std::string DeformedMap::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << "r=" << r_ << " chain=(";
    for (std::size_t i = 0; i < chain_.size(); ++i) {
        os << (i ? "," : "") << chain_[i];
    }
    os << ')';
    return os.str();
}

double eval_phi(double q, double x)
{
    return Deformation(q).value(checked_point(x));
}

double eval_logistic(double r, double x)
{
    check_r(r);
    return logistic_unchecked(r, checked_point(x));
}

double eval_map(const DeformedMap& m, double x)
{
    double y = logistic_unchecked(m.r(), checked_point(x));
    for (const auto& phi : m.deformations()) {
        y = phi.value(y);
    }
    return y;
}

DerivativeBundle jet(const DeformedMap& m, double x)
{
    x = checked_point(x);
    const double r = m.r();
    DerivativeBundle g{logistic_unchecked(r, x), r * (1.0 - 2.0 * x), -2.0 * r, 0.0};

    for (const auto& phi : m.deformations()) {
        const double p1 = phi.d1(g.value);
        const double p2 = phi.d2(g.value);
        const double p3 = phi.d3(g.value);
        DerivativeBundle h;
        h.value = phi.value(g.value);
        h.d1 = p1 * g.d1;
        h.d2 = p2 * g.d1 * g.d1 + p1 * g.d2;
        h.d3 = p3 * g.d1 * g.d1 * g.d1 + 3.0 * p2 * g.d1 * g.d2 + p1 * g.d3;
        g = h;
    }
    assert(x != kTurningPoint || g.d1 == 0.0);
    return g;
}

double schwarzian(const DeformedMap& m, double x)
{
    x = checked_point(x);
    const double t = 1.0 - 2.0 * x;
    if (t == 0.0) {
        throw SingularityError("Schwarzian derivative is undefined at the turning point x = 1/2");
    }
    const double r = m.r();
    double s = -6.0 / (t * t);
    double y = logistic_unchecked(r, x);
    double dy = r * t; // derivative of the composition built so far
    for (const auto& phi : m.deformations()) {
        s += phi.schwarzian() * dy * dy;
        dy *= phi.d1(y);
        y = phi.value(y);
    }
    return s;
}

double critical_point_of_difference(double q1, double q2)
{
    check_q(q1);
    check_q(q2);
    if (q1 == 1.0 || q2 == 1.0 || q1 == q2) {
        throw DomainError("critical_point_of_difference needs q1 != q2 and neither equal to 1");
    }
    const double l1 = std::log(q1);
    const double l2 = std::log(q2);
    const double arg = ((1.0 - q2) * l1) / ((1.0 - q1) * l2);
    if (!(arg > 0.0) || !std::isfinite(arg)) {
        throw DomainError("non-positive logarithm argument in critical_point_of_difference");
    }
    return -std::log(arg) / (l1 - l2);
}

} // namespace qdl
