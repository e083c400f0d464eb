#include "qdl/dynamics.hpp"

#include "parallel.hpp"
#include "qdl/errors.hpp"
#include "qdl/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace qdl {

namespace {

double snap(double x)
{
    if (x < kOrbitClamp) {
        return x > -kOrbitClamp ? 0.0 : x;
    }
    if (x > 1.0 - kOrbitClamp) {
        return x < 1.0 + kOrbitClamp ? 1.0 : x;
    }
    return x;
}

void check_start(double x0)
{
    if (!(x0 >= 0.0 && x0 <= 1.0)) {
        throw DomainError("initial point must lie in [0,1], got " + format_g17(x0));
    }
}

} // namespace

std::vector<double> orbit(const DeformedMap& m, double x0, std::size_t n)
{
    check_start(x0);
    if (n < 1) {
        throw DomainError("orbit length must be at least 1");
    }
    std::vector<double> xs;
    xs.reserve(n);
    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        x = snap(eval_map(m, x));
        xs.push_back(x);
    }
    return xs;
}

double lyapunov_turning(const DeformedMap& m, std::size_t n)
{
    if (n < 100) {
        throw DomainError("Lyapunov estimate needs n >= 100");
    }
    constexpr double kSuperstable = 1e-300;
    double x = kTurningPoint;
    double sum = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        x = snap(eval_map(m, x));
        const double d = std::abs(jet(m, x).d1);
        if (d < kSuperstable) {
            return -std::numeric_limits<double>::infinity();
        }
        sum += std::log(d);
    }
    return sum / static_cast<double>(n);
}

BifurcationDataset bifurcation_scan(const BifurcationSpec& spec, unsigned threads)
{
    if (!(spec.x0 > 0.0 && spec.x0 < 1.0)) {
        throw DomainError("bifurcation start point must lie in (0,1), got " + format_g17(spec.x0));
    }
    if (spec.orbit_length < 1 || spec.tail_length < 1 || spec.tail_length > spec.orbit_length) {
        throw DomainError("need 1 <= tail <= orbit length");
    }
    const auto params = spec.family.parameters();
    if (std::find(params.begin(), params.end(), spec.axis.name) == params.end()) {
        throw SpecError("'" + spec.axis.name + "' is not a parameter of " + spec.family.describe());
    }

    BifurcationDataset d;
    d.parameter = spec.axis.name;
    d.parameter_values = spec.axis.values();
    d.orbit_length = spec.orbit_length;
    d.tail_length = spec.tail_length;
    d.x0 = spec.x0;
    d.tails.resize(d.parameter_values.size());

    detail::parallel_for(d.parameter_values.size(), threads, [&](std::size_t i) {
        Bindings b = spec.fixed;
        b[spec.axis.name] = d.parameter_values[i];
        try {
            const DeformedMap m = spec.family.bind(b);
            auto xs = orbit(m, spec.x0, spec.orbit_length);
            d.tails[i].assign(xs.end() - static_cast<std::ptrdiff_t>(spec.tail_length), xs.end());
        } catch (const DomainError& e) {
            throw DomainError("bifurcation scan failed at " + spec.axis.name + "=" +
                              format_g17(d.parameter_values[i]) + " (index " + std::to_string(i) +
                              "): " + e.what());
        }
    });
    return d;
}

void write_bifurcation_csv(const BifurcationDataset& d, std::ostream& os)
{
    os << "param,iterate_index,x\n";
    const std::size_t first = d.orbit_length - d.tail_length + 1;
    for (std::size_t i = 0; i < d.parameter_values.size(); ++i) {
        const std::string p = format_g17(d.parameter_values[i]);
        for (std::size_t k = 0; k < d.tails[i].size(); ++k) {
            os << p << ',' << first + k << ',' << format_g17(d.tails[i][k]) << '\n';
        }
    }
}

} // namespace qdl
