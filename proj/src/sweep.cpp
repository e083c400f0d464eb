#include "qdl/sweep.hpp"

#include "parallel.hpp"
#include "qdl/dynamics.hpp"
#include "qdl/errors.hpp"
#include "qdl/fixed_points.hpp"
#include "qdl/format.hpp"
#include "qdl/version.hpp"

#include <fstream>
#include <ostream>

namespace qdl {

namespace {

struct PatternInfo {
    Pattern pattern;
    const char* name;
    const char* chain; // application order
};

constexpr PatternInfo kPatterns[] = {
    {Pattern::SINGLE, "single", "q"},       {Pattern::K2, "k2", "q,q"},
    {Pattern::K3, "k3", "q,q,q"},           {Pattern::K5, "k5", "q,q,q,q,q"},
    {Pattern::Q1Q2, "q1q2", "q2,q1"},       {Pattern::Q1Q1Q2, "q1q1q2", "q2,q1,q1"},
    {Pattern::Q1Q2Q2, "q1q2q2", "q2,q2,q1"}, {Pattern::Q1Q2Q1, "q1q2q1", "q1,q2,q1"},
};

struct QuantityInfo {
    Quantity quantity;
    const char* name;
};

constexpr QuantityInfo kQuantities[] = {
    {Quantity::ENTROPY, "entropy"},
    {Quantity::LYAPUNOV, "lyapunov"},
    {Quantity::LYAPUNOV_POSITIVE_MASK, "lyapunov-mask"},
    {Quantity::ENTROPY_POSITIVE_MASK, "entropy-mask"},
    {Quantity::STABILITY_CODE, "stability"},
};

const PatternInfo& info(Pattern p)
{
    for (const auto& i : kPatterns) {
        if (i.pattern == p) {
            return i;
        }
    }
    throw SpecError("unknown pattern");
}

double mask_value(double v, double threshold)
{
    if (v == kSweepSentinel) {
        return v;
    }
    return v > threshold ? 1.0 : 0.0;
}

double raw_value(const SweepSpec& spec, const DeformedMap& m)
{
    switch (spec.quantity) {
    case Quantity::ENTROPY:
        return entropy_bisection(m, spec.entropy_tol, spec.kneading_length).value;
    case Quantity::ENTROPY_POSITIVE_MASK:
        return mask_value(entropy_bisection(m, spec.entropy_tol, spec.kneading_length).value, 0.0);
    case Quantity::LYAPUNOV:
        return lyapunov_turning(m, spec.lyapunov_length);
    case Quantity::LYAPUNOV_POSITIVE_MASK:
        return mask_value(lyapunov_turning(m, spec.lyapunov_length), 0.0);
    case Quantity::STABILITY_CODE:
        return stability_code(m);
    }
    throw SpecError("unknown quantity");
}

} // namespace

std::string_view to_string(Quantity q)
{
    for (const auto& i : kQuantities) {
        if (i.quantity == q) {
            return i.name;
        }
    }
    return "?";
}

std::string_view to_string(Pattern p) { return info(p).name; }

Quantity parse_quantity(std::string_view s)
{
    for (const auto& i : kQuantities) {
        if (s == i.name) {
            return i.quantity;
        }
    }
    throw SpecError("unknown quantity '" + std::string(s) + "'");
}

Pattern parse_pattern(std::string_view s)
{
    for (const auto& i : kPatterns) {
        if (s == i.name) {
            return i.pattern;
        }
    }
    throw SpecError("unknown pattern '" + std::string(s) + "'");
}

bool is_two_value(Pattern p) { return p >= Pattern::Q1Q2; }

bool is_mask(Quantity q)
{
    return q == Quantity::LYAPUNOV_POSITIVE_MASK || q == Quantity::ENTROPY_POSITIVE_MASK;
}

MapFamily pattern_family(Pattern p) { return MapFamily::parse(info(p).chain, "r"); }

void SweepSpec::validate() const
{
    const bool two = is_two_value(pattern);
    const char* n1 = two ? "q1" : "r";
    const char* n2 = two ? "q2" : "q";
    if (axis1.name != n1 || axis2.name != n2) {
        throw SpecError(std::string("pattern ") + std::string(to_string(pattern)) + " sweeps axes (" + n1 + ", " +
                        n2 + "), got (" + axis1.name + ", " + axis2.name + ")");
    }
    axis1.validate();
    axis2.validate();
    if (two && !(fixed_r > 0.0 && fixed_r <= 4.0)) {
        throw SpecError("fixed r must lie in (0,4]");
    }
    if (!(entropy_tol > 0.0) || kneading_length == 0) {
        throw SpecError("entropy tolerance and kneading length must be positive");
    }
    if (lyapunov_length < 100) {
        throw SpecError("Lyapunov orbit length must be at least 100");
    }
}

DeformedMap map_for_cell(const SweepSpec& spec, double v1, double v2)
{
    Bindings b;
    if (is_two_value(spec.pattern)) {
        b = {{"r", spec.fixed_r}, {"q1", v1}, {"q2", v2}};
    } else {
        b = {{"r", v1}, {"q", v2}};
    }
    return pattern_family(spec.pattern).bind(b);
}

int stability_code(const DeformedMap& m)
{
    int code = 0;
    if (is_attracting(classify_zero(m).classification)) {
        code |= 1;
    }
    for (const auto& rec : find_nonzero_fixed_points(m)) {
        if (is_attracting(rec.classification)) {
            code |= 2;
            break;
        }
    }
    return code;
}

double evaluate_cell(const SweepSpec& spec, double v1, double v2)
{
    try {
        return raw_value(spec, map_for_cell(spec, v1, v2));
    } catch (const std::exception&) {
        return kSweepSentinel;
    }
}

SweepGrid run_sweep(const SweepSpec& spec, unsigned threads)
{
    spec.validate();
    SweepGrid g;
    g.spec = spec;
    g.values1 = spec.axis1.values();
    g.values2 = spec.axis2.values();
    g.cells.assign(g.rows() * g.cols(), kSweepSentinel);
    const std::size_t cols = g.cols();
    detail::parallel_for(g.cells.size(), threads, [&](std::size_t k) {
        g.cells[k] = evaluate_cell(spec, g.values1[k / cols], g.values2[k % cols]);
    });
    return g;
}

void export_csv(const SweepGrid& g, std::ostream& os)
{
    os << "axis1,axis2,value\n";
    for (std::size_t i = 0; i < g.rows(); ++i) {
        const std::string a = format_g17(g.values1[i]);
        for (std::size_t j = 0; j < g.cols(); ++j) {
            os << a << ',' << format_g17(g.values2[j]) << ',' << format_g17(g.at(i, j)) << '\n';
        }
    }
}

void export_csv(const SweepGrid& g, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    export_csv(g, os);
    os.flush();
    if (!os) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

SweepGrid threshold_mask(const SweepGrid& g, double threshold)
{
    Quantity out_quantity;
    switch (g.spec.quantity) {
    case Quantity::ENTROPY: out_quantity = Quantity::ENTROPY_POSITIVE_MASK; break;
    case Quantity::LYAPUNOV: out_quantity = Quantity::LYAPUNOV_POSITIVE_MASK; break;
    default:
        throw SpecError("only entropy and Lyapunov grids can be masked, got " +
                        std::string(to_string(g.spec.quantity)));
    }
    SweepGrid m = g;
    m.spec.quantity = out_quantity;
    for (double& v : m.cells) {
        v = mask_value(v, threshold);
    }
    return m;
}

void write_manifest(const SweepGrid& g, std::ostream& os)
{
    const SweepSpec& s = g.spec;
    auto axis = [&os](const char* key, const Axis& a, std::size_t n) {
        os << key << '=' << a.name << " min=" << format_g17(a.min) << " max=" << format_g17(a.max)
           << " step=" << format_g17(a.step) << (a.include_max ? " closed" : " half-open") << " points=" << n
           << '\n';
    };
    os << "software=qdl " << kVersion << '\n';
    os << "pattern=" << to_string(s.pattern) << '\n';
    os << "family=" << pattern_family(s.pattern).describe() << '\n';
    os << "quantity=" << to_string(s.quantity) << '\n';
    axis("axis1", s.axis1, g.rows());
    axis("axis2", s.axis2, g.cols());
    if (is_two_value(s.pattern)) {
        os << "fixed_r=" << format_g17(s.fixed_r) << '\n';
    }
    os << "entropy_tol=" << format_g17(s.entropy_tol) << '\n';
    os << "kneading_length=" << s.kneading_length << '\n';
    os << "lyapunov_length=" << s.lyapunov_length << '\n';
    os << "sentinel=" << format_g17(kSweepSentinel) << '\n';
    std::size_t failures = 0;
    for (double v : g.cells) {
        failures += v == kSweepSentinel ? 1 : 0;
    }
    os << "cells=" << g.cells.size() << " failed=" << failures << '\n';
}

} // namespace qdl
