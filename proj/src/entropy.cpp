#include "qdl/entropy.hpp"

#include "bisect.hpp"
#include "qdl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <optional>

namespace qdl {

namespace {

int rank(Symbol s)
{
    switch (s) {
    case Symbol::L: return 0;
    case Symbol::C: return 1;
    case Symbol::R: return 2;
    }
    return 1;
}

// Critical itinerary generated on demand, so a comparison only iterates as far
// as the first disagreement.
template <class Step>
class LazyItinerary {
public:
    LazyItinerary(Step step, double critical_value, double hit_tolerance, std::size_t max_len)
        : step_(std::move(step))
        , x_(critical_value)
        , hit_tolerance_(hit_tolerance)
        , max_len_(max_len)
    {
    }

    // Symbol at index i, or nullopt when the sequence was cut at max_len before i.
    std::optional<Symbol> at(std::size_t i)
    {
        while (symbols_.size() <= i && !ended_) {
            extend();
        }
        if (i < symbols_.size()) {
            return symbols_[i];
        }
        return std::nullopt;
    }

    KneadingSequence materialize()
    {
        while (!ended_) {
            extend();
        }
        return KneadingSequence{symbols_, truncated_};
    }

private:
    void extend()
    {
        if (symbols_.size() >= max_len_) {
            ended_ = true;
            truncated_ = true;
            return;
        }
        const double d = x_ - kTurningPoint;
        Symbol s = Symbol::C;
        if (d < -hit_tolerance_) {
            s = Symbol::L;
        } else if (d > hit_tolerance_) {
            s = Symbol::R;
        }
        symbols_.push_back(s);
        if (s == Symbol::C) {
            ended_ = true;
            return;
        }
        x_ = step_(x_);
    }

    Step step_;
    double x_;
    double hit_tolerance_;
    std::size_t max_len_;
    std::vector<Symbol> symbols_;
    bool ended_ = false;
    bool truncated_ = false;
};

double tent_step(double s, double x) { return x <= kTurningPoint ? s * x : s * (1.0 - x); }

Symbol flip(Symbol s)
{
    switch (s) {
    case Symbol::L: return Symbol::R;
    case Symbol::R: return Symbol::L;
    case Symbol::C: return Symbol::C;
    }
    return s;
}

// Kneading of T_s through period-doubling renormalization. For s <= sqrt 2 the
// square of T_s on its central interval is affinely conjugate to T_{s^2}, which
// gives K(T_s) = R x_0 R x_1 R x_2 ... with x_j the flipped j-th symbol of K(T_{s^2}).
// Only the base slope in (sqrt 2, 2] is ever iterated, so slopes close to 1
// (whose critical orbits hug 1/2 far below double resolution) stay exact.
class TentItinerary {
public:
    TentItinerary(double s, std::size_t max_len)
        : max_len_(max_len)
    {
        double log_s = std::log(s);
        const double half_log2 = 0.5 * std::log(2.0);
        while (log_s <= half_log2 && depth_ < 60) {
            log_s *= 2.0;
            ++depth_;
        }
        const double base_s = std::min(2.0, std::exp(log_s));
        const std::size_t base_len = (max_len >> depth_) + 2;
        base_.emplace([base_s](double x) { return tent_step(base_s, x); }, 0.5 * base_s, kCriticalHitTolerance,
                      base_len);
    }

    std::optional<Symbol> at(std::size_t i)
    {
        if (i >= max_len_) {
            return std::nullopt;
        }
        bool flipped = false;
        for (int d = 0; d < depth_; ++d) {
            if (i % 2 == 0) {
                return flipped ? Symbol::L : Symbol::R;
            }
            i = (i - 1) / 2;
            flipped = !flipped;
        }
        const std::optional<Symbol> b = base_->at(i);
        if (!b) {
            return std::nullopt;
        }
        return flipped ? flip(*b) : *b;
    }

    KneadingSequence materialize()
    {
        KneadingSequence k;
        for (std::size_t i = 0;; ++i) {
            const std::optional<Symbol> s = at(i);
            if (!s) {
                k.truncated = true;
                break;
            }
            k.symbols.push_back(*s);
            if (*s == Symbol::C) {
                break;
            }
        }
        return k;
    }

private:
    using Base = LazyItinerary<std::function<double(double)>>;

    std::size_t max_len_;
    int depth_ = 0;
    std::optional<Base> base_;
};

struct Comparison {
    Order order = Order::EQUAL;
    bool truncated_tie = false;
};

template <class A, class B>
Comparison compare_itineraries(A&& a, B&& b)
{
    bool odd = false;
    for (std::size_t i = 0;; ++i) {
        const std::optional<Symbol> sa = a(i);
        const std::optional<Symbol> sb = b(i);
        if (!sa || !sb) {
            return {Order::EQUAL, true};
        }
        if (*sa != *sb) {
            bool a_less = rank(*sa) < rank(*sb);
            if (odd) {
                a_less = !a_less;
            }
            return {a_less ? Order::LESS : Order::GREATER, false};
        }
        if (*sa == Symbol::C) {
            return {Order::EQUAL, false};
        }
        if (*sa == Symbol::R) {
            odd = !odd;
        }
    }
}

template <class Step>
EntropyResult entropy_bisection_impl(Step step, double critical_value, double tol, std::size_t max_len)
{
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw DomainError("entropy tolerance must be positive");
    }
    if (max_len == 0) {
        throw DomainError("kneading length must be positive");
    }

    LazyItinerary map_itinerary(std::move(step), critical_value, kCriticalHitTolerance, max_len);
    bool tie = false;

    // h >= log s  <=>  kneading(map) is not below kneading(T_s)
    auto at_least = [&](double s) {
        TentItinerary tent(s, max_len);
        const Comparison c = compare_itineraries([&](std::size_t i) { return map_itinerary.at(i); },
                                                 [&](std::size_t i) { return tent.at(i); });
        tie = tie || c.truncated_tie;
        return c.order != Order::LESS;
    };

    constexpr double kZeroProbe = 1e-6;
    if (!at_least(1.0 + kZeroProbe)) {
        return EntropyResult{0.0, 0.0, std::log1p(kZeroProbe), EntropyStatus::ZERO};
    }

    const int halvings = std::min(60, static_cast<int>(std::ceil(std::log2(1.0 / tol))) + 1);
    double lo = 1.0;
    double hi = 2.0;
    for (int k = 0; k < halvings; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (at_least(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    EntropyResult res;
    res.bracket_lo = std::log(lo);
    res.bracket_hi = std::log(hi);
    res.value = 0.5 * (res.bracket_lo + res.bracket_hi);
    res.status = tie ? EntropyStatus::MAX_LENGTH_TIE : EntropyStatus::CONVERGED;
    return res;
}

// Sorts and merges points closer than `eps`, keeping the first of each cluster.
void dedup(std::vector<double>& pts, double eps)
{
    std::sort(pts.begin(), pts.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (out == 0 || pts[i] - pts[out - 1] >= eps) {
            pts[out++] = pts[i];
        }
    }
    pts.resize(out);
}

} // namespace

std::string KneadingSequence::str() const
{
    std::string s;
    s.reserve(symbols.size());
    for (Symbol c : symbols) {
        s.push_back(static_cast<char>(c));
    }
    return s;
}

KneadingSequence KneadingSequence::parse(std::string_view text, bool truncated)
{
    KneadingSequence k;
    k.truncated = truncated;
    for (std::size_t i = 0; i < text.size(); ++i) {
        switch (text[i]) {
        case 'L': k.symbols.push_back(Symbol::L); break;
        case 'R': k.symbols.push_back(Symbol::R); break;
        case 'C':
            if (i + 1 != text.size()) {
                throw DomainError("C may only appear as the last kneading symbol");
            }
            k.symbols.push_back(Symbol::C);
            break;
        default: throw DomainError("kneading symbols must be L, C or R");
        }
    }
    return k;
}

std::string_view to_string(Order o)
{
    switch (o) {
    case Order::LESS: return "LESS";
    case Order::EQUAL: return "EQUAL";
    case Order::GREATER: return "GREATER";
    }
    return "?";
}

std::string_view to_string(EntropyStatus s)
{
    switch (s) {
    case EntropyStatus::CONVERGED: return "CONVERGED";
    case EntropyStatus::ZERO: return "ZERO";
    case EntropyStatus::MAX_LENGTH_TIE: return "MAX_LENGTH_TIE";
    }
    return "?";
}

KneadingSequence kneading(const DeformedMap& m, std::size_t max_len)
{
    return LazyItinerary([&m](double x) { return eval_map(m, x); }, eval_map(m, kTurningPoint),
                         kCriticalHitTolerance, max_len)
        .materialize();
}

KneadingSequence kneading(const UnimodalMap& f, std::size_t max_len)
{
    return LazyItinerary(f, f(kTurningPoint), kCriticalHitTolerance, max_len).materialize();
}

KneadingSequence tent_kneading(double s, std::size_t max_len)
{
    if (!(s > 1.0 && s <= 2.0)) {
        throw DomainError("tent slope must lie in (1,2]");
    }
    return TentItinerary(s, max_len).materialize();
}

Order kneading_compare(const KneadingSequence& a, const KneadingSequence& b)
{
    auto view = [](const KneadingSequence& k) {
        return [&k](std::size_t i) -> std::optional<Symbol> {
            if (i < k.symbols.size()) {
                return k.symbols[i];
            }
            return std::nullopt;
        };
    };
    return compare_itineraries(view(a), view(b)).order;
}

EntropyResult entropy_bisection(const DeformedMap& m, double tol, std::size_t max_len)
{
    return entropy_bisection_impl([&m](double x) { return eval_map(m, x); }, eval_map(m, kTurningPoint), tol,
                                  max_len);
}

EntropyResult entropy_bisection(const UnimodalMap& f, double tol, std::size_t max_len)
{
    return entropy_bisection_impl(f, f(kTurningPoint), tol, max_len);
}

std::vector<std::uint64_t> lap_counts(const DeformedMap& m, int n)
{
    if (n < 1) {
        throw DomainError("lap count needs n >= 1");
    }
    if (n > kMaxLapIterate) {
        throw ResourceLimitError("lap count limited to n <= 25 (preimage sets grow like 2^n)");
    }
    constexpr double kPreimageTol = 1e-13;
    constexpr double kMergeDistance = 1e-11;

    const double peak = eval_map(m, kTurningPoint);
    std::vector<double> level{kTurningPoint};
    std::vector<double> all{kTurningPoint};
    std::vector<std::uint64_t> counts{2};
    std::vector<double> next;
    std::vector<double> merged;

    for (int i = 1; i < n; ++i) {
        next.clear();
        for (double y : level) {
            if (y > peak || y < 0.0) {
                continue;
            }
            auto h = [&m, y](double x) { return eval_map(m, x) - y; };
            next.push_back(detail::bisect_root(h, 0.0, kTurningPoint, kPreimageTol, "preimage (left branch)"));
            next.push_back(detail::bisect_root(h, kTurningPoint, 1.0, kPreimageTol, "preimage (right branch)"));
        }
        dedup(next, kMergeDistance);

        merged.clear();
        merged.reserve(all.size() + next.size());
        std::merge(all.begin(), all.end(), next.begin(), next.end(), std::back_inserter(merged));
        dedup(merged, kMergeDistance);
        all.swap(merged);

        counts.push_back(1 + all.size());
        level.swap(next);
    }
    return counts;
}

std::uint64_t lap_count(const DeformedMap& m, int n) { return lap_counts(m, n).back(); }

double entropy_lap_estimate(const DeformedMap& m, int n)
{
    if (n < 4) {
        throw DomainError("lap-number growth estimate needs n >= 4");
    }
    const auto c = lap_counts(m, n);
    return std::log(static_cast<double>(c[n - 1]) / static_cast<double>(c[n - 2]));
}

} // namespace qdl
