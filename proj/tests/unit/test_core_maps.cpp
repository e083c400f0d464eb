#include "oracles/oracles.hpp"
#include "qdl/core_maps.hpp"
#include "qdl/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qdl;

namespace {

std::vector<double> random_chain(std::mt19937_64& rng, int max_len)
{
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_real_distribution<double> logq(std::log(0.05), std::log(20.0));
    std::vector<double> c(static_cast<std::size_t>(len(rng)));
    for (double& q : c) {
        q = std::exp(logq(rng));
    }
    return c;
}

} // namespace

TEST_CASE("phi closed-form values")
{
    CHECK(eval_phi(4.0, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(eval_phi(1.0, 0.37) == 0.37);
    CHECK(eval_phi(0.5, 0.5) == doctest::Approx((1.0 - std::sqrt(0.5)) / 0.5).epsilon(1e-15));
    CHECK(eval_phi(0.5, 0.5) == doctest::Approx(0.585786).epsilon(1e-6));
}

TEST_CASE("phi at the midpoint is 1/(1+sqrt q)")
{
    for (double q : {1e-3, 0.1, 0.5, 0.999, 1.0, 1.001, 2.0, 7.5, 100.0, 1e4}) {
        CHECK(std::abs(eval_phi(q, 0.5) - 1.0 / (1.0 + std::sqrt(q))) <= 1e-12);
    }
}

TEST_CASE("phi is an increasing bijection of [0,1] with exact endpoints")
{
    for (double q : {0.01, 0.5, 0.9999999, 1.0000001, 3.0, 50.0}) {
        CHECK(eval_phi(q, 0.0) == 0.0);
        CHECK(eval_phi(q, 1.0) == 1.0);
        double prev = -1.0;
        bool increasing = true;
        for (int i = 0; i <= 10000; ++i) {
            const double v = eval_phi(q, i / 10000.0);
            increasing = increasing && v > prev;
            prev = v;
        }
        CHECK(increasing);
    }
}

TEST_CASE("phi is continuous through the identity")
{
    for (double x : {0.1, 0.5, 0.9}) {
        CHECK(std::abs(eval_phi(1.0 + 1e-12, x) - x) < 1e-11);
        CHECK(std::abs(eval_phi(1.0 - 1e-9, x) - x) < 1e-9);
    }
}

TEST_CASE("phi agrees with a long double evaluation of the closed form")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> logq(std::log(1e-3), std::log(1e3));
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double q = std::exp(logq(rng));
        const double x = ux(rng);
        const auto ref = static_cast<double>(oracle::phi(q, x));
        CHECK(std::abs(eval_phi(q, x) - ref) <= 1e-13);
    }
}

TEST_CASE("domain errors")
{
    CHECK_THROWS_AS(eval_phi(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(eval_phi(-1.0, 0.5), DomainError);
    CHECK_THROWS_AS(eval_phi(2.0, 1.1), DomainError);
    CHECK_THROWS_AS(eval_logistic(4.5, 0.5), DomainError);
    CHECK_THROWS_AS(eval_logistic(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(DeformedMap(3.0, {1.0, -2.0}), DomainError);
    CHECK(eval_phi(2.0, 1.0 + 5e-13) == 1.0);
    CHECK(eval_phi(2.0, -5e-13) == 0.0);
}

TEST_CASE("logistic values")
{
    CHECK(eval_logistic(4.0, 0.5) == 1.0);
    CHECK(eval_logistic(2.5, 0.6) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(eval_logistic(3.75, 0.2) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("map composition and chain order")
{
    CHECK(eval_map(DeformedMap(4.0), 0.5) == 1.0);
    CHECK(eval_map(DeformedMap(3.0, {1.0, 1.0}), 2.0 / 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(eval_map(DeformedMap(4.0, {0.5}), 0.5) == 1.0);

    // chain {a, b} applies phi_a first
    const double x = 0.3;
    const double expected = eval_phi(7.0, eval_phi(0.2, eval_logistic(3.7, x)));
    CHECK(eval_map(DeformedMap(3.7, {0.2, 7.0}), x) == expected);
    CHECK(eval_map(DeformedMap(3.7, {7.0, 0.2}), x) != doctest::Approx(expected));
}

TEST_CASE("endpoints map to zero for every chain")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ur(0.01, 4.0);
    for (int i = 0; i < 500; ++i) {
        const DeformedMap m(ur(rng), random_chain(rng, 5));
        CHECK(std::abs(eval_map(m, 0.0)) <= 1e-15);
        CHECK(eval_map(m, 1.0) == 0.0);
    }
}

TEST_CASE("unimodal with turning point 1/2")
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ur(0.5, 4.0);
    for (int i = 0; i < 100; ++i) {
        const DeformedMap m(ur(rng), random_chain(rng, 5));
        bool ok = true;
        for (int k = 1; k < 500; ++k) {
            const double x = k / 1000.0;
            ok = ok && jet(m, x).d1 > 0.0 && jet(m, 1.0 - x).d1 < 0.0;
        }
        CHECK(ok);
    }
}

TEST_CASE("jet examples")
{
    const auto j0 = jet(DeformedMap(2.0, {0.5}), 0.0);
    CHECK(j0.d1 == doctest::Approx(2.0 * std::log(0.5) / -0.5).epsilon(1e-14));
    CHECK(j0.d1 == doctest::Approx(2.772589).epsilon(1e-6));

    const double r3 = 2.0 / std::log(3.0);
    CHECK(jet(DeformedMap(r3, {3.0}), 0.0).d3 == doctest::Approx(-8.0).epsilon(1e-12));

    CHECK(jet(DeformedMap(4.0), 0.3).d1 == doctest::Approx(1.6).epsilon(1e-15));
}

TEST_CASE("turning point is non-flat with the directly derived second derivative")
{
    for (double q : {0.05, 0.5, 2.0, 12.5}) {
        for (double r : {1.0, 3.2, 4.0}) {
            const auto j = jet(DeformedMap(r, {q}), 0.5);
            CHECK(j.d1 == 0.0);
            const double expected = 2.0 * r * std::pow(q, r / 4.0) * std::log(q) / (1.0 - q);
            CHECK(j.d2 == doctest::Approx(expected).epsilon(1e-13));
            CHECK(j.d2 < 0.0);
        }
    }
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ur(0.1, 4.0);
    for (int i = 0; i < 200; ++i) {
        auto chain = random_chain(rng, 5);
        const auto j = jet(DeformedMap(ur(rng), chain), 0.5);
        CHECK(j.d1 == 0.0);
        CHECK(j.d2 != 0.0);
    }
}

TEST_CASE("jet matches finite differences of the long double oracle")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(0.5, 4.0);
    std::uniform_real_distribution<double> ux(0.01, 0.99);
    for (int i = 0; i < 100; ++i) {
        const auto chain = random_chain(rng, 5);
        const double r = ur(rng);
        const double x = ux(rng);
        const auto j = jet(DeformedMap(r, chain), x);
        const double fd1 = static_cast<double>(oracle::central_d1(r, chain, x));
        const double fd2 = static_cast<double>(oracle::central_d2(r, chain, x));
        CHECK(std::abs(j.value - static_cast<double>(oracle::map(r, chain, x))) <= 1e-13);
        CHECK(std::abs(j.d1 - fd1) <= 1e-5 * std::max(std::abs(fd1), 1e-6));
        CHECK(std::abs(j.d2 - fd2) <= 1e-3 * std::max(std::abs(fd2), 1e-4));
    }
}

TEST_CASE("third derivative matches finite differences")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ur(0.5, 4.0);
    std::uniform_real_distribution<double> ux(0.05, 0.95);
    for (int i = 0; i < 50; ++i) {
        const auto chain = random_chain(rng, 3);
        const double r = ur(rng);
        const double x = ux(rng);
        const double fd3 = static_cast<double>(oracle::central_d3(r, chain, x));
        const double d3 = jet(DeformedMap(r, chain), x).d3;
        CHECK(std::abs(d3 - fd3) <= 1e-2 * std::max(std::abs(fd3), 1.0));
    }
}

TEST_CASE("schwarzian examples")
{
    CHECK(schwarzian(DeformedMap(3.3), 0.25) == doctest::Approx(-24.0).epsilon(1e-15));
    CHECK(schwarzian(DeformedMap(2.0, {std::exp(1.0)}), 0.0) == doctest::Approx(-8.0).epsilon(1e-14));
    CHECK(schwarzian(DeformedMap(3.3, {1.0}), 0.1) == schwarzian(DeformedMap(3.3), 0.1));
    CHECK_THROWS_AS(schwarzian(DeformedMap(3.0, {2.0}), 0.5), SingularityError);

    const double q = 0.3, r = 3.1, x = 0.2;
    const double t = 1.0 - 2.0 * x;
    const double closed = -std::pow(r * t, 2) * std::pow(std::log(q), 2) / 2.0 - 6.0 / (t * t);
    CHECK(schwarzian(DeformedMap(r, {q}), x) == doctest::Approx(closed).epsilon(1e-13));
}

TEST_CASE("schwarzian composition rule agrees with the derivative definition")
{
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> ur(0.5, 4.0);
    std::uniform_real_distribution<double> ux(0.01, 0.99);
    for (int i = 0; i < 500; ++i) {
        const DeformedMap m(ur(rng), random_chain(rng, 4));
        const double x = ux(rng);
        if (std::abs(x - 0.5) < 1e-3) {
            continue;
        }
        const auto j = jet(m, x);
        const double direct = j.d3 / j.d1 - 1.5 * (j.d2 / j.d1) * (j.d2 / j.d1);
        const double s = schwarzian(m, x);
        CHECK(s < 0.0);
        CHECK(s == doctest::Approx(direct).epsilon(1e-7));
    }
}

TEST_CASE("critical point of the difference of two deformations")
{
    auto dF = [](double q1, double q2, double x) {
        const oracle::ld h = 1e-6L;
        return static_cast<double>((oracle::phi(q1, x + h) - oracle::phi(q1, x - h) - oracle::phi(q2, x + h) +
                                    oracle::phi(q2, x - h)) /
                                   (2.0L * h));
    };
    for (auto [q1, q2] : {std::pair{0.25, 4.0}, std::pair{0.1, 0.5}, std::pair{2.0, 9.0}, std::pair{0.3, 5.0}}) {
        const double x = critical_point_of_difference(q1, q2);
        CHECK(x > 0.0);
        CHECK(x < 1.0);
        // analytic derivative of the difference vanishes
        const double a = Deformation(q1).d1(x) - Deformation(q2).d1(x);
        CHECK(std::abs(a) <= 1e-10);
        CHECK(std::abs(dF(q1, q2, x)) <= 1e-9);
    }
    // phi_{1/q}(x) = 1 - phi_q(1 - x), so q and 1/q give a difference symmetric about 1/2
    CHECK(critical_point_of_difference(0.25, 4.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(critical_point_of_difference(2.0, 2.0), DomainError);
    CHECK_THROWS_AS(critical_point_of_difference(1.0, 2.0), DomainError);
}

TEST_CASE("ordering of deformations around the identity")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> below(std::log(0.01), 0.0);
    std::uniform_real_distribution<double> above(0.0, std::log(100.0));
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    std::uniform_real_distribution<double> ur(0.1, 4.0);
    for (int i = 0; i < 2000; ++i) {
        double q1 = std::exp(below(rng)), q2 = std::exp(below(rng));
        double q3 = std::exp(above(rng)), q4 = std::exp(above(rng));
        if (q1 > q2) std::swap(q1, q2);
        if (q3 > q4) std::swap(q3, q4);
        const double x = ux(rng);
        if (x == 0.0 || q1 == q2 || q3 == q4) {
            continue;
        }
        CHECK(eval_phi(q1, x) > eval_phi(q2, x));
        CHECK(eval_phi(q2, x) > x);
        CHECK(x > eval_phi(q3, x));
        CHECK(eval_phi(q3, x) > eval_phi(q4, x));
    }
}
