#include "qdl/errors.hpp"
#include "qdl/fixed_points.hpp"
#include "qdl/grid.hpp"
#include "qdl/stability_regions.hpp"
#include "qdl/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

using namespace qdl;

namespace {

SweepSpec single(Quantity q, Axis r, Axis qa)
{
    SweepSpec s;
    s.pattern = Pattern::SINGLE;
    s.quantity = q;
    s.axis1 = std::move(r);
    s.axis2 = std::move(qa);
    return s;
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        out.push_back(line);
    }
    return out;
}

} // namespace

TEST_CASE("axis values")
{
    const auto q = Axis{"q", 0.0, 100.0, 0.1, false}.values();
    CHECK(q.size() == 999);
    CHECK(q.front() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(q.back() == doctest::Approx(99.9).epsilon(1e-15));

    CHECK(Axis{"r", 3.0, 4.0, 0.01, true}.values().size() == 101);
    CHECK(Axis{"r", 3.0, 4.0, 0.01, false}.values().size() == 100);
    CHECK(Axis{"r", 3.55, 3.57, 0.001, true}.values().size() == 21);
    CHECK(Axis{"q", 2.5, 9.0, 0.01, false}.values().size() == 650);
    CHECK(Axis{"q", 0.0, 1.0, 0.001, false}.values().size() == 999);
    CHECK(Axis{"q1", 0.0, 4.0, 0.1, false}.values().size() == 39);

    // values are min + i*step, not accumulated sums
    const auto v = Axis{"r", 3.0, 4.0, 0.01, true}.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(v[i] == 3.0 + static_cast<double>(i) * 0.01);
    }

    const Axis reversed{"r", 1.0, 0.0, 0.1};
    const Axis flat{"r", 0.0, 1.0, 0.0};
    const Axis undefined{"r", 0.0, NAN, 0.1};
    CHECK_THROWS_AS(reversed.validate(), SpecError);
    CHECK_THROWS_AS(flat.validate(), SpecError);
    CHECK_THROWS_AS(undefined.validate(), SpecError);
}

TEST_CASE("pattern families use outermost-first naming")
{
    SweepSpec s;
    s.pattern = Pattern::Q1Q2;
    s.fixed_r = 3.56;
    CHECK(map_for_cell(s, 0.3, 2.0).chain() == std::vector<double>{2.0, 0.3});
    s.pattern = Pattern::Q1Q1Q2;
    CHECK(map_for_cell(s, 0.3, 2.0).chain() == std::vector<double>{2.0, 0.3, 0.3});
    s.pattern = Pattern::Q1Q2Q2;
    CHECK(map_for_cell(s, 0.3, 2.0).chain() == std::vector<double>{2.0, 2.0, 0.3});
    s.pattern = Pattern::Q1Q2Q1;
    CHECK(map_for_cell(s, 0.3, 2.0).chain() == std::vector<double>{0.3, 2.0, 0.3});
    s.pattern = Pattern::K3;
    CHECK(map_for_cell(s, 3.7, 0.4).chain() == std::vector<double>{0.4, 0.4, 0.4});
    CHECK(map_for_cell(s, 3.7, 0.4).r() == 3.7);

    for (auto name : {"single", "k2", "k3", "k5", "q1q2", "q1q1q2", "q1q2q2", "q1q2q1"}) {
        CHECK(to_string(parse_pattern(name)) == name);
    }
    CHECK_THROWS_AS(parse_pattern("k4"), SpecError);
    CHECK_THROWS_AS(parse_quantity("chaos"), SpecError);
}

TEST_CASE("spec validation")
{
    auto s = single(Quantity::ENTROPY, Axis{"q", 3.0, 4.0, 0.1}, Axis{"r", 0.0, 1.0, 0.1});
    CHECK_THROWS_AS(run_sweep(s), SpecError);
    s = single(Quantity::ENTROPY, Axis{"r", 3.0, 4.0, -0.1}, Axis{"q", 0.0, 1.0, 0.1});
    CHECK_THROWS_AS(run_sweep(s), SpecError);
    s = single(Quantity::LYAPUNOV, Axis{"r", 3.0, 4.0, 0.1}, Axis{"q", 0.0, 1.0, 0.1});
    s.lyapunov_length = 10;
    CHECK_THROWS_AS(run_sweep(s), SpecError);
}

TEST_CASE("grid layout and standalone cell agreement")
{
    const auto s = single(Quantity::ENTROPY, Axis{"r", 3.5, 4.0, 0.1, true}, Axis{"q", 0.0, 3.0, 0.5, false});
    const auto g = run_sweep(s, 3);
    REQUIRE(g.rows() == 6);
    REQUIRE(g.cols() == 5);
    REQUIRE(g.cells.size() == 30);
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const double standalone = evaluate_cell(s, g.values1[i], g.values2[j]);
            const double v = g.cells[i * g.cols() + j];
            CHECK(std::memcmp(&standalone, &v, sizeof v) == 0);
        }
    }
}

TEST_CASE("entropy column at r = 4 is log 2")
{
    const auto g = run_sweep(
        single(Quantity::ENTROPY, Axis{"r", 3.9, 4.0, 0.1, true}, Axis{"q", 0.0, 100.0, 7.0, false}), 2);
    REQUIRE(g.values1.back() == 4.0);
    for (std::size_t j = 0; j < g.cols(); ++j) {
        CHECK(std::abs(g.at(g.rows() - 1, j) - std::log(2.0)) <= 2e-4);
    }
    const auto mask = threshold_mask(g, 0.5);
    CHECK(mask.spec.quantity == Quantity::ENTROPY_POSITIVE_MASK);
    for (std::size_t j = 0; j < g.cols(); ++j) {
        CHECK(mask.at(g.rows() - 1, j) == 1.0);
    }
}

TEST_CASE("small deformations create entropy below the accumulation point")
{
    const auto g = run_sweep(
        single(Quantity::ENTROPY, Axis{"r", 3.0, 3.57, 0.01, false}, Axis{"q", 0.0, 1.0, 0.01, false}), 0);
    int chaotic = 0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            chaotic += g.values1[i] < 3.5699 && g.at(i, j) > 0.0;
        }
    }
    CHECK(chaotic > 0);
}

TEST_CASE("two-value grids are not symmetric")
{
    SweepSpec s;
    s.pattern = Pattern::Q1Q2;
    s.quantity = Quantity::ENTROPY;
    s.fixed_r = 3.56;
    s.axis1 = Axis{"q1", 0.0, 4.0, 0.1, false};
    s.axis2 = Axis{"q2", 0.0, 4.0, 0.1, false};
    const auto g = run_sweep(s, 0);
    REQUIRE(g.rows() == g.cols());
    double worst = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            worst = std::max(worst, std::abs(g.at(i, j) - g.at(j, i)));
        }
    }
    CHECK(worst > 1e-3);
}

TEST_CASE("CSV export")
{
    SweepGrid g;
    g.spec = single(Quantity::LYAPUNOV, Axis{"r", 1.0, 2.0, 1.0, true}, Axis{"q", 1.0, 3.0, 1.0, false});
    g.values1 = {1.0, 2.0};
    g.values2 = {1.0, 2.0};
    g.cells = {0.1, -std::numeric_limits<double>::infinity(), kSweepSentinel, 1.0 / 3.0};
    std::ostringstream a, b;
    export_csv(g, a);
    export_csv(g, b);
    CHECK(a.str() == b.str());
    const auto lines = lines_of(a.str());
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "axis1,axis2,value");
    CHECK(lines[1] == "1,1,0.10000000000000001");
    CHECK(lines[2] == "1,2,-inf");
    CHECK(lines[3] == "2,1,-999");
    CHECK(lines[4] == "2,2,0.33333333333333331");
    CHECK(a.str().find('\r') == std::string::npos);
    CHECK_THROWS(export_csv(g, std::string("/nonexistent-dir/out.csv")));
}

TEST_CASE("threshold masks")
{
    SweepGrid g;
    g.spec = single(Quantity::LYAPUNOV, Axis{"r", 1.0, 2.0, 1.0, true}, Axis{"q", 1.0, 3.0, 1.0, false});
    g.values1 = {1.0, 2.0};
    g.values2 = {1.0, 2.0};
    g.cells = {-0.5, -std::numeric_limits<double>::infinity(), -1e-3, -2.0};
    for (double v : threshold_mask(g, 0.0).cells) {
        CHECK(v == 0.0);
    }
    g.cells = {0.2, kSweepSentinel, -1.0, 0.05};
    const auto m1 = threshold_mask(g, 0.0);
    CHECK(m1.cells == std::vector<double>{1.0, kSweepSentinel, 0.0, 1.0});
    CHECK(m1.spec.quantity == Quantity::LYAPUNOV_POSITIVE_MASK);
    const auto m2 = threshold_mask(g, 0.1);
    for (std::size_t k = 0; k < g.cells.size(); ++k) {
        CHECK(m2.cells[k] <= m1.cells[k]);
    }
    CHECK_THROWS_AS(threshold_mask(m1, 0.0), SpecError);
    g.spec.quantity = Quantity::STABILITY_CODE;
    CHECK_THROWS_AS(threshold_mask(g, 0.0), SpecError);
}

TEST_CASE("mask quantities match masking the raw grid")
{
    auto s = single(Quantity::LYAPUNOV, Axis{"r", 3.5, 4.0, 0.05, true}, Axis{"q", 0.0, 2.0, 0.4, false});
    const auto raw = run_sweep(s, 2);
    s.quantity = Quantity::LYAPUNOV_POSITIVE_MASK;
    CHECK(run_sweep(s, 2).cells == threshold_mask(raw, 0.0).cells);

    s.quantity = Quantity::ENTROPY;
    const auto ent = run_sweep(s, 2);
    s.quantity = Quantity::ENTROPY_POSITIVE_MASK;
    CHECK(run_sweep(s, 2).cells == threshold_mask(ent, 0.0).cells);

    // observable chaos implies topological chaos
    for (std::size_t k = 0; k < raw.cells.size(); ++k) {
        if (raw.cells[k] > 0.01) {
            CHECK(ent.cells[k] > 0.0);
        }
    }
}

TEST_CASE("failed cells become the sentinel")
{
    // r beyond 4 cannot be built; the sweep keeps going
    const auto g = run_sweep(
        single(Quantity::STABILITY_CODE, Axis{"r", 3.9, 4.2, 0.1, true}, Axis{"q", 0.0, 2.0, 1.0, false}), 2);
    REQUIRE(g.rows() == 4);
    for (std::size_t j = 0; j < g.cols(); ++j) {
        CHECK(g.at(0, j) != kSweepSentinel);
        CHECK(g.at(3, j) == kSweepSentinel);
    }
}

TEST_CASE("results do not depend on the number of threads")
{
    SweepSpec s;
    s.pattern = Pattern::Q1Q2Q1;
    s.quantity = Quantity::LYAPUNOV;
    s.axis1 = Axis{"q1", 0.0, 4.0, 0.4, false};
    s.axis2 = Axis{"q2", 0.0, 4.0, 0.4, false};
    std::ostringstream a, b, c;
    export_csv(run_sweep(s, 1), a);
    export_csv(run_sweep(s, 4), b);
    export_csv(run_sweep(s, 7), c);
    CHECK(a.str() == b.str());
    CHECK(a.str() == c.str());
}

TEST_CASE("manifest")
{
    const auto g = run_sweep(
        single(Quantity::STABILITY_CODE, Axis{"r", 3.0, 3.2, 0.1, true}, Axis{"q", 0.0, 1.0, 0.5, false}), 1);
    std::ostringstream os;
    write_manifest(g, os);
    const std::string m = os.str();
    CHECK(m.find("software=qdl ") != std::string::npos);
    CHECK(m.find("pattern=single\n") != std::string::npos);
    CHECK(m.find("quantity=stability\n") != std::string::npos);
    CHECK(m.find("axis1=r min=3 max=3.2000000000000002 step=0.10000000000000001 closed points=3\n") !=
          std::string::npos);
    CHECK(m.find("cells=3 failed=0\n") != std::string::npos);
}

TEST_CASE("stability regions: codes and boundary curves")
{
    const auto s = single(Quantity::STABILITY_CODE, Axis{"r", 0.5, 4.0, 0.25, true}, Axis{"q", 0.0, 5.0, 0.5, false});
    const auto regions = stability_region_sweep(s, 2);
    for (std::size_t i = 0; i < regions.grid.rows(); ++i) {
        for (std::size_t j = 0; j < regions.grid.cols(); ++j) {
            const double r = regions.grid.values1[i];
            const double q = regions.grid.values2[j];
            const double code = regions.grid.at(i, j);
            CHECK(code >= 0.0);
            CHECK(code <= 3.0);
            // 0 attracts exactly below the zero_multiplier_one curve
            if (std::abs(r - curve_r1(q)) > 1e-6) {
                CHECK((static_cast<int>(code) & 1) == (r < curve_r1(q) ? 1 : 0));
            }
        }
    }
    int r1_points = 0;
    int r2_points = 0;
    for (const auto& p : regions.boundary) {
        CHECK(p.axis1 >= 0.5);
        CHECK(p.axis1 <= 4.0);
        if (p.curve == "zero_multiplier_one") {
            ++r1_points;
            CHECK(p.axis1 == doctest::Approx(curve_r1(p.axis2)).epsilon(1e-12));
        } else {
            REQUIRE(p.curve == "critical_value_half");
            ++r2_points;
            CHECK(p.axis1 == doctest::Approx(curve_r2(p.axis2)).epsilon(1e-12));
        }
    }
    CHECK(r1_points == 9);
    CHECK(r2_points > 0);

    std::ostringstream os;
    write_boundary_csv(regions.boundary, os);
    CHECK(lines_of(os.str()).size() == regions.boundary.size() + 1);
}

TEST_CASE("stability boundary solved numerically matches the closed form")
{
    // the multiplier at 0 crosses 1 at every zero_multiplier_one sample
    SweepSpec s;
    s.pattern = Pattern::K2;
    s.quantity = Quantity::STABILITY_CODE;
    s.axis1 = Axis{"r", 0.5, 4.0, 0.05, true};
    s.axis2 = Axis{"q", 0.0, 3.0, 0.5, false};
    const auto pts = stability_boundary(s);
    int checked = 0;
    for (const auto& p : pts) {
        if (p.curve != "zero_multiplier_one") {
            continue;
        }
        const double below = multiplier_at_zero(map_for_cell(s, p.axis1 - 1e-8, p.axis2));
        const double above = multiplier_at_zero(map_for_cell(s, p.axis1 + 1e-8, p.axis2));
        CHECK(below < 1.0);
        CHECK(above > 1.0);
        ++checked;
    }
    CHECK(checked > 0);
}
