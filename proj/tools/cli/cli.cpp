#include "cli.hpp"

#include "qdl/dynamics.hpp"
#include "qdl/entropy.hpp"
#include "qdl/errors.hpp"
#include "qdl/family.hpp"
#include "qdl/fixed_points.hpp"
#include "qdl/format.hpp"
#include "qdl/stability_regions.hpp"
#include "qdl/sweep.hpp"
#include "qdl/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

namespace qdl::cli {

namespace {

// --chain / --q / --r, shared by the single-map subcommands.
struct MapOptions {
    std::string chain;
    std::optional<double> q;
    double r = 0.0;

    void add_to(CLI::App& app)
    {
        auto* c = app.add_option("--chain", chain,
                                 "Deformation parameters in application order, comma separated "
                                 "(\"0.5,2\" applies phi_0.5 first). Empty: plain logistic map");
        auto* qo = app.add_option("--q", q, "Shorthand for a single deformation, same as --chain Q");
        c->excludes(qo);
        app.add_option("--r", r, "Logistic parameter in (0,4]")->required();
    }

    DeformedMap build() const
    {
        if (q) {
            return DeformedMap(r, {*q});
        }
        return DeformedMap(r, parse_real_list(chain));
    }
};

struct AxisOptions {
    std::string name;
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
    bool closed = false;

    void add_to(CLI::App& app, const std::string& help_range)
    {
        app.add_option("--" + name + "-from", from, "Lower end of the " + name + " axis (inclusive)")
            ->capture_default_str();
        app.add_option("--" + name + "-to", to, "Upper end of the " + name + " axis")->capture_default_str();
        app.add_option("--" + name + "-step", step, "Step of the " + name + " axis")->capture_default_str();
        app.add_flag("--" + name + "-closed,!--" + name + "-open", closed,
                     "Include the upper end. Default " + help_range);
    }

    Axis axis() const { return Axis{name, from, to, step, closed}; }
};

void write_line(std::ostream& os, const std::string& key, const std::string& value)
{
    os << key << ' ' << value << '\n';
}

std::string fixed12(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

std::string record_line(const FixedPointRecord& rec)
{
    return "location " + format_g6(rec.location) + " multiplier " + format_g6(rec.multiplier) + " stability " +
           std::string(to_string(rec.classification)) + (rec.gas ? " gas" : "");
}

// Writes through `emit` to --out when given, otherwise to standard output.
void emit_to(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& emit)
{
    if (path.empty() || path == "-") {
        emit(out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    emit(f);
    f.flush();
    if (!f) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

Bindings parse_bindings(const std::vector<std::string>& items)
{
    Bindings b;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw SpecError("expected NAME=VALUE, got '" + item + "'");
        }
        const auto vals = parse_real_list(item.substr(eq + 1));
        if (vals.size() != 1) {
            throw SpecError("expected a single value in '" + item + "'");
        }
        b[item.substr(0, eq)] = vals.front();
    }
    return b;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Deformed logistic maps: fixed points, topological entropy, Lyapunov exponents, "
                 "bifurcation diagrams and parameter sweeps",
                 "qdl"};
    app.set_version_flag("--version", std::string("qdl ") + kVersion);
    app.require_subcommand(1);
    std::function<void()> action;

    // eval
    MapOptions eval_map_opts;
    double eval_x = 0.0;
    auto* eval = app.add_subcommand("eval", "Map value, first two derivatives and Schwarzian derivative at x");
    eval_map_opts.add_to(*eval);
    eval->add_option("--x", eval_x, "Point in [0,1]")->required();
    eval->callback([&] {
        action = [&] {
            const DeformedMap m = eval_map_opts.build();
            const DerivativeBundle j = jet(m, eval_x);
            write_line(out, "value", format_g6(j.value));
            write_line(out, "d1", format_g6(j.d1));
            write_line(out, "d2", format_g6(j.d2));
            if (eval_x == kTurningPoint) {
                write_line(out, "schwarzian", "undefined");
            } else {
                write_line(out, "schwarzian", format_g6(schwarzian(m, eval_x)));
            }
        };
    });

    // fixed-points
    MapOptions fp_opts;
    auto* fp = app.add_subcommand("fixed-points", "Fixed points with stability, global attractor and scenario");
    fp_opts.add_to(*fp);
    fp->callback([&] {
        action = [&] {
            const DeformedMap m = fp_opts.build();
            const AttractorScenario sc = attractor_scenario(m);
            write_line(out, "zero", record_line(sc.zero));
            for (const auto& rec : sc.nonzero) {
                write_line(out, "fixed_point", record_line(rec));
            }
            const auto gas = gas_check(m);
            write_line(out, "gas", gas ? format_g6(gas->location) : "none");
            write_line(out, "scenario", std::string(to_string(sc.kind)));
            if (sc.x1_star) {
                write_line(out, "x1_star", format_g6(*sc.x1_star));
            }
        };
    });

    // constants
    auto* constants = app.add_subcommand(
        "constants", "q0 with r1(q0) = 4 and q1 with r1(q1) = r2(q1), where r1(q) = (q-1)/log q and "
                     "r2(q) = 4 log((1+q)/2)/log q");
    constants->callback([&] {
        action = [&] {
            const SpecialConstants c = solve_special_constants();
            write_line(out, "q0", fixed12(c.q0));
            write_line(out, "q1", fixed12(c.q1));
        };
    });

    // entropy
    MapOptions ent_opts;
    double ent_tol = kDefaultEntropyTolerance;
    std::size_t ent_len = kDefaultKneadingLength;
    auto* ent = app.add_subcommand("entropy", "Topological entropy by kneading comparison with tent maps");
    ent_opts.add_to(*ent);
    ent->add_option("--tol", ent_tol, "Target accuracy in entropy units (1e-4 is the usual published accuracy)")
        ->capture_default_str();
    ent->add_option("--max-len", ent_len, "Longest kneading prefix compared")->capture_default_str();
    ent->callback([&] {
        action = [&] {
            const EntropyResult res = entropy_bisection(ent_opts.build(), ent_tol, ent_len);
            write_line(out, "entropy", format_g6(res.value));
            write_line(out, "bracket", format_g6(res.bracket_lo) + " " + format_g6(res.bracket_hi));
            write_line(out, "status", std::string(to_string(res.status)));
        };
    });

    // lap-oracle
    MapOptions lap_opts;
    int lap_n = 18;
    auto* lap = app.add_subcommand("lap-oracle", "Lap number of the n-th iterate and log(c_n/c_{n-1})");
    lap_opts.add_to(*lap);
    lap->add_option("--n", lap_n, "Iterate, 4..25")->capture_default_str();
    lap->callback([&] {
        action = [&] {
            const DeformedMap m = lap_opts.build();
            const auto c = lap_counts(m, lap_n);
            write_line(out, "laps", std::to_string(c.back()));
            if (lap_n >= 4) {
                write_line(out, "growth_estimate", format_g6(entropy_lap_estimate(m, lap_n)));
            }
        };
    });

    // lyapunov
    MapOptions lyap_opts;
    std::size_t lyap_n = kDefaultLyapunovLength;
    auto* lyap = app.add_subcommand("lyapunov", "Lyapunov exponent along the orbit of the turning point");
    lyap_opts.add_to(*lyap);
    lyap->add_option("--n", lyap_n, "Orbit length (10000, the customary estimate length)")->capture_default_str();
    lyap->callback([&] {
        action = [&] { write_line(out, "lyapunov", format_g6(lyapunov_turning(lyap_opts.build(), lyap_n))); };
    });

    // bifurcation
    std::string bif_template = "q";
    std::string bif_param = "r";
    double bif_from = 0.0;
    double bif_to = 0.0;
    double bif_step = 0.0;
    double bif_x0 = kDefaultBifurcationStart;
    std::size_t bif_len = kDefaultOrbitLength;
    std::size_t bif_tail = kDefaultTailLength;
    std::vector<std::string> bif_set;
    std::string bif_out;
    unsigned bif_threads = 0;
    auto* bif = app.add_subcommand("bifurcation", "Orbit tails over a parameter range, as CSV param,iterate_index,x");
    bif->add_option("--chain-template", bif_template,
                    "Chain in application order; each entry is a number or a parameter name, "
                    "e.g. \"q2,q2,3\"")
        ->capture_default_str();
    bif->add_option("--param", bif_param, "Swept parameter (r or a name from the template)")->capture_default_str();
    bif->add_option("--from", bif_from, "First parameter value")->required();
    bif->add_option("--to", bif_to, "Last parameter value (included)")->required();
    bif->add_option("--step", bif_step, "Parameter step")->required();
    bif->add_option("--set", bif_set, "Fixed parameter NAME=VALUE, repeatable (e.g. --set r=3.5 --set q=12.5)");
    bif->add_option("--x0", bif_x0, "Initial point; 0.001 is the usual alternative for spotting coexisting "
                                     "attractors")
        ->capture_default_str();
    bif->add_option("--length", bif_len, "Orbit length")->capture_default_str();
    bif->add_option("--tail", bif_tail, "Iterates kept per parameter value (the last 100 of 10000 by default)")
        ->capture_default_str();
    bif->add_option("--out", bif_out, "Output file (standard output when omitted)");
    bif->add_option("--threads", bif_threads, "Worker threads, 0 for all cores; output does not depend on it")
        ->capture_default_str();
    bif->callback([&] {
        action = [&] {
            BifurcationSpec spec;
            spec.family = MapFamily::parse(bif_template, "r");
            spec.axis = Axis{bif_param, bif_from, bif_to, bif_step, true};
            spec.fixed = parse_bindings(bif_set);
            spec.x0 = bif_x0;
            spec.orbit_length = bif_len;
            spec.tail_length = bif_tail;
            const BifurcationDataset d = bifurcation_scan(spec, bif_threads);
            emit_to(bif_out, out, [&](std::ostream& os) { write_bifurcation_csv(d, os); });
        };
    });

    // sweep
    std::string sw_quantity = "entropy";
    std::string sw_pattern = "single";
    std::optional<double> sw_r;
    std::string sw_out;
    std::optional<double> sw_mask;
    unsigned sw_threads = 0;
    std::string sw_boundary_out;
    std::string sw_manifest;
    double sw_tol = kDefaultEntropyTolerance;
    std::size_t sw_len = kDefaultKneadingLength;
    std::size_t sw_lyap_n = kDefaultLyapunovLength;
    AxisOptions ax_r{"r", 3.0, 4.0, 0.01, true};
    AxisOptions ax_q{"q", 0.0, 100.0, 0.1, false};
    AxisOptions ax_q1{"q1", 0.0, 4.0, 0.1, false};
    AxisOptions ax_q2{"q2", 0.0, 4.0, 0.1, false};
    auto* sw = app.add_subcommand("sweep", "Evaluate a quantity on a parameter grid, as CSV axis1,axis2,value");
    sw->add_option("--quantity", sw_quantity, "entropy | lyapunov | lyapunov-mask | entropy-mask | stability")
        ->capture_default_str();
    sw->add_option("--pattern", sw_pattern,
                   "single | k2 | k3 | k5 (k copies of phi_q, grid over r and q) | q1q2 | q1q1q2 | q1q2q2 | "
                   "q1q2q1 (grid over q1 and q2 at fixed r; named outermost deformation first)")
        ->capture_default_str();
    ax_r.add_to(*sw, "on: r in [3,4] step 0.01");
    ax_q.add_to(*sw, "off: q in [0,100) step 0.1; non-positive points are skipped");
    ax_q1.add_to(*sw, "off: q1 in (0,4) step 0.1");
    ax_q2.add_to(*sw, "off: q2 in (0,4) step 0.1");
    sw->add_option("--r", sw_r, "Fixed r for the two-value patterns (default 3.56)");
    sw->add_option("--out", sw_out, "Output file (standard output when omitted)");
    sw->add_option("--mask-threshold", sw_mask, "Replace entropy or Lyapunov values by 1 above the threshold, "
                                                "0 otherwise");
    sw->add_option("--threads", sw_threads, "Worker threads, 0 for all cores; output does not depend on it")
        ->capture_default_str();
    sw->add_option("--boundary-out", sw_boundary_out,
                   "Also write samples of the curves Phi'(0) = 1 and Phi(1/2) = 1/2 (CSV curve,axis1,axis2)");
    sw->add_option("--manifest", sw_manifest, "Write a run manifest (spec, tolerances, version)");
    sw->add_option("--tol", sw_tol, "Entropy accuracy")->capture_default_str();
    sw->add_option("--max-len", sw_len, "Longest kneading prefix compared")->capture_default_str();
    sw->add_option("--n", sw_lyap_n, "Lyapunov orbit length")->capture_default_str();
    sw->callback([&] {
        action = [&] {
            SweepSpec spec;
            spec.pattern = parse_pattern(sw_pattern);
            spec.quantity = parse_quantity(sw_quantity);
            const bool two = is_two_value(spec.pattern);
            if (two) {
                spec.axis1 = ax_q1.axis();
                spec.axis2 = ax_q2.axis();
                spec.fixed_r = sw_r.value_or(kDefaultPatternR);
            } else {
                if (sw_r) {
                    throw SpecError("--r fixes r for two-value patterns only; use --r-from/--r-to/--r-step");
                }
                spec.axis1 = ax_r.axis();
                spec.axis2 = ax_q.axis();
            }
            spec.entropy_tol = sw_tol;
            spec.kneading_length = sw_len;
            spec.lyapunov_length = sw_lyap_n;
            if (sw_mask && spec.quantity != Quantity::ENTROPY && spec.quantity != Quantity::LYAPUNOV) {
                throw SpecError("--mask-threshold applies to entropy or lyapunov sweeps only");
            }

            SweepGrid g = run_sweep(spec, sw_threads);
            if (sw_mask) {
                g = threshold_mask(g, *sw_mask);
            }
            emit_to(sw_out, out, [&](std::ostream& os) { export_csv(g, os); });
            if (!sw_boundary_out.empty()) {
                const auto pts = stability_boundary(spec);
                emit_to(sw_boundary_out, out, [&](std::ostream& os) { write_boundary_csv(pts, os); });
            }
            if (!sw_manifest.empty()) {
                emit_to(sw_manifest, out, [&](std::ostream& os) {
                    write_manifest(g, os);
                    if (sw_mask) {
                        os << "mask_threshold=" << format_g17(*sw_mask) << '\n';
                    }
                });
            }
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (action) {
            action();
        }
        return kOk;
    } catch (const SpecError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const ResourceLimitError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kResourceLimit;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

} // namespace qdl::cli
