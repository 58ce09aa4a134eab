// Acceptance checks, one PASS/FAIL line per criterion. Exits nonzero when any
// criterion fails.

#include "wr/adaptivity.hpp"
#include "wr/coupling.hpp"
#include "wr/errors.hpp"
#include "wr/harness/config.hpp"
#include "wr/harness/experiments.hpp"
#include "wr/harness/materials.hpp"
#include "wr/relaxation.hpp"
#include "wr/steppers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace wr;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
    if (!ok) o.pass = false;
    if (!ok || o.detail.size() < 400) o.detail += (o.detail.empty() ? "" : "; ") + what + (ok ? "" : " [x]");
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const std::vector<std::string> material_names{"air", "water", "steel"};
const std::vector<std::string> pairs{"air-water", "air-steel", "water-steel"};

ExperimentConfig rate_protocol(const std::string& pair) {
    ExperimentConfig c;
    c.set("materials.pair", pair);
    c.k_max = rate_k_max;
    c.tol = 1e-14;
    return c;
}

Outcome schur_oracle() {
    Outcome o;
    const double dx = 1.0 / 50;
    const Index n = unit_interior_count(dx);
    double worst = 0.0;
    for (const auto& name : material_names) {
        const Material& m = MaterialRegistry::get(name);
        const auto left = assemble_subdomain(SubdomainMesh::left_of_interface(1, 1.0, dx), m);
        const auto right = assemble_subdomain(SubdomainMesh::right_of_interface(1, 1.0, dx), m);
        for (double dt : {1e-4, 1.0, 1e4}) {
            const double closed = schur_closed_form_1d(m, dx, dt, n);
            for (const auto* sys : {&left, &right}) {
                const double direct = schur_direct(*sys, dt).scalar();
                worst = std::max(worst, std::abs(closed - direct) / std::abs(direct));
            }
        }
    }
    note(o, worst <= 1e-10, "max relative deviation " + num(worst) + " over 3 materials x 3 dt, N = " + std::to_string(n));
    return o;
}

Outcome theta_limits() {
    Outcome o;
    const double dx = 1.0 / 200;
    for (const auto& pair : pairs) {
        const auto [m1, m2] = MaterialRegistry::pair(pair);
        const ThetaLimits d = dnwr_limits(m1, m2);
        const ThetaLimits nn = nnwr_limits(m1, m2);
        auto at = [&, m1 = m1, m2 = m2](Algorithm a, double c) {
            const double dt = c * dx * dx;
            return theta_opt_1d(a, m1, m2, dx, dt, dt);
        };
        const double dev[4] = {std::abs(at(Algorithm::dnwr, 1e-8) - d.temporal), std::abs(at(Algorithm::dnwr, 1e8) - d.spatial),
                               std::abs(at(Algorithm::nnwr, 1e-8) - nn.temporal),
                               std::abs(at(Algorithm::nnwr, 1e8) - nn.spatial)};
        const char* label[4] = {"dnwr c=1e-8", "dnwr c=1e8", "nnwr c=1e-8", "nnwr c=1e8"};
        for (int i = 0; i < 4; ++i) note(o, dev[i] <= 1e-3, pair + " " + label[i] + " off by " + num(dev[i]));
        // how far out the spatial limit is actually reached
        const double far = std::abs(at(Algorithm::dnwr, 1e14) - d.spatial);
        o.detail += "; info " + pair + " dnwr c=1e14 off by " + num(far);
    }
    return o;
}

Outcome rate_law() {
    Outcome o;
    ExperimentConfig c = rate_protocol("air-steel");
    c.n = 100;
    const auto grid = theta_grid(20);
    const Table t = run_rate_vs_theta(c, grid);
    const auto observed = t.numbers("observed_rate");
    const auto theory = t.numbers("theoretical_rate");
    const double opt = std::stod(*t.find_meta("theta_opt"));

    double worst = 1.0;
    bool finite = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        finite = finite && std::isfinite(observed[i]) && observed[i] > 0.0;
        worst = std::max(worst, std::max(observed[i] / theory[i], theory[i] / observed[i]));
    }
    note(o, finite && worst <= 2.0, "worst observed/theoretical factor " + num(worst));

    std::size_t nearest = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid[i] - opt) < std::abs(grid[nearest] - opt)) nearest = i;
    }
    const auto best = static_cast<std::size_t>(std::min_element(observed.begin(), observed.end()) - observed.begin());
    note(o, best == nearest, "observed minimum at theta " + num(grid[best]) + ", nearest to theta_opt " + num(opt) + " is " + num(grid[nearest]));

    c.theta = ThetaPolicy::opt();
    const WRResult r = run_wr(c, build_problem(c));
    const double at_opt = observed_rate(r);
    note(o, at_opt <= 1e-3, "rate at theta_opt " + num(at_opt));
    return o;
}

Outcome order_reproduction() {
    Outcome o;
    const std::pair<int, int> configs[] = {{1, 1}, {1, 10}, {10, 1}};
    for (Scheme scheme : {Scheme::implicit_euler, Scheme::sdirk2}) {
        const bool ie = scheme == Scheme::implicit_euler;
        for (const auto& pair : pairs) {
            for (const auto& [c1, c2] : configs) {
                ExperimentConfig c;
                c.set("materials.pair", pair);
                c.tf = 1.0;
                c.tol = 1e-13;
                c.scheme = scheme;
                c.c1 = c1;
                c.c2 = c2;
                c.n = 20;
                const Table t = run_order_study(c, 20, 4, 8);
                const double slope = std::stod(*t.find_meta("slope"));
                const bool in_band = ie ? (slope >= 0.9 && slope <= 1.1) : (slope >= 1.8 && slope <= 2.2);
                const bool shrinks = t.number(t.size() - 1, "error") < t.number(0, "error");
                const std::string label =
                    std::string(ie ? "ie " : "sdirk2 ") + pair + " " + std::to_string(c1) + ":" + std::to_string(c2);
                note(o, in_band && shrinks, label + " slope " + num(slope));
                if (!(in_band && shrinks)) {
                    // same study with the coupling iterated well past the pinned tolerance
                    c.tol = 1e-18;
                    c.k_max = 8;
                    const Table tight = run_order_study(c, 20, 4, 8);
                    o.detail += "; info " + label + " at tol 1e-18 slope " + num(std::stod(*tight.find_meta("slope")));
                }
            }
        }
    }
    return o;
}

Outcome equal_materials() {
    Outcome o;
    ExperimentConfig c;
    c.custom_1 = Material{1.0, 1.0};
    c.custom_2 = Material{1.0, 1.0};
    c.k_max = 2;
    c.tol = 1e-300;
    const WRProblem p = build_problem(c);
    for (auto [algo, theta] : {std::pair{AlgorithmChoice::dnwr, 0.5}, std::pair{AlgorithmChoice::nnwr, 0.25}}) {
        ExperimentConfig e = c;
        e.algo = algo;
        e.theta = ThetaPolicy::fixed(theta);
        const WRResult r = run_wr(e, p);
        const bool two = r.update_norms.size() >= 2;
        const double second = two ? r.update_norms[1] : HUGE_VAL;
        note(o, two && second < 1e-10,
             std::string(algo == AlgorithmChoice::dnwr ? "dnwr" : "nnwr") + " second update " + num(second));
    }
    return o;
}

Outcome multirate_rule() {
    Outcome o;
    const auto cs = log_sweep(-2, 8);
    for (const std::string pair : {"air-water", "water-steel"}) {
        for (const auto& [c1, c2, label] : {std::tuple{1, 10, "coarse-fine"}, std::tuple{10, 1, "fine-coarse"}}) {
            ExperimentConfig c = rate_protocol(pair);
            c.c1 = c1;
            c.c2 = c2;
            const Table t = run_theta_rule_comparison(c, cs, {DtRule::max, DtRule::mix});
            int ok = 0;
            for (std::size_t i = 0; i < cs.size(); ++i) {
                if (t.number(i, "rate") <= t.number(cs.size() + i, "rate")) ++ok;
            }
            const double share = static_cast<double>(ok) / static_cast<double>(cs.size());
            note(o, share >= 0.9, pair + " " + label + " max <= mix at " + std::to_string(ok) + "/" + std::to_string(cs.size()));
        }
    }
    return o;
}

Outcome robustness_gap() {
    Outcome o;
    ExperimentConfig c = rate_protocol("air-steel");
    c.n = 100;
    const WRProblem p = build_problem(c);
    const double dnwr = observed_rate(run_wr(c, p));
    c.algo = AlgorithmChoice::nnwr;
    const double nnwr = observed_rate(run_wr(c, p));
    note(o, dnwr <= 0.1 * nnwr, "1D air-steel dnwr " + num(dnwr) + " vs nnwr " + num(nnwr));

    ExperimentConfig two = rate_protocol("water-steel");
    two.dim = 2;
    two.n = 100;
    two.algo = AlgorithmChoice::nnwr;
    const WRProblem q = build_problem(two);
    const WRResult nn = run_wr(two, q);
    const double nn_rate = observed_rate(nn);
    note(o, nn.diverged || nn_rate > 1.0, "2D water-steel nnwr rate " + num(nn_rate) + (nn.diverged ? " (guard hit)" : ""));

    two.algo = AlgorithmChoice::dnwr;
    two.k_max = default_k_max;
    two.tol = 1e-8;
    const WRResult dn = run_wr(two, q);
    note(o, dn.converged, "2D water-steel dnwr converged after " + std::to_string(dn.iterations) + " iterations");
    return o;
}

Outcome adaptive_proportionality() {
    Outcome o;
    ExperimentConfig c;
    c.set("materials.pair", "air-water");
    c.adaptive_tol = 1e-1;
    const Table t = run_adaptive_sweep(c, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}, 1e-8);
    const double slope = std::stod(*t.find_meta("slope"));
    std::ostringstream errs;
    for (std::size_t i = 0; i < t.size(); ++i) errs << (i ? " " : "") << num(t.number(i, "error"));
    note(o, slope >= 0.75 && slope <= 1.25, "slope " + num(slope) + ", errors " + errs.str());
    return o;
}

Outcome ratio_arithmetic() {
    Outcome o;
    const std::pair<std::string, std::pair<int, int>> expected[] = {
        {"air-water", {135, 1}}, {"air-steel", {1, 1}}, {"water-steel", {1, 101}}};
    for (const auto& [pair, ratio] : expected) {
        const auto [m1, m2] = MaterialRegistry::pair(pair);
        const auto got = cfl_step_ratio(m1, m2);
        note(o, got == ratio, pair + " " + std::to_string(got.first) + ":" + std::to_string(got.second));
    }
    return o;
}

Outcome formula_units() {
    Outcome o;
    const double tau = 1e-4;
    {
        ControllerState s{tau, 0.25, tau};
        note(o, pi_step(s, tau) == 0.25, "pi keeps dt");
        ControllerState d{tau, 0.25, tau};
        note(o, pi_step(d, tau / 8) == 0.5, "pi doubles");
        ControllerState h{tau, 1.0, 8 * tau};
        const double shrunk = pi_step(h, 8 * tau);
        note(o, shrunk == std::pow(0.125, 1.0 / 3.0) * std::pow(0.125, -1.0 / 6.0) &&
                    std::abs(shrunk - std::pow(8.0, -1.0 / 6.0)) <= 4e-16,
             "pi shrinks by 8^(-1/6)");
    }
    {
        const auto sys = assemble_subdomain(SubdomainMesh::left_of_interface(1, 1.0, 1.0 / 200),
                                            MaterialRegistry::get("air"));
        const Vector zero = Vector::Zero(sys.n_interior());
        note(o, initial_step(100.0, tau, sys, zero) == 100.0 * std::sqrt(tau) / 100.0, "initial step at u0 = 0");
        note(o, initial_step(100.0, 100 * tau, sys, zero) == 10.0 * initial_step(100.0, tau, sys, zero),
             "initial step sqrt scaling");
    }
    {
        const auto a = tolerance_split(1e-3);
        const auto b = tolerance_split(5.0);
        note(o, a.dirichlet == 2e-4 && a.neumann == 2e-4 && b.dirichlet == 1.0 && b.neumann == 1.0, "tolerance split");
    }
    {
        auto v = [](double x) { return Vector::Constant(1, x); };
        bool ok = true;
        for (double dt : {0.5, 0.25, 1.0}) {
            ok = ok && three_point_initial_derivative(v(0), v(dt), v(2 * dt), dt)[0] == 1.0;
            ok = ok && three_point_initial_derivative(v(0), v(dt * dt), v(4 * dt * dt), dt)[0] == 0.0;
            ok = ok && nonuniform_initial_derivative(v(0), v(dt), v(2 * dt), dt, dt)[0] == 1.0;
        }
        for (auto [d0, d1] : {std::pair{1.0, 3.0}, std::pair{0.25, 0.75}, std::pair{0.5, 0.5}}) {
            ok = ok && nonuniform_initial_derivative(v(0), v(d0 * d0), v((d0 + d1) * (d0 + d1)), d0, d1)[0] == 0.0;
        }
        const Vector u0 = v(3.0), u1 = v(5.0), u2 = v(-2.0);
        ok = ok && nonuniform_initial_derivative(u0, u1, u2, 0.5, 0.5)[0] == three_point_initial_derivative(u0, u1, u2, 0.5)[0];
        note(o, ok, "initial-derivative formulas");
    }
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"schur oracle equivalence", schur_oracle},
        {"theta_opt limits", theta_limits},
        {"1D rate law", rate_law},
        {"order reproduction", order_reproduction},
        {"equal-material exactness", equal_materials},
        {"multirate theta rule", multirate_rule},
        {"robustness gap", robustness_gap},
        {"adaptive proportionality", adaptive_proportionality},
        {"multirate ratio arithmetic", ratio_arithmetic},
        {"formula unit properties", formula_units},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
