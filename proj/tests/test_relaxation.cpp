#include "wr/errors.hpp"
#include "wr/fem_core.hpp"
#include "wr/relaxation.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace wr;

namespace {

const Material air{1.293 * 1005, 0.0243};
const Material water{999.7 * 4192.1, 0.58};
const Material steel{7836.0 * 443, 48.9};

BlockSystem left(const Material& m, double dx, int dim = 1) {
    return assemble_subdomain(SubdomainMesh::left_of_interface(dim, 1.0, dx), m);
}
BlockSystem right(const Material& m, double dx, int dim = 1) {
    return assemble_subdomain(SubdomainMesh::right_of_interface(dim, 1.0, dx), m);
}

std::vector<double> c_sweep() {
    std::vector<double> cs;
    for (int e = -8; e <= 8; ++e) cs.push_back(std::pow(10.0, e));
    return cs;
}

}  // namespace

TEST_CASE("hand-computed 1x1 Schur complement") {
    // dx = 0.5, alpha = lambda = 1, dt = 1: S = 13/6 - (23/12)^2 / (13/3) = 823/624
    const auto s = schur_direct(left({1.0, 1.0}, 0.5), 1.0, 1);
    REQUIRE(s.value.rows() == 1);
    CHECK(s.scalar() == doctest::Approx(823.0 / 624.0).epsilon(1e-14));
    CHECK(s.subdomain == 1);
    CHECK(s.dt == 1.0);
    // the mirrored subdomain gives the same value
    CHECK(schur_direct(right({1.0, 1.0}, 0.5), 1.0).scalar() == doctest::Approx(823.0 / 624.0).epsilon(1e-14));
    CHECK_THROWS_AS(schur_direct(left({1.0, 1.0}, 0.5), 0.0), ConfigError);
}

TEST_CASE("large dt approaches the stiffness-only Schur complement") {
    for (int dim : {1, 2}) {
        const auto sys = left(steel, 0.25, dim);
        const DenseMatrix aii(sys.a_ii), aig(sys.a_ig), agi(sys.a_gi), agg(sys.a_gg);
        const DenseMatrix oracle = agg - agi * aii.partialPivLu().solve(aig);
        const DenseMatrix s = schur_direct(sys, 1e12).value;
        CHECK((s - oracle).norm() <= 1e-6 * oracle.norm());
    }
}

TEST_CASE("doubling alpha and lambda doubles S") {
    const auto base = schur_direct(left(water, 0.1, 2), 3.0).value;
    const auto twice = schur_direct(left({2 * water.alpha, 2 * water.lambda}, 0.1, 2), 3.0).value;
    CHECK((twice - 2.0 * base).norm() <= 1e-12 * base.norm());
}

TEST_CASE("closed form agrees with the direct Schur complement") {
    const double dx = 1.0 / 50;
    const Index n = unit_interior_count(dx);
    CHECK(n == 49);
    for (const auto& m : {air, water, steel, Material{1.0, 1.0}}) {
        for (double dt : {1e-4, 1.0, 1e4}) {
            const double direct = schur_direct(left(m, dx), dt).scalar();
            const double closed = schur_closed_form_1d(m, dx, dt, n);
            CHECK(std::abs(closed - direct) <= 1e-10 * std::abs(direct));
        }
    }
}

TEST_CASE("closed form is symmetric in the subdomains and positive") {
    const double direct_1 = schur_direct(left({1.0, 1.0}, 0.02), 0.3).scalar();
    const double direct_2 = schur_direct(right({1.0, 1.0}, 0.02), 0.3).scalar();
    CHECK(direct_1 == doctest::Approx(direct_2).epsilon(1e-14));
    CHECK(schur_closed_form_1d({1.0, 1.0}, 0.02, 0.3, 49) == doctest::Approx(direct_2).epsilon(1e-10));
    const double dx = 0.02;
    for (const auto& m : {air, water, steel}) {
        for (double c : c_sweep()) CHECK(schur_closed_form_1d(m, dx, c * dx * dx, unit_interior_count(dx)) > 0.0);
    }
    CHECK_THROWS_AS(unit_interior_count(0.3), ConfigError);
}

TEST_CASE("theta_opt for equal materials") {
    CHECK(theta_opt_dnwr(2.5, 2.5) == 0.5);
    CHECK(theta_opt_nnwr(2.5, 2.5) == 0.25);
    const auto s = schur_direct(left({1.0, 1.0}, 0.1), 0.01);
    CHECK(theta_opt_dnwr(s, s) == 0.5);
    CHECK(theta_opt_1d(Algorithm::dnwr, water, water, 0.01, 5.0, 5.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("theta limits from the material table") {
    const auto aw = dnwr_limits(air, water);
    CHECK(aw.temporal == doctest::Approx(4190842.37 / (1299.465 + 4190842.37)).epsilon(1e-12));
    CHECK(aw.temporal == doctest::Approx(0.99969).epsilon(1e-5));
    const auto as = dnwr_limits(air, steel);
    CHECK(as.spatial == doctest::Approx(48.9 / 48.9243).epsilon(1e-12));
    CHECK(as.spatial == doctest::Approx(0.99950).epsilon(1e-5));
    const auto nn = nnwr_limits(air, steel);
    CHECK(nn.spatial == doctest::Approx(0.0243 * 48.9 / (48.9243 * 48.9243)).epsilon(1e-12));
    CHECK(nn.spatial == doctest::Approx(4.965e-4).epsilon(1e-3));
}

TEST_CASE("theta_opt approaches its limits at the ends of the c range") {
    const double dx = 0.01;
    for (const auto& [m1, m2] : {std::pair{air, steel}, std::pair{air, water}, std::pair{water, steel}}) {
        const auto d = dnwr_limits(m1, m2);
        const auto n = nnwr_limits(m1, m2);
        const double lo = 1e-8 * dx * dx;
        CHECK(theta_opt_1d(Algorithm::dnwr, m1, m2, dx, lo, lo) == doctest::Approx(d.temporal).epsilon(1e-3));
        CHECK(theta_opt_1d(Algorithm::nnwr, m1, m2, dx, lo, lo) == doctest::Approx(n.temporal).epsilon(1e-3));
    }
    // air-steel also reaches the spatial limit at c = 1e8
    const double hi = 1e8 * dx * dx;
    CHECK(std::abs(theta_opt_1d(Algorithm::dnwr, air, steel, dx, hi, hi) - dnwr_limits(air, steel).spatial) < 1e-3);
}

TEST_CASE("theta_opt stays between its limits over the c sweep") {
    const double dx = 0.01;
    auto between = [](double v, ThetaLimits lim) {
        const double lo = std::min(lim.temporal, lim.spatial), hi = std::max(lim.temporal, lim.spatial);
        return v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12);
    };
    for (const auto& [m1, m2] : {std::pair{air, steel}, std::pair{air, water}, std::pair{water, steel}}) {
        for (double c : c_sweep()) {
            const double dt = c * dx * dx;
            CHECK(between(theta_opt_1d(Algorithm::dnwr, m1, m2, dx, dt, dt), dnwr_limits(m1, m2)));
            const double nn = theta_opt_1d(Algorithm::nnwr, m1, m2, dx, dt, dt);
            CHECK(nn <= 0.25);
            // the NNWR value is a function of s1/s2 + s2/s1, which is bounded by
            // its limits unless s1/s2 crosses 1 (water-steel: alpha ratio 1.21,
            // lambda ratio 0.012)
            if (m1 != water) CHECK(between(nn, nnwr_limits(m1, m2)));
        }
    }
}

TEST_CASE("theta_opt minimizes the scalar iteration factor") {
    const double dx = 1.0 / 50;
    for (const auto& [m1, m2] : {std::pair{air, steel}, std::pair{air, water}, std::pair{water, steel}}) {
        for (double dt : {1e-2, 10.0, 1e4}) {
            const double s1 = schur_direct(left(m1, dx), dt).scalar();
            const double s2 = schur_direct(right(m2, dx), dt).scalar();
            const double best_d = std::abs(dnwr_iteration_factor(s1, s2, theta_opt_dnwr(s1, s2)));
            const double best_n = std::abs(nnwr_iteration_factor(s1, s2, theta_opt_nnwr(s1, s2)));
            CHECK(best_d <= 1e-12);
            CHECK(best_n <= 1e-12);
            for (int i = 1; i <= 200; ++i) {
                const double theta = i / 200.0;
                CHECK(best_d <= std::abs(dnwr_iteration_factor(s1, s2, theta)));
                CHECK(best_n <= std::abs(nnwr_iteration_factor(s1, s2, theta)));
            }
        }
    }
}

TEST_CASE("scaling both materials leaves theta_opt unchanged") {
    const double dx = 0.02;
    for (double f : {0.001, 3.0, 1e5}) {
        const Material a{air.alpha * f, air.lambda * f}, b{steel.alpha * f, steel.lambda * f};
        for (double dt : {1e-3, 1.0, 1e3}) {
            CHECK(theta_opt_1d(Algorithm::dnwr, a, b, dx, dt, dt) ==
                  doctest::Approx(theta_opt_1d(Algorithm::dnwr, air, steel, dx, dt, dt)).epsilon(1e-12));
            CHECK(theta_opt_1d(Algorithm::nnwr, a, b, dx, dt, dt) ==
                  doctest::Approx(theta_opt_1d(Algorithm::nnwr, air, steel, dx, dt, dt)).epsilon(1e-12));
        }
    }
}

TEST_CASE("spectral radius reduces to the scalar factor in 1D") {
    const auto s1 = schur_direct(left(air, 0.1), 5.0, 1);
    const auto s2 = schur_direct(right(water, 0.1), 5.0, 2);
    for (double theta : {0.1, 0.5, 0.9, 1.0}) {
        CHECK(iteration_spectral_radius(Algorithm::dnwr, s1, s2, theta) ==
              doctest::Approx(std::abs(dnwr_iteration_factor(s1.scalar(), s2.scalar(), theta))));
        CHECK(iteration_spectral_radius(Algorithm::nnwr, s1, s2, theta) ==
              doctest::Approx(std::abs(nnwr_iteration_factor(s1.scalar(), s2.scalar(), theta))));
        CHECK(iteration_factor(Algorithm::dnwr, 1.0, 2.0, theta) == dnwr_iteration_factor(1.0, 2.0, theta));
    }
    // equal Schur complements: Sigma = -I, so theta = 1/2 removes every mode
    const auto a = schur_direct(left({1.0, 1.0}, 0.25, 2), 0.1);
    REQUIRE(a.value.rows() == 3);
    CHECK(iteration_spectral_radius(Algorithm::dnwr, a, a, 0.5) <= 1e-12);
    CHECK(iteration_spectral_radius(Algorithm::nnwr, a, a, 0.25) <= 1e-12);
    CHECK(iteration_spectral_radius(Algorithm::dnwr, a, a, 1.0) == doctest::Approx(1.0));
    CHECK(iteration_spectral_radius(Algorithm::nnwr, a, a, 1.0) == doctest::Approx(3.0));
}

TEST_CASE("select_theta") {
    const double dx = 0.01;
    SUBCASE("fixed policy") {
        CHECK(select_theta(ThetaPolicy::fixed(0.3), 1.0, 2.0, dx, air, water, Algorithm::dnwr) == 0.3);
        CHECK(select_theta(ThetaPolicy::fixed(0.3), 1e3, 7.0, dx, steel, water, Algorithm::nnwr) == 0.3);
        CHECK_THROWS_AS(ThetaPolicy::fixed(0.0), ConfigError);
        CHECK_THROWS_AS(ThetaPolicy::fixed(1.01), ConfigError);
        CHECK_NOTHROW(ThetaPolicy::fixed(1.0));
    }
    SUBCASE("all rules agree for equal stepsizes") {
        const double ref = select_theta(ThetaPolicy::opt(DtRule::max), 0.5, 0.5, dx, air, water, Algorithm::dnwr);
        for (DtRule r : {DtRule::min, DtRule::avg, DtRule::mix})
            CHECK(select_theta(ThetaPolicy::opt(r), 0.5, 0.5, dx, air, water, Algorithm::dnwr) == ref);
        CHECK(select_theta(ThetaPolicy::adaptive_avg(), 0.5, 0.5, dx, air, water, Algorithm::dnwr) == ref);
    }
    SUBCASE("max rule evaluates both Schur complements at the larger step") {
        const double dt2 = 0.3, dt1 = 10 * dt2;
        const Index n = unit_interior_count(dx);
        const double s1 = schur_closed_form_1d(air, dx, dt1, n), s2 = schur_closed_form_1d(water, dx, dt1, n);
        CHECK(select_theta(ThetaPolicy::opt(DtRule::max), dt1, dt2, dx, air, water, Algorithm::dnwr) ==
              doctest::Approx(theta_opt_dnwr(s1, s2)).epsilon(1e-15));
        const double m1 = schur_closed_form_1d(air, dx, dt1, n), m2 = schur_closed_form_1d(water, dx, dt2, n);
        CHECK(select_theta(ThetaPolicy::opt(DtRule::mix), dt1, dt2, dx, air, water, Algorithm::dnwr) ==
              doctest::Approx(theta_opt_dnwr(m1, m2)).epsilon(1e-15));
        const double lo1 = schur_closed_form_1d(air, dx, dt2, n), lo2 = schur_closed_form_1d(water, dx, dt2, n);
        CHECK(select_theta(ThetaPolicy::opt(DtRule::min), dt1, dt2, dx, air, water, Algorithm::dnwr) ==
              doctest::Approx(theta_opt_dnwr(lo1, lo2)).epsilon(1e-15));
        const double avg = 0.5 * (dt1 + dt2);
        CHECK(select_theta(ThetaPolicy::opt(DtRule::avg), dt1, dt2, dx, air, water, Algorithm::dnwr) ==
              doctest::Approx(theta_opt_dnwr(schur_closed_form_1d(air, dx, avg, n),
                                             schur_closed_form_1d(water, dx, avg, n)))
                  .epsilon(1e-15));
    }
    SUBCASE("produced values lie in (0, 1]") {
        for (DtRule r : {DtRule::max, DtRule::min, DtRule::avg, DtRule::mix}) {
            for (double dt : {1e-6, 1.0, 1e6}) {
                const double t = select_theta(ThetaPolicy::opt(r), dt, 7 * dt, dx, water, steel, Algorithm::nnwr);
                CHECK(t > 0.0);
                CHECK(t <= 1.0);
            }
        }
    }
    SUBCASE("stepsizes must be positive") {
        CHECK_THROWS_AS(select_theta(ThetaPolicy::opt(), 0.0, 1.0, dx, air, water, Algorithm::dnwr), ConfigError);
    }
}
