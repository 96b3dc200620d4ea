#include "wst/fom.hpp"
#include "wst/scatter.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace wst;

namespace {

double fom_at(scatter::ChannelConfig cfg) {
    return fom::fom_value(fom::structure_report(scatter::total_reflection(cfg), cfg.n));
}

}  // namespace

TEST_CASE("structure_report: transparent channel and the reference operating point") {
    scatter::ChannelConfig off;
    off.Omega = 0.0;  // n = 3
    const auto idle = fom::structure_report(scatter::total_reflection(off), 3);
    CHECK(std::abs(idle.alpha) <= 1e-14);
    CHECK(std::abs(std::abs(idle.beta) - 1.0) <= 1e-12);
    for (double g : idle.gamma_norms) CHECK(g <= 1e-13);

    scatter::ChannelConfig reference;
    const auto rep = fom::structure_report(scatter::total_reflection(reference), 3);
    CHECK(rep.unitary_emulation_defect <= 1e-4);  // | |beta|^2 + 2|alpha|^2 - 1 |
    CHECK(rep.alpha_spread <= 1e-8);              // all-to-all symmetry of the one-hot block
    CHECK(rep.beta_spread <= 1e-8);
    CHECK(std::abs(rep.alpha) > 0.0);
    CHECK(rep.m1_frobenius > 0.0);

    CHECK_THROWS_AS(fom::structure_report(scatter::total_reflection(reference), 1),
                    std::invalid_argument);
}

TEST_CASE("fom_value: sentinel and pinned cases") {
    fom::StructureReport rep;
    rep.alpha = Complex(0.5, 0.0);
    rep.m1_frobenius = 0.5;
    CHECK(fom::fom_value(rep) == doctest::Approx(0.0).epsilon(1e-12));

    rep.alpha = 0.0;
    CHECK(std::isinf(fom::fom_value(rep)));

    scatter::ChannelConfig off;
    off.Omega = 0.0;
    CHECK(std::isinf(fom_at(off)));  // no transfer -> degenerate

    scatter::ChannelConfig reference;
    CHECK(std::isfinite(fom_at(reference)));  // nondegenerate at the operating point
}

TEST_CASE("fom is invariant under a simultaneous pi shift of kd and kd0") {
    for (double kd : {1.1, 2.0, pi}) {
        scatter::ChannelConfig a;
        a.kd = kd;
        a.kd0 = 0.4 + kd / 3.0;
        scatter::ChannelConfig b = a;
        b.kd += pi;
        b.kd0 += pi;
        CHECK(std::abs(fom_at(a) - fom_at(b)) <= 1e-9);
    }
}

TEST_CASE("param names round-trip") {
    for (auto p : {fom::Param::Kd, fom::Param::Kd0, fom::Param::Gamma, fom::Param::Omega})
        CHECK(fom::param_from_name(fom::param_name(p)) == p);
    CHECK_THROWS_AS(fom::param_from_name("kd1"), std::invalid_argument);
}

TEST_CASE("sweep: single cell equals the direct evaluation") {
    scatter::ChannelConfig base;
    const fom::Axis a1{fom::Param::Kd, pi, pi, 1};
    const fom::Axis a2{fom::Param::Kd0, pi / 2.0, pi / 2.0, 1};
    const auto sw = fom::sweep(base, a1, a2);
    REQUIRE(sw.samples.size() == 1);
    CHECK(sw.argmin == 0);
    CHECK(std::abs(sw.samples[0].fom - fom_at(base)) <= 1e-12);

    CHECK_THROWS_AS(fom::sweep(base, fom::Axis{fom::Param::Kd, 0.0, 1.0, 0}, a2),
                    std::invalid_argument);
}

TEST_CASE("sweep: degenerate-only grids have no argmin") {
    scatter::ChannelConfig off;
    off.Omega = 0.0;
    const auto sw = fom::sweep(off, {fom::Param::Kd, 1.0, 2.0, 2}, {fom::Param::Kd0, 1.0, 2.0, 2});
    for (const auto& s : sw.samples) CHECK(s.degenerate);
    CHECK(sw.argmin == -1);
}

TEST_CASE("sweep: deterministic ordering and concurrency agreement") {
    scatter::ChannelConfig base;
    const fom::Axis a1{fom::Param::Kd, 2.0, 4.0, 4};
    const fom::Axis a2{fom::Param::Kd0, 1.0, 2.0, 3};
    const auto serial = fom::sweep(base, a1, a2, 1);
    const auto parallel = fom::sweep(base, a1, a2, 4);
    REQUIRE(serial.samples.size() == 12);
    for (size_t i = 0; i < 12; ++i) {
        CHECK(serial.samples[i].kd == parallel.samples[i].kd);
        CHECK(serial.samples[i].kd0 == parallel.samples[i].kd0);
        CHECK(serial.samples[i].fom == parallel.samples[i].fom);
    }
    // row-major: axis1 outer
    CHECK(serial.samples[0].kd == serial.samples[2].kd);
    CHECK(serial.samples[0].kd0 != serial.samples[1].kd0);
}

TEST_CASE("sweep: perturbing (kd, kd0) by 1% destroys the (Gamma, Omega) minima region") {
    // qualitative sensitivity claim: no common good (Gamma, Omega) choices between
    // the exact and the perturbed operating point
    scatter::ChannelConfig a;  // (pi, pi/2)
    scatter::ChannelConfig b = a;
    b.kd *= 1.01;
    b.kd0 *= 1.01;
    const fom::Axis ag{fom::Param::Gamma, 100.0, 5000.0, 12};
    const fom::Axis ao{fom::Param::Omega, 1e-5, 1e-3, 12};
    const auto sa = fom::sweep(a, ag, ao);
    const auto sb = fom::sweep(b, ag, ao);
    REQUIRE(sa.argmin >= 0);
    REQUIRE(sb.argmin >= 0);
    const double good = sa.samples[sa.argmin].fom + 0.25;
    for (size_t i = 0; i < sa.samples.size(); ++i) {
        const bool good_a = !sa.samples[i].degenerate && sa.samples[i].fom <= good;
        const bool good_b = !sb.samples[i].degenerate && sb.samples[i].fom <= good;
        CHECK_FALSE((good_a && good_b));
    }
}
