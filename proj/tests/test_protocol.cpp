#include "wst/protocol.hpp"

#include <doctest.h>

#include <cmath>

using namespace wst;

TEST_CASE("schedule: pinned plans") {
    const auto p3 = protocol::schedule(3);
    REQUIRE(p3.stages.size() == 1);
    CHECK(p3.stages[0].q == 1);
    CHECK(p3.stages[0].n == 3);
    CHECK(p3.single_qubit_gates == 2);  // initial flip + one correction

    const auto p10b = protocol::schedule(10, protocol::Strategy::MinBackward);
    REQUIRE(p10b.stages.size() == 2);
    CHECK(p10b.stages[0].q == 1);
    CHECK(p10b.stages[0].n == 3);
    CHECK(p10b.stages[1].q == 3);
    CHECK(p10b.stages[1].n == 10);

    const auto p10f = protocol::schedule(10, protocol::Strategy::MaxForward);
    REQUIRE(p10f.stages.size() == 2);
    CHECK(p10f.stages[0].n == 4);
    CHECK(p10f.stages[1].n == 10);

    CHECK(protocol::schedule(1).stages.empty());
    CHECK(protocol::schedule(1).single_qubit_gates == 1);
    CHECK_THROWS_AS(protocol::schedule(0), std::invalid_argument);
}

TEST_CASE("schedule: stage-count, feasibility and gate-count invariants") {
    for (int n = 1; n <= 64; ++n)
        for (auto strat : {protocol::Strategy::MaxForward, protocol::Strategy::MinBackward}) {
            const auto plan = protocol::schedule(n, strat);
            const int expected =
                n == 1 ? 0 : int(std::ceil(std::log(double(n)) / std::log(4.0) - 1e-12));
            CHECK(int(plan.stages.size()) == expected);
            CHECK(plan.single_qubit_gates <= 2 * n);
            int q_prev = 1;
            for (const auto& s : plan.stages) {
                CHECK(s.feasible);
                CHECK(s.q == q_prev);
                CHECK(s.n <= 4 * s.q);
                q_prev = s.n;
            }
            if (!plan.stages.empty()) CHECK(plan.stages.back().n == n);
        }
}

TEST_CASE("run_ideal: exact W states for every schedule") {
    CHECK(protocol::run_ideal(protocol::schedule(4)).final_fidelity >= 1.0 - 1e-12);
    CHECK(protocol::run_ideal(protocol::schedule(16, protocol::Strategy::MaxForward))
              .final_fidelity >= 1.0 - 1e-12);

    const auto single = protocol::run_ideal(protocol::schedule(1));
    CHECK(single.final_fidelity == doctest::Approx(1.0));
    CHECK(single.final_state.size() == 1);
    CHECK(std::abs(single.final_state[0]) == doctest::Approx(1.0));

    for (int n = 2; n <= 64; ++n)
        for (auto strat : {protocol::Strategy::MaxForward, protocol::Strategy::MinBackward})
            CHECK(protocol::run_ideal(protocol::schedule(n, strat)).final_fidelity >=
                  1.0 - 1e-10);

    CHECK_THROWS_AS(protocol::run_ideal(protocol::forced_single_plan(12)), jump_infeasible);
}

TEST_CASE("reduced-basis helpers") {
    const Vector w3 = protocol::reduced_w_target(3);
    CHECK(w3.size() == 4);
    CHECK(std::abs(w3[0]) == doctest::Approx(0.0));
    for (int i = 1; i <= 3; ++i)
        CHECK(std::abs(w3[i] - 1.0 / std::sqrt(3.0)) <= 1e-15);

    const Vector w24 = protocol::reduced_w_embedded(2, 4);
    CHECK(std::abs(w24[3] - 1.0 / std::sqrt(2.0)) <= 1e-15);  // qubits 1,2 at coords 4,3
    CHECK(std::abs(w24[4] - 1.0 / std::sqrt(2.0)) <= 1e-15);
    CHECK(std::abs(w24[1]) <= 1e-15);

    // embedding a reduced density matrix preserves its entries blockwise
    Vector v(3);
    v << Complex(0.5, 0.1), Complex(0.3, -0.4), Complex(0.2, 0.6);
    v.normalize();
    const Matrix rho2 = v * v.adjoint();
    const Matrix rho4 = protocol::embed_reduced(rho2, 2, 4);
    CHECK(std::abs(rho4(0, 0) - rho2(0, 0)) <= 1e-15);
    CHECK(std::abs(rho4(3, 4) - rho2(1, 2)) <= 1e-15);
    CHECK(std::abs(rho4(0, 3) - rho2(0, 1)) <= 1e-15);
    CHECK(std::abs(rho4(1, 1)) <= 1e-15);  // fresh qubits stay in |0>
    CHECK(std::abs(rho4.trace() - rho2.trace()) <= 1e-14);
    CHECK_THROWS_AS(protocol::embed_reduced(rho2, 3, 5), std::invalid_argument);

    // ideal preparation flips qubit 1 exactly
    Vector ground = Vector::Zero(4);
    ground[0] = 1.0;
    const Vector prepped = protocol::prepare_excitation_ideal(ground);
    CHECK(std::abs(prepped[3] - 1.0) <= 1e-15);
    CHECK_THROWS_AS(protocol::prepare_excitation_ideal(prepped), invalid_state);
}

TEST_CASE("embed_single_qubit_channel keeps completeness") {
    scatter::ChannelConfig c1;
    c1.n = 1;
    const auto k1 = kraus::extract_kraus_sector(scatter::total_reflection_sector(c1), 1, c1);
    for (int qubit = 1; qubit <= 4; ++qubit) {
        const auto kn = protocol::embed_single_qubit_channel(k1, 4, qubit);
        CHECK(kraus::completeness_defect(kn) <= 1e-10);
        CHECK(std::abs(kn.M1(0, 5 - qubit)) > 0.0);
    }
    CHECK_THROWS_AS(protocol::embed_single_qubit_channel(k1, 4, 5), std::out_of_range);
    kraus::KrausPair wrong;
    wrong.M0 = Matrix::Identity(3, 3);
    wrong.M1 = Matrix::Zero(3, 3);
    CHECK_THROWS_AS(protocol::embed_single_qubit_channel(wrong, 4, 1), std::invalid_argument);
}

TEST_CASE("prepare_excitation_torque: y-polarized flip") {
    scatter::ChannelConfig channel;
    const auto prep = protocol::prepare_excitation_torque(channel);
    CHECK(prep.fidelity >= 0.999);
    CHECK(prep.electrons > 1000);
    CHECK(prep.electrons < 10000);
    CHECK(std::abs(prep.rho.trace().real() - 1.0) <= 1e-10);

    CHECK_THROWS_AS(protocol::prepare_excitation_torque(channel, {}, 0.99999),
                    preparation_failure);
}

TEST_CASE("run_torque: W3 pipeline and bookkeeping") {
    scatter::ChannelConfig channel;
    protocol::TorqueOptions opts;
    opts.collect_traces = true;
    const auto run = protocol::run_torque(protocol::schedule(3), channel, opts);
    CHECK(run.final_fidelity >= 0.999);
    REQUIRE(run.stages.size() == 1);
    CHECK(run.total_electrons == run.prep.electrons + run.stages[0].electrons_entangle +
                                     run.stages[0].electrons_phase);
    CHECK(run.stages[0].purity <= 1.0 + 1e-10);
    CHECK(std::abs(run.rho.trace().real() - 1.0) <= 1e-10);
    REQUIRE(run.traces.size() == 1);
    CHECK(run.traces[0].size() > 100);
}

TEST_CASE("run_stage: W3-seeded jump agrees with the electron estimate") {
    scatter::ChannelConfig channel;
    const auto jump = ideal::plan_jump(3, 6, 1.0);
    const protocol::Stage stage{3, 6, jump.t_w, jump.theta, ideal::correct_phase(jump).phi,
                                true, 0.0};
    const Vector seed = protocol::reduced_w_embedded(3, 6);
    const auto run = protocol::run_stage(Matrix(seed * seed.adjoint()), stage, channel, {});
    CHECK(run.report.fidelity >= 0.999);

    scatter::ChannelConfig c6 = channel;
    c6.n = 6;
    const auto fit = kraus::fit_effective_exchange(
        kraus::extract_kraus_sector(scatter::total_reflection_sector(c6), 6, c6).M0,
        kraus::onehot_indices_reduced(6), 1e-3);
    const double predicted = kraus::estimate_electrons(6, 3, std::abs(fit.J_eff));
    CHECK(std::abs(run.report.electrons_entangle - predicted) <= 0.10 * predicted);
}
