#include "wst/protocol.hpp"

#include <cmath>
#include <limits>

namespace wst::protocol {

namespace {

Stage make_stage(int q, int n, double J) {
    const auto jump = ideal::plan_jump(q, n, J);
    const auto fix = ideal::correct_phase(jump);
    return {q, n, jump.t_w, jump.theta, fix.phi, true, 0.0};
}

}  // namespace

StagePlan schedule(int n_final, Strategy strategy, double J) {
    if (n_final < 1) throw std::invalid_argument("schedule: n_final must be >= 1");
    StagePlan plan{n_final, strategy, {}, 1};
    std::vector<std::pair<int, int>> jumps;
    if (strategy == Strategy::MaxForward) {
        int q = 1;
        while (q < n_final) {
            const int next = std::min(4 * q, n_final);
            jumps.emplace_back(q, next);
            q = next;
        }
    } else {
        std::vector<int> chain{n_final};
        while (chain.back() > 1) chain.push_back((chain.back() + 3) / 4);
        for (size_t i = chain.size(); i-- > 1;) jumps.emplace_back(chain[i], chain[i - 1]);
    }
    for (const auto& [q, n] : jumps) {
        plan.stages.push_back(make_stage(q, n, J));
        plan.single_qubit_gates += q;
    }
    return plan;
}

StagePlan forced_single_plan(int n, double J) {
    if (n < 2) throw std::invalid_argument("forced_single_plan: n must be >= 2");
    StagePlan plan{n, Strategy::MaxForward, {}, 1 + 1};
    if (n <= 4) {
        plan.stages.push_back(make_stage(1, n, J));
    } else {
        plan.stages.push_back(
            {1, n, 0.0, std::numeric_limits<double>::quiet_NaN(), 0.0, false, 0.0});
    }
    return plan;
}

IdealRunResult run_ideal(const StagePlan& plan, double J) {
    IdealRunResult result;
    Vector psi = Vector::Ones(1);  // one-hot register of size 1: |1>
    for (const auto& stage : plan.stages) {
        if (!stage.feasible) throw jump_infeasible("run_ideal: infeasible stage in plan");
        Vector next = Vector::Zero(stage.n);
        next.tail(stage.q) = psi;  // qubits 1..q sit at the high one-hot labels
        next = ideal::evolve_onehot(next, J, stage.t_w);
        for (int qubit = 1; qubit <= stage.q; ++qubit)
            ideal::apply_rz_onehot(next, qubit, stage.phi);
        psi = std::move(next);
        result.stage_fidelities.push_back(
            std::abs((ideal::w_state_vector(stage.n).cast<Complex>().adjoint() * psi).value()));
    }
    result.final_fidelity = plan.stages.empty() ? 1.0 : result.stage_fidelities.back();
    result.final_state = std::move(psi);
    return result;
}

Vector reduced_w_target(int n) { return reduced_w_embedded(n, n); }

Vector reduced_w_embedded(int q, int n) {
    Vector t = Vector::Zero(n + 1);
    t.tail(q).setConstant(1.0 / std::sqrt(double(q)));
    return t;
}

Matrix embed_reduced(const Matrix& rho_q, int q, int n) {
    if (rho_q.rows() != q + 1) throw std::invalid_argument("embed_reduced: dimension mismatch");
    Matrix rho = Matrix::Zero(n + 1, n + 1);
    rho(0, 0) = rho_q(0, 0);
    rho.block(0, n - q + 1, 1, q) = rho_q.block(0, 1, 1, q);
    rho.block(n - q + 1, 0, q, 1) = rho_q.block(1, 0, q, 1);
    rho.block(n - q + 1, n - q + 1, q, q) = rho_q.block(1, 1, q, q);
    return rho;
}

kraus::KrausPair embed_single_qubit_channel(const kraus::KrausPair& k1, int n, int qubit) {
    if (k1.M0.rows() != 2) throw std::invalid_argument("embed_single_qubit_channel: need 2x2 pair");
    if (qubit < 1 || qubit > n) throw std::out_of_range("embed_single_qubit_channel: qubit index");
    const Complex m_ground = k1.M0(0, 0);
    const Complex m_excited = k1.M0(1, 1);
    const Complex mu = k1.M1(0, 1);
    const int idx = n + 1 - qubit;  // reduced coordinate of this qubit's one-hot label
    kraus::KrausPair out;
    out.provenance = k1.provenance;
    out.M0 = Matrix::Zero(n + 1, n + 1);
    out.M1 = Matrix::Zero(n + 1, n + 1);
    for (int c = 0; c <= n; ++c) out.M0(c, c) = c == idx ? m_excited : m_ground;
    out.M1(0, idx) = mu;
    return out;
}

PrepResult prepare_excitation_torque(const scatter::ChannelConfig& channel,
                                     const kraus::RunOptions& options, double threshold) {
    scatter::ChannelConfig cfg = channel;
    cfg.n = 1;
    cfg.injected_spin = Spinor(1.0, im) / std::sqrt(2.0);  // +y polarized
    const auto kraus_pair =
        kraus::extract_kraus(scatter::total_reflection(cfg), 1, cfg.injected_spin, cfg);

    Matrix rho0 = Matrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    kraus::StopCriterion crit;
    crit.kind = kraus::StopKind::FidelityMax;
    crit.target = Vector::Zero(2);
    crit.target[1] = 1.0;
    const auto run = kraus::run_until(std::move(rho0), kraus_pair,
                                      kraus::onehot_indices_full(1), crit, options);
    PrepResult prep{run.rho, run.peak_value, run.m_stop};
    if (prep.fidelity < threshold)
        throw preparation_failure("prepare_excitation: flip fidelity " +
                                  std::to_string(prep.fidelity) + " below " +
                                  std::to_string(threshold));
    return prep;
}

Vector prepare_excitation_ideal(const Vector& reduced_state) {
    const int n = int(reduced_state.size()) - 1;
    if (n < 1) throw std::invalid_argument("prepare_excitation_ideal: bad state dimension");
    if (std::abs(std::abs(reduced_state[0]) - 1.0) > 1e-12)
        throw invalid_state("prepare_excitation_ideal: register is not in the ground state");
    Vector out = Vector::Zero(n + 1);
    out[n] = reduced_state[0];  // qubit 1 <-> coordinate n
    return out;
}

namespace {

// Phase-correct one qubit: rotate its one-hot coherence to zero relative
// phase against the last-branch reference (coordinate 1), stopping at the
// fidelity maximum of the intermediate target. Returns electrons spent.
long correct_qubit(Matrix& rho, int n, int qubit, const kraus::KrausPair& k1,
                   const kraus::RzCalibration& cal, const TorqueOptions& options) {
    const int idx = n + 1 - qubit;
    const Complex coh = rho(idx, 1);
    const double theta = std::arg(coh);
    const double phi_e = cal.phi_per_electron;
    if (std::abs(coh) < 1e-15 || phi_e == 0.0) return 0;

    // Intermediate target: measured phases everywhere, this qubit aligned
    // with the reference.
    Vector target = Vector::Zero(n + 1);
    const double amp = 1.0 / std::sqrt(double(n));
    for (int c = 1; c <= n; ++c) {
        if (c == idx || c == 1)
            target[c] = amp;
        else
            target[c] = amp * std::exp(im * std::arg(rho(c, 1)));
    }

    // Electrons to alignment and, when the channel rotates the long way
    // round, to the antipodal fidelity dip that must be skipped.
    const double s = phi_e > 0.0 ? 1.0 : -1.0;
    auto forward = [&](double to) {
        double d = std::fmod(s * (to - theta), 2.0 * pi);
        if (d < 0.0) d += 2.0 * pi;
        return d / std::abs(phi_e);
    };
    const double m_align = forward(0.0);
    const double m_dip = forward(pi);
    kraus::RunOptions run_opts = options.run;
    run_opts.min_electrons = m_dip < m_align ? long(std::ceil(m_dip)) + 1 : 0;

    const auto channel = embed_single_qubit_channel(k1, n, qubit);
    kraus::StopCriterion crit;
    crit.kind = kraus::StopKind::FidelityMax;
    crit.target = std::move(target);
    auto run = kraus::run_until(std::move(rho), channel, kraus::onehot_indices_reduced(n), crit,
                                run_opts);
    rho = std::move(run.rho);
    return run.m_stop;
}

}  // namespace

StageRunResult run_stage(const Matrix& rho_seed, const Stage& stage,
                         const scatter::ChannelConfig& channel, const TorqueOptions& options) {
    const int n = stage.n;
    scatter::ChannelConfig cfg = channel;
    cfg.n = n;
    cfg.injected_spin = Spinor(1.0, 0.0);  // +z polarized entangling reservoir

    StageRunResult result;
    result.report.q = stage.q;
    result.report.n = n;

    // Entangling evolution in the reduced sector representation.
    const auto kraus_pair = kraus::extract_kraus_sector(scatter::total_reflection_sector(cfg), n, cfg);
    kraus::StopCriterion crit;
    crit.kind = kraus::StopKind::DiagProductMax;
    crit.target = reduced_w_target(n);  // tracked in the trace only
    auto run = kraus::run_until(rho_seed, kraus_pair, kraus::onehot_indices_reduced(n), crit,
                                options.run);
    result.report.electrons_entangle = run.m_stop;
    result.report.diag_product_peak = std::exp(run.peak_value);
    if (options.collect_traces) result.entangle_trace = std::move(run.trace);
    Matrix rho = std::move(run.rho);
    result.report.theta_measured = std::arg(rho(n, 1));  // qubit 1 vs qubit n reference

    // Per-qubit phase correction with the z-polarized single-qubit channel.
    scatter::ChannelConfig cfg1 = channel;
    cfg1.n = 1;
    cfg1.injected_spin = Spinor(1.0, 0.0);
    const auto k1 = kraus::extract_kraus_sector(scatter::total_reflection_sector(cfg1), 1, cfg1);
    const auto cal = kraus::calibrate_rz_per_electron(cfg1);
    for (int qubit = 1; qubit <= stage.q; ++qubit)
        result.report.electrons_phase += correct_qubit(rho, n, qubit, k1, cal, options);

    result.report.fidelity = kraus::fidelity(rho, reduced_w_target(n));
    result.report.purity = (rho * rho).trace().real();
    result.rho = std::move(rho);
    return result;
}

TorqueRunResult run_torque(const StagePlan& plan, const scatter::ChannelConfig& channel,
                           const TorqueOptions& options) {
    TorqueRunResult result;
    result.prep = prepare_excitation_torque(channel, options.run, options.prep_threshold);
    result.total_electrons = result.prep.electrons;

    // 2x2 prep state doubles as the reduced 1-qubit register state.
    Matrix rho = result.prep.rho;
    int current_n = 1;
    for (const auto& stage : plan.stages) {
        const auto seed = embed_reduced(rho, current_n, stage.n);
        auto staged = run_stage(seed, stage, channel, options);
        rho = std::move(staged.rho);
        current_n = stage.n;
        result.total_electrons +=
            staged.report.electrons_entangle + staged.report.electrons_phase;
        result.stages.push_back(staged.report);
        if (options.collect_traces) result.traces.push_back(std::move(staged.entangle_trace));
    }
    result.final_fidelity = plan.stages.empty()
                                ? result.prep.fidelity
                                : result.stages.back().fidelity;
    result.rho = std::move(rho);
    return result;
}

}  // namespace wst::protocol
