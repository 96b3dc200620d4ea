#pragma once

// Stage scheduling (q -> n jump sequences) and the end-to-end W_n pipeline
// over the ideal analytic backend or the spin-torque Kraus backend.
//
// The torque backend carries the register density matrix in the reduced
// {ground, one-hot} basis of dimension n+1.

#include "wst/ideal.hpp"
#include "wst/kraus.hpp"
#include "wst/scatter.hpp"
#include "wst/types.hpp"

#include <vector>

namespace wst::protocol {

enum class Strategy { MaxForward, MinBackward };

struct Stage {
    int q;
    int n;
    double t_w;      // ideal stopping time, 1/J units
    double theta;    // relative phase at t_w; NaN for a forced infeasible stage
    double phi;      // Rz correction per first-branch qubit
    bool feasible;
    double predicted_electrons = 0.0;  // filled in by the harness when J_eff is known
};

struct StagePlan {
    int n_final;
    Strategy strategy;
    std::vector<Stage> stages;
    int single_qubit_gates;  // initial bit flip plus per-stage corrections
};

/// MaxForward: 1 -> 4 -> 16 -> ... -> n_final. MinBackward: the reversed
/// chain q_k = ceil(n/4^k). Stage count is ceil(log4 n) either way.
StagePlan schedule(int n_final, Strategy strategy = Strategy::MinBackward, double J = 1.0);

/// Single-stage 1 -> n plan even when n > 4; used to reproduce the
/// degradation of single-excitation sharing past the analytic bound.
StagePlan forced_single_plan(int n, double J = 1.0);

struct IdealRunResult {
    Vector final_state;  // one-hot amplitudes, length n_final
    std::vector<double> stage_fidelities;
    double final_fidelity;
};

/// Exact pipeline: evolve_coeffs + correct_phase per stage.
IdealRunResult run_ideal(const StagePlan& plan, double J = 1.0);

/// W_n target in the reduced basis: zero on ground, 1/sqrt(n) on one-hots.
Vector reduced_w_target(int n);

/// W_q target embedded in an n-qubit register (excitation on qubits 1..q).
Vector reduced_w_embedded(int q, int n);

/// Embed a reduced q-register density matrix into an n-register, fresh
/// qubits in |0>.
Matrix embed_reduced(const Matrix& rho_q, int q, int n);

/// Tensor-embed a single-qubit z-channel Kraus pair (reduced 2x2, from an
/// n=1 ChannelConfig) onto one qubit of the reduced n-register.
kraus::KrausPair embed_single_qubit_channel(const kraus::KrausPair& k1, int n, int qubit);

struct TorqueOptions {
    kraus::RunOptions run;
    double prep_threshold = 0.999;
    bool collect_traces = false;
};

struct StageReport {
    int q, n;
    long electrons_entangle = 0;
    long electrons_phase = 0;
    double fidelity = 0.0;  // to W_n after correction
    double purity = 0.0;
    double theta_measured = 0.0;
    double diag_product_peak = 0.0;  // linear scale
};

struct PrepResult {
    Matrix rho;  // 2x2 single-qubit density matrix
    double fidelity;
    long electrons;
};

struct TorqueRunResult {
    Matrix rho;  // reduced (n_final+1) final state
    PrepResult prep;
    std::vector<StageReport> stages;
    std::vector<kraus::EvolutionTrace> traces;  // entangling traces, when collected
    double final_fidelity = 0.0;
    long total_electrons = 0;
};

/// Bit flip via the single-qubit channel with y-polarized injection,
/// stopped at maximal fidelity to |1>. Throws preparation_failure below
/// the threshold.
PrepResult prepare_excitation_torque(const scatter::ChannelConfig& channel,
                                     const kraus::RunOptions& options = {},
                                     double threshold = 0.999);

/// Ideal counterpart on a reduced register state: exact flip of qubit 1.
/// The input must be the ground state.
Vector prepare_excitation_ideal(const Vector& reduced_state);

/// One q -> n torque stage on a reduced seed: entangling evolution stopped
/// at the diagonal-product maximum, then per-qubit phase correction of the
/// first q qubits, each stopped at maximal fidelity to its intermediate
/// target.
struct StageRunResult {
    Matrix rho;
    StageReport report;
    kraus::EvolutionTrace entangle_trace;
};
StageRunResult run_stage(const Matrix& rho_seed, const Stage& stage,
                         const scatter::ChannelConfig& channel, const TorqueOptions& options = {});

/// Full pipeline: preparation, then every stage of the plan.
TorqueRunResult run_torque(const StagePlan& plan, const scatter::ChannelConfig& channel,
                           const TorqueOptions& options = {});

}  // namespace wst::protocol
