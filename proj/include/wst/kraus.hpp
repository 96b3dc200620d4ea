#pragma once

// Kraus-operator extraction from the reflection matrix and electron-by-
// electron density-matrix evolution, with stopping-point detection,
// effective-exchange fitting and electron-count prediction.
//
// Density matrices come in two representations:
//  - full: 2^n x 2^n over the static computational basis;
//  - reduced: (n+1) x (n+1) over {ground, u_1, ..., u_n}, valid whenever
//    the dynamics stays inside the 0/1-excitation sectors.
// The `onehot` index list passed around identifies the one-hot diagonal
// entries in whichever representation is in use.

#include "wst/scatter.hpp"
#include "wst/types.hpp"

#include <functional>
#include <vector>

namespace wst::kraus {

struct KrausPair {
    Matrix M0;
    Matrix M1;
    scatter::ChannelConfig provenance;
};

/// Max-norm of M0^dag M0 + M1^dag M1 - I.
double completeness_defect(const KrausPair& kraus);

/// Slice M_k = <k|R_B|chi> out of the full-space reflection matrix.
/// Throws extraction_inconsistency if the completeness defect exceeds 1e-8.
KrausPair extract_kraus(const Matrix& R_B, int n, const Spinor& chi,
                        const scatter::ChannelConfig& provenance = {});

/// Same extraction from the sector-blocked R_B, for |0>-polarized
/// injection; operators act on the reduced (n+1)-dim static space.
KrausPair extract_kraus_sector(const scatter::SectorReflection& R_B, int n,
                               const scatter::ChannelConfig& provenance = {});

/// One electron: rho -> M0 rho M0^dag + M1 rho M1^dag.
/// Throws stall_error-free diagnostics: trace drift beyond 1e-8 aborts.
Matrix step(const Matrix& rho, const KrausPair& kraus);

/// One-hot diagonal indices for the reduced representation (coordinates
/// 1..n) and for the full representation (integers 2^(i-1)).
std::vector<Eigen::Index> onehot_indices_reduced(int n);
std::vector<Eigen::Index> onehot_indices_full(int n);

struct TraceRecord {
    long m;
    RealVector diag;      // one-hot diagonals
    double log_product;   // sum of log(diag), -inf while any entry is 0
    double fidelity;      // NaN when no target is tracked
    double trace;
};

using EvolutionTrace = std::vector<TraceRecord>;

enum class StopKind { DiagProductMax, FidelityMax, ElectronBudget };

struct StopCriterion {
    StopKind kind = StopKind::DiagProductMax;
    Vector target;       // for FidelityMax (and optional trace fidelity)
    long budget = 0;     // for ElectronBudget
};

struct RunOptions {
    long max_electrons = 10'000'000;
    long min_electrons = 0;        // suppress stopping before this point
    long stall_window = 1000;      // steps without improvement before stalling
    long positivity_stride = 100;  // eigenvalue-floor check cadence
    long record_stride = 1;        // trace decimation for long runs
};

struct RunResult {
    Matrix rho;
    EvolutionTrace trace;
    long m_stop = 0;
    double peak_value = 0.0;  // tracked scalar at m_stop
};

/// Iterate `step` until the tracked scalar (diag product in log domain, or
/// fidelity to `target`) passes its first strict local maximum; the state at
/// that maximum is returned. A non-improving run stalls with stall_error.
RunResult run_until(Matrix rho0, const KrausPair& kraus,
                    const std::vector<Eigen::Index>& onehot, const StopCriterion& criterion,
                    const RunOptions& options = {});

/// F = sqrt(<psi|rho|psi>), clamped against eigenvalue noise.
double fidelity(const Matrix& rho, const Vector& target);

struct EffectiveExchange {
    double J_eff;     // radians per electron
    double residual;  // relative Frobenius misfit of the uniform model
    int n;
};

/// Fit H_eff = i log(M0_onehot) and read off the uniform exchange constant.
/// `onehot` selects the one-hot block of M0.
EffectiveExchange fit_effective_exchange(const Matrix& M0, const std::vector<Eigen::Index>& onehot,
                                         double unitarity_tol = 1e-6);

/// N = asin(sqrt(n/4q)) / (n J_eff), electrons per q -> n entangling stage.
double estimate_electrons(int n, int q, double J_eff);

struct RzCalibration {
    double phi_per_electron;  // arg(M0_11) - arg(M0_00)
    double leakage;           // 1 - min |M0 diagonal|
    bool reliable;
};

/// Rotation per electron of the single-qubit z-polarized channel.
RzCalibration calibrate_rz_per_electron(const scatter::ChannelConfig& config,
                                        double leakage_threshold = 1e-3);

/// Smallest eigenvalue of the Hermitian part of rho.
double min_eigenvalue(const Matrix& rho);

}  // namespace wst::kraus
