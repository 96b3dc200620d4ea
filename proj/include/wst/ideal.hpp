#pragma once

// Closed-form physics of the all-to-all exchange Hamiltonian restricted to
// the one-hot subspace, plus a dense full-space oracle.
//
// Basis convention: the one-hot label u_i (i = 1..n) is the computational
// basis integer 2^(i-1), i.e. the state with qubit n+1-i excited. Qubit 1 is
// the most significant of the n static bits.

#include "wst/types.hpp"

namespace wst::ideal {

/// Time-evolution amplitudes for a single one-hot excitation: `a` stays on
/// the initially excited label, `b` goes to each of the other n-1 labels.
/// The constant diagonal term of the one-hot Hamiltonian is dropped, so
/// these match the full-space evolution only up to a global phase.
struct EvolutionCoeffs {
    Complex a;
    Complex b;
    int n;
    double J;
    double t;
};

/// A q -> n W-state jump: stopping time, branch amplitudes at t_w, and the
/// relative phase theta = arg(c/d) to be corrected afterwards.
struct JumpSpec {
    int q;
    int n;
    double J;
    double t_w;
    Complex c;  // amplitude on each of the first-q branch labels
    Complex d;  // amplitude on each of the remaining n-q labels
    double theta;
};

enum class Branch { FirstQ, LastNQ };

struct PhaseFix {
    Branch branch;
    double phi;  // Rz angle per target qubit, in (-pi, pi]
};

/// One-hot block of H = J sum_{i<j} sigma_i.sigma_j: diagonal
/// J(n-1)(n-4)/2, off-diagonal 2J. Real symmetric, n x n.
RealMatrix onehot_hamiltonian(int n, double J);

/// Analytic (a, b) at time t for n >= 2.
EvolutionCoeffs evolve_coeffs(int n, double J, double t);

/// Evolve an arbitrary one-hot amplitude vector by exp(-iHt) with the
/// diagonal term dropped (same convention as evolve_coeffs).
Vector evolve_onehot(const Vector& psi, double J, double t);

/// Smallest positive stopping time with sin^2(J n t_w) = n/(4q) and the
/// resulting branch amplitudes. branch > 0 selects later solutions.
/// Throws jump_infeasible when n > 4q.
JumpSpec plan_jump(int q, int n, double J, int branch = 0);

/// Uniform one-hot amplitudes 1/sqrt(n).
RealVector w_state_vector(int n);

/// Rz(phi) = exp(-i sigma_z phi/2) on one qubit of a one-hot amplitude
/// vector; qubit is 1-based, qubit 1 = MSB.
void apply_rz_onehot(Vector& psi, int qubit, double phi);

/// Same rotation on a full 2^n state vector.
void apply_rz_full(Vector& psi, int n, int qubit, double phi);

/// Rotation angle that cancels the jump's relative phase: applying Rz(phi)
/// to every qubit of the chosen branch shifts that branch's phase by -theta
/// (FirstQ) relative to the other branch.
PhaseFix correct_phase(const JumpSpec& jump, Branch branch = Branch::FirstQ);

/// <psi|H|psi> over the one-hot block with the diagonal shift excluded.
/// Throws invalid_state if |psi| deviates from 1 by more than 1e-9.
double energy_expectation(const Vector& onehot_psi, double J);

/// Full Hamiltonian of Eq-2 form on 2^n dimensions, diagonal term included.
RealMatrix full_hamiltonian(int n, double J);

/// exp(-iHt)|psi> by dense eigendecomposition of the full Hamiltonian.
/// Oracle-scale only (n <= 12).
Vector brute_force_evolve(int n, double J, double t, const Vector& full_psi);

}  // namespace wst::ideal
