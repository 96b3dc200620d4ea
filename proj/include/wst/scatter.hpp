#pragma once

// Spin-dependent scatterer / barrier construction and the reflection-matrix
// cascade, in the full 2^(n+1) space and in the 0/1-excitation sectors.
//
// Index convention in the (n+1)-qubit space: the flying qubit is the most
// significant bit (bit n); static qubit j (1-based, qubit 1 nearest the hard
// wall) is bit n-j. One-hot label u_i is therefore the integer 2^(i-1).

#include "wst/types.hpp"

#include <vector>

namespace wst::scatter {

/// The four dimensionless channel parameters plus register size and the
/// injected flying-spin state.
struct ChannelConfig {
    int n = 3;
    double kd = pi;
    double kd0 = pi / 2.0;
    double Gamma = 1000.0;
    double Omega = 1e-4;
    Spinor injected_spin = Spinor(1.0, 0.0);

    void validate() const;
};

/// Transmission/reflection pair of one scatterer or barrier; r = t - I by
/// construction.
struct ScatterElement {
    Matrix t;
    Matrix r;
};

/// Index maps between the 0/1-excitation sectors of the (n+1)-qubit space
/// and full-space integers. Sector-1 coordinate 0 is the flying-excited
/// state 2^n; coordinate i (1..n) is the static one-hot label u_i = 2^(i-1).
struct SectorBasis {
    int n;  // static qubit count

    int dim0() const { return 1; }
    int dim1() const { return n + 1; }

    long to_full(int coord) const { return coord == 0 ? (1L << n) : (1L << (coord - 1)); }
    int from_full(long state) const;
};

/// One scatterer restricted to the two sectors: a scalar on the
/// zero-excitation state and an (n+1)x(n+1) block on the one-excitation
/// sector.
struct SectorElement {
    Complex t0, r0;
    Matrix t1, r1;
};

/// Sector-blocked reflection matrix.
struct SectorReflection {
    Complex r0;
    Matrix r1;
};

/// Tensor-embedded sigma_i . sigma_j on `total` qubits (1-based indices,
/// qubit 1 = MSB). Hermitian with eigenvalues {1, -3}.
Matrix exchange_operator(int total, int i, int j);

/// Delta scatterer of static qubit j against the flying qubit:
/// t = [I + i Omega sigma_f.sigma_j]^-1, r = t - I. Full 2^(n+1) space.
ScatterElement qubit_scatterer(const ChannelConfig& config, int j);

/// Spin-independent barrier: t = I/(1 + i Gamma), r = t - I.
ScatterElement barrier(double Gamma, long dim);

/// Cascade recursion: r_hat = r + e^{2i phase} t (I - e^{2i phase} prev r)^-1 prev t.
/// Throws resonance_singularity when the inverted factor is numerically
/// singular.
Matrix cascade(const Matrix& prev_reflection, const ScatterElement& element, double phase);

/// Full-space overall reflection matrix: hard wall (-I), qubit 1 at phase
/// kd0, qubits 2..n at kd, partial barrier at kd0.
Matrix total_reflection(const ChannelConfig& config);

/// Sector-restricted versions of the building blocks.
SectorElement qubit_scatterer_sector(const ChannelConfig& config, int j);
SectorElement barrier_sector(double Gamma, int n);
SectorReflection cascade_sector(const SectorReflection& prev, const SectorElement& element,
                                double phase);

/// Same cascade executed entirely within the 0- and 1-excitation sectors.
SectorReflection total_reflection_sector(const ChannelConfig& config);

/// Total excitation number (popcount) of a full-space basis integer.
int excitations(long state);

}  // namespace wst::scatter
