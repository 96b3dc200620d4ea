#pragma once

// Figure-of-merit evaluation over the four-parameter channel space and
// structural classification of the reflection matrix.

#include "wst/scatter.hpp"
#include "wst/types.hpp"

#include <string>
#include <vector>

namespace wst::fom {

/// Structure of the extracted Kraus pair: the one-hot transfer amplitude
/// alpha and diagonal beta of M0 (means over their equivalence classes, with
/// the observed spread), the norms of the excitation-lowering blocks of M1
/// grouped by source excitation number, and the total M1 Frobenius norm.
struct StructureReport {
    Complex alpha;
    Complex beta;
    double alpha_spread = 0.0;  // max |entry - mean| over the class
    double beta_spread = 0.0;
    std::vector<double> gamma_norms;
    double m1_frobenius = 0.0;
    double unitary_emulation_defect = 0.0;  // | |beta|^2 + 2|alpha|^2 - 1 |
};

/// Classify a full-space R_B for |chi>-polarized injection.
StructureReport structure_report(const Matrix& R_B, int n, const Spinor& chi = Spinor(1.0, 0.0));

/// FOM_n = log(||M1||_F / |alpha|); +inf when alpha vanishes.
double fom_value(const StructureReport& report);

enum class Param { Kd, Kd0, Gamma, Omega };

Param param_from_name(const std::string& name);
std::string param_name(Param p);

struct Axis {
    Param param;
    double lo;
    double hi;
    int count;  // samples, endpoints excluded (open interval)
};

struct FomSample {
    double kd, kd0, Gamma, Omega;
    double fom;
    bool degenerate;  // resonance singularity or vanishing alpha
};

struct SweepResult {
    std::vector<FomSample> samples;  // row-major: axis1 outer, axis2 inner
    std::ptrdiff_t argmin = -1;      // index of the best non-degenerate sample
};

/// Evaluate the FOM on a 2-D grid over two of the four parameters, the
/// others fixed by `base`. Grid points are evaluated concurrently; output
/// order is deterministic.
SweepResult sweep(const scatter::ChannelConfig& base, const Axis& axis1, const Axis& axis2,
                  int threads = 0);

}  // namespace wst::fom
