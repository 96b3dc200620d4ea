#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wst {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Spinor = Eigen::Vector2cd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr Complex im{0.0, 1.0};

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * pi);
    if (a <= -pi) a += 2.0 * pi;
    if (a > pi) a -= 2.0 * pi;
    return a;
}

// Error taxonomy. Everything that can go wrong during planning or
// simulation maps onto one of these; the CLI turns them into exit codes.

struct jump_infeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct resonance_singularity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct extraction_inconsistency : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct stall_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct branch_cut_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_state : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct preparation_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wst
