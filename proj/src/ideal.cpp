#include "wst/ideal.hpp"

#include <Eigen/Eigenvalues>

namespace wst::ideal {

RealMatrix onehot_hamiltonian(int n, double J) {
    if (n < 1) throw std::invalid_argument("onehot_hamiltonian: n must be >= 1");
    RealMatrix h = RealMatrix::Constant(n, n, 2.0 * J);
    h.diagonal().setConstant(J * (n - 1) * (n - 4) / 2.0);
    return h;
}

EvolutionCoeffs evolve_coeffs(int n, double J, double t) {
    if (n < 2) throw std::invalid_argument("evolve_coeffs: n must be >= 2");
    const Complex outer = std::exp(-im * double((n - 2)) * J * t);
    const Complex b = -im * (2.0 / n) * std::sin(J * n * t) * outer;
    const Complex a = (std::exp(im * J * double(n) * t) - im * (2.0 / n) * std::sin(J * n * t)) * outer;
    return {a, b, n, J, t};
}

Vector evolve_onehot(const Vector& psi, double J, double t) {
    // Off-diagonal block 2J(ee^T - I) has the uniform vector at 2J(n-1)
    // and its complement at -2J; evolve spectrally.
    const auto n = psi.size();
    if (n == 1) return psi;
    const Complex s = psi.sum() / double(n);
    const Complex ph_sym = std::exp(-im * 2.0 * J * double(n - 1) * t);
    const Complex ph_rest = std::exp(im * 2.0 * J * t);
    Vector out = ph_rest * psi;
    out.array() += (ph_sym - ph_rest) * s;
    return out;
}

JumpSpec plan_jump(int q, int n, double J, int branch) {
    if (q < 1 || q > n) throw std::invalid_argument("plan_jump: need 1 <= q <= n");
    if (n > 4 * q)
        throw jump_infeasible("plan_jump: q=" + std::to_string(q) + " -> n=" + std::to_string(n) +
                              " violates n <= 4q (jump more than 4x is not allowed)");
    const double s = std::asin(std::sqrt(n / (4.0 * q)));
    // sin^2(Jnt) = n/4q solutions: s + m*pi and (pi - s) + m*pi, ascending.
    double arg;
    if (branch % 2 == 0)
        arg = s + (branch / 2) * pi;
    else
        arg = (pi - s) + (branch / 2) * pi;
    const double t_w = arg / (J * n);
    // closed-form coefficients; the expressions extend formally to n=1 (a=1),
    // where evolve_coeffs itself has nothing to evolve.
    Complex a, b;
    if (n >= 2) {
        const auto coeffs = evolve_coeffs(n, J, t_w);
        a = coeffs.a;
        b = coeffs.b;
    } else {
        a = 1.0;
        b = -im * 2.0 * std::sin(J * t_w) * std::exp(im * J * t_w);
    }
    const Complex c = (a + double(q - 1) * b) / std::sqrt(double(q));
    const Complex d = std::sqrt(double(q)) * b;
    if (std::abs(std::norm(d) - 1.0 / n) > 1e-12)
        throw invalid_state("plan_jump: |d|^2 deviates from 1/n");
    return {q, n, J, t_w, c, d, std::arg(c / d)};
}

RealVector w_state_vector(int n) {
    if (n < 1) throw std::invalid_argument("w_state_vector: n must be >= 1");
    return RealVector::Constant(n, 1.0 / std::sqrt(double(n)));
}

void apply_rz_onehot(Vector& psi, int qubit, double phi) {
    const int n = int(psi.size());
    if (qubit < 1 || qubit > n) throw std::out_of_range("apply_rz_onehot: qubit index");
    const Complex up = std::exp(im * phi / 2.0);    // qubit in |1>
    const Complex down = std::exp(-im * phi / 2.0); // qubit in |0>
    // u_i (0-based index i-1) has qubit n+1-i excited.
    for (int i = 1; i <= n; ++i) psi[i - 1] *= (n + 1 - i == qubit) ? up : down;
}

void apply_rz_full(Vector& psi, int n, int qubit, double phi) {
    if (qubit < 1 || qubit > n) throw std::out_of_range("apply_rz_full: qubit index");
    if (psi.size() != (Eigen::Index(1) << n)) throw std::invalid_argument("apply_rz_full: dimension");
    const Complex up = std::exp(im * phi / 2.0);
    const Complex down = std::exp(-im * phi / 2.0);
    const long bit = 1L << (n - qubit);
    for (Eigen::Index k = 0; k < psi.size(); ++k) psi[k] *= (k & bit) ? up : down;
}

PhaseFix correct_phase(const JumpSpec& jump, Branch branch) {
    // Rz(phi) on all q first-branch qubits gives that branch a net phase of
    // +phi relative to the other branch (the +phi/2 of the excited qubit
    // against the -phi/2 of the q-1 passive ones); on the last n-q qubits
    // the relative phase is -phi.
    const double phi = branch == Branch::FirstQ ? wrap_angle(-jump.theta) : wrap_angle(jump.theta);
    return {branch, phi};
}

double energy_expectation(const Vector& onehot_psi, double J) {
    const double norm = onehot_psi.norm();
    if (std::abs(norm - 1.0) > 1e-9)
        throw invalid_state("energy_expectation: state norm deviates from 1 by " +
                            std::to_string(std::abs(norm - 1.0)));
    // <psi| 2J(ee^T - I) |psi> = 2J(|sum|^2 - 1)
    const Complex s = onehot_psi.sum();
    return 2.0 * J * (std::norm(s) - 1.0);
}

RealMatrix full_hamiltonian(int n, double J) {
    if (n < 1 || n > 14) throw std::invalid_argument("full_hamiltonian: n out of oracle range");
    const long dim = 1L << n;
    RealMatrix h = RealMatrix::Zero(dim, dim);
    // sigma_i.sigma_j = 2 SWAP_ij - I
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const long bi = 1L << i, bj = 1L << j;
            for (long k = 0; k < dim; ++k) {
                const bool vi = k & bi, vj = k & bj;
                const long swapped = (vi == vj) ? k : (k ^ bi ^ bj);
                h(swapped, k) += 2.0 * J;
                h(k, k) -= J;
            }
        }
    }
    return h;
}

Vector brute_force_evolve(int n, double J, double t, const Vector& full_psi) {
    const long dim = 1L << n;
    if (full_psi.size() != dim) throw std::invalid_argument("brute_force_evolve: dimension mismatch");
    const RealMatrix h = full_hamiltonian(n, J);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
    const Vector phases =
        (-im * t * es.eigenvalues().cast<Complex>().array()).exp().matrix();
    const Vector coords = es.eigenvectors().transpose().cast<Complex>() * full_psi;
    return es.eigenvectors().cast<Complex>() * phases.cwiseProduct(coords);
}

}  // namespace wst::ideal
