#include "wst/scatter.hpp"

#include <Eigen/LU>

#include <bit>

namespace wst::scatter {

void ChannelConfig::validate() const {
    if (n < 1) throw std::invalid_argument("ChannelConfig: n must be >= 1");
    if (Gamma <= 0.0) throw std::invalid_argument("ChannelConfig: Gamma must be > 0");
    if (std::abs(injected_spin.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("ChannelConfig: injected spin not normalized");
}

int SectorBasis::from_full(long state) const {
    if (state == (1L << n)) return 0;
    if (state > 0 && state < (1L << n) && (state & (state - 1)) == 0)
        return std::countr_zero(static_cast<unsigned long>(state)) + 1;
    throw std::invalid_argument("SectorBasis: state not in the one-excitation sector");
}

int excitations(long state) { return std::popcount(static_cast<unsigned long>(state)); }

Matrix exchange_operator(int total, int i, int j) {
    if (i == j || i < 1 || j < 1 || i > total || j > total)
        throw std::invalid_argument("exchange_operator: bad qubit indices");
    const long dim = 1L << total;
    const long bi = 1L << (total - i), bj = 1L << (total - j);
    // sigma_i.sigma_j = 2 SWAP_ij - I
    Matrix op = Matrix::Zero(dim, dim);
    for (long k = 0; k < dim; ++k) {
        const bool vi = k & bi, vj = k & bj;
        const long swapped = (vi == vj) ? k : (k ^ bi ^ bj);
        op(swapped, k) += 2.0;
        op(k, k) -= 1.0;
    }
    return op;
}

ScatterElement qubit_scatterer(const ChannelConfig& config, int j) {
    config.validate();
    if (j < 1 || j > config.n) throw std::invalid_argument("qubit_scatterer: qubit index");
    const long dim = 1L << (config.n + 1);
    // flying qubit is overall qubit 1; static qubit j is overall qubit j+1
    const Matrix exch = exchange_operator(config.n + 1, 1, j + 1);
    const Matrix lhs = Matrix::Identity(dim, dim) + im * config.Omega * exch;
    Eigen::PartialPivLU<Matrix> lu(lhs);
    if (lu.rcond() < 1e-14)
        throw resonance_singularity("qubit_scatterer: singular I + i*Omega*exchange");
    ScatterElement el;
    el.t = lu.inverse();
    el.r = el.t - Matrix::Identity(dim, dim);
    return el;
}

ScatterElement barrier(double Gamma, long dim) {
    if (dim < 1) throw std::invalid_argument("barrier: dim must be >= 1");
    ScatterElement el;
    el.t = Matrix::Identity(dim, dim) / Complex(1.0, Gamma);
    el.r = el.t - Matrix::Identity(dim, dim);
    return el;
}

namespace {

Matrix cascade_block(const Matrix& prev, const Matrix& t, const Matrix& r, double phase) {
    const long dim = prev.rows();
    const Complex ph = std::exp(2.0 * im * phase);
    const Matrix factor = Matrix::Identity(dim, dim) - ph * prev * r;
    Eigen::PartialPivLU<Matrix> lu(factor);
    if (lu.rcond() < 1e-14)
        throw resonance_singularity("cascade: singular (I - e^{2ikd} r_prev r) at phase " +
                                    std::to_string(phase));
    return r + ph * t * lu.solve(prev * t);
}

Complex cascade_scalar(Complex prev, Complex t, Complex r, double phase) {
    const Complex ph = std::exp(2.0 * im * phase);
    const Complex factor = 1.0 - ph * prev * r;
    if (std::abs(factor) < 1e-14)
        throw resonance_singularity("cascade: scalar resonance at phase " + std::to_string(phase));
    return r + ph * t * prev * t / factor;
}

}  // namespace

Matrix cascade(const Matrix& prev_reflection, const ScatterElement& element, double phase) {
    if (prev_reflection.rows() != element.t.rows())
        throw std::invalid_argument("cascade: dimension mismatch");
    return cascade_block(prev_reflection, element.t, element.r, phase);
}

Matrix total_reflection(const ChannelConfig& config) {
    config.validate();
    const long dim = 1L << (config.n + 1);
    Matrix r_hat = -Matrix::Identity(dim, dim);  // hard wall
    for (int j = 1; j <= config.n; ++j)
        r_hat = cascade(r_hat, qubit_scatterer(config, j), j == 1 ? config.kd0 : config.kd);
    return cascade(r_hat, barrier(config.Gamma, dim), config.kd0);
}

SectorElement qubit_scatterer_sector(const ChannelConfig& config, int j) {
    config.validate();
    if (j < 1 || j > config.n) throw std::invalid_argument("qubit_scatterer_sector: qubit index");
    const int n = config.n;
    const int d1 = n + 1;
    // sigma_f.sigma_j on the sectors: all-ground is an eigenstate at +1; in
    // the one-excitation sector it is 2P - I with P swapping the flying
    // excitation with static qubit j's (sector coordinate n+1-j).
    Matrix exch1 = -Matrix::Identity(d1, d1);
    const int cj = n + 1 - j;
    for (int c = 0; c < d1; ++c) {
        if (c == 0)
            exch1(cj, 0) += 2.0;
        else if (c == cj)
            exch1(0, cj) += 2.0;
        else
            exch1(c, c) += 2.0;
    }
    SectorElement el;
    el.t0 = 1.0 / (1.0 + im * config.Omega);  // exchange eigenvalue +1 on the ground sector
    el.r0 = el.t0 - 1.0;
    const Matrix lhs = Matrix::Identity(d1, d1) + im * config.Omega * exch1;
    Eigen::PartialPivLU<Matrix> lu(lhs);
    if (lu.rcond() < 1e-14)
        throw resonance_singularity("qubit_scatterer_sector: singular inversion");
    el.t1 = lu.inverse();
    el.r1 = el.t1 - Matrix::Identity(d1, d1);
    return el;
}

SectorElement barrier_sector(double Gamma, int n) {
    SectorElement el;
    el.t0 = 1.0 / Complex(1.0, Gamma);
    el.r0 = el.t0 - 1.0;
    el.t1 = Matrix::Identity(n + 1, n + 1) / Complex(1.0, Gamma);
    el.r1 = el.t1 - Matrix::Identity(n + 1, n + 1);
    return el;
}

SectorReflection cascade_sector(const SectorReflection& prev, const SectorElement& element,
                                double phase) {
    SectorReflection out;
    out.r0 = cascade_scalar(prev.r0, element.t0, element.r0, phase);
    out.r1 = cascade_block(prev.r1, element.t1, element.r1, phase);
    return out;
}

SectorReflection total_reflection_sector(const ChannelConfig& config) {
    config.validate();
    const int d1 = config.n + 1;
    SectorReflection r_hat{-1.0, -Matrix::Identity(d1, d1)};
    for (int j = 1; j <= config.n; ++j)
        r_hat = cascade_sector(r_hat, qubit_scatterer_sector(config, j),
                               j == 1 ? config.kd0 : config.kd);
    return cascade_sector(r_hat, barrier_sector(config.Gamma, config.n), config.kd0);
}

}  // namespace wst::scatter
