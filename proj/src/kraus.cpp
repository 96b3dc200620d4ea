#include "wst/kraus.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace wst::kraus {

namespace {
constexpr double neg_inf = -std::numeric_limits<double>::infinity();
}

double completeness_defect(const KrausPair& kraus) {
    const long dim = kraus.M0.cols();
    const Matrix sum = kraus.M0.adjoint() * kraus.M0 + kraus.M1.adjoint() * kraus.M1;
    return (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

KrausPair extract_kraus(const Matrix& R_B, int n, const Spinor& chi,
                        const scatter::ChannelConfig& provenance) {
    const long dim = 1L << n;
    if (R_B.rows() != 2 * dim) throw std::invalid_argument("extract_kraus: dimension mismatch");
    KrausPair kraus;
    kraus.provenance = provenance;
    kraus.M0 = chi[0] * R_B.topLeftCorner(dim, dim) + chi[1] * R_B.topRightCorner(dim, dim);
    kraus.M1 = chi[0] * R_B.bottomLeftCorner(dim, dim) + chi[1] * R_B.bottomRightCorner(dim, dim);
    const double defect = completeness_defect(kraus);
    if (defect > 1e-8)
        throw extraction_inconsistency("extract_kraus: completeness defect " +
                                       std::to_string(defect));
    return kraus;
}

KrausPair extract_kraus_sector(const scatter::SectorReflection& R_B, int n,
                               const scatter::ChannelConfig& provenance) {
    const int d = n + 1;
    if (R_B.r1.rows() != d) throw std::invalid_argument("extract_kraus_sector: dimension mismatch");
    KrausPair kraus;
    kraus.provenance = provenance;
    kraus.M0 = Matrix::Zero(d, d);
    kraus.M1 = Matrix::Zero(d, d);
    kraus.M0(0, 0) = R_B.r0;
    kraus.M0.bottomRightCorner(n, n) = R_B.r1.bottomRightCorner(n, n);
    kraus.M1.row(0).tail(n) = R_B.r1.row(0).tail(n);  // one-hot -> ground, flying flips up
    const double defect = completeness_defect(kraus);
    if (defect > 1e-8)
        throw extraction_inconsistency("extract_kraus_sector: completeness defect " +
                                       std::to_string(defect));
    return kraus;
}

Matrix step(const Matrix& rho, const KrausPair& kraus) {
    Matrix next = kraus.M0 * rho * kraus.M0.adjoint() + kraus.M1 * rho * kraus.M1.adjoint();
    const double drift = std::abs(next.trace().real() - rho.trace().real()) +
                         std::abs(next.trace().imag() - rho.trace().imag());
    if (drift > 1e-8)
        throw invalid_state("step: trace drift " + std::to_string(drift) + " exceeds 1e-8");
    return next;
}

std::vector<Eigen::Index> onehot_indices_reduced(int n) {
    std::vector<Eigen::Index> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i + 1;
    return idx;
}

std::vector<Eigen::Index> onehot_indices_full(int n) {
    std::vector<Eigen::Index> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = Eigen::Index(1) << i;
    return idx;
}

double fidelity(const Matrix& rho, const Vector& target) {
    if (rho.rows() != target.size()) throw std::invalid_argument("fidelity: dimension mismatch");
    double overlap = (target.adjoint() * rho * target).value().real();
    if (overlap < -1e-14) throw invalid_state("fidelity: overlap " + std::to_string(overlap));
    overlap = std::clamp(overlap, 0.0, 1.0);
    return std::sqrt(overlap);
}

double min_eigenvalue(const Matrix& rho) {
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

namespace {

struct Tracker {
    const std::vector<Eigen::Index>& onehot;
    const StopCriterion& criterion;

    TraceRecord record(long m, const Matrix& rho) const {
        TraceRecord rec;
        rec.m = m;
        rec.diag.resize(Eigen::Index(onehot.size()));
        rec.log_product = 0.0;
        for (size_t i = 0; i < onehot.size(); ++i) {
            const double d = rho(onehot[i], onehot[i]).real();
            rec.diag[Eigen::Index(i)] = d;
            rec.log_product += d > 0.0 ? std::log(d) : neg_inf;
        }
        rec.trace = rho.trace().real();
        rec.fidelity = criterion.target.size() > 0 ? fidelity(rho, criterion.target)
                                                   : std::numeric_limits<double>::quiet_NaN();
        return rec;
    }

    double value(const TraceRecord& rec) const {
        return criterion.kind == StopKind::FidelityMax ? rec.fidelity : rec.log_product;
    }
};

void check_positivity(const Matrix& rho, long m) {
    if (min_eigenvalue(rho) < -1e-10)
        throw invalid_state("run_until: negative eigenvalue at electron " + std::to_string(m));
}

}  // namespace

RunResult run_until(Matrix rho0, const KrausPair& kraus, const std::vector<Eigen::Index>& onehot,
                    const StopCriterion& criterion, const RunOptions& options) {
    if (criterion.kind == StopKind::FidelityMax && criterion.target.size() == 0)
        throw std::invalid_argument("run_until: fidelity criterion needs a target");
    Tracker tracker{onehot, criterion};
    RunResult result;
    result.trace.reserve(1024);

    Matrix cur = std::move(rho0);
    TraceRecord rec_cur = tracker.record(0, cur);
    result.trace.push_back(rec_cur);

    if (criterion.kind == StopKind::ElectronBudget) {
        for (long m = 1; m <= criterion.budget; ++m) {
            cur = step(cur, kraus);
            if (m % options.positivity_stride == 0) check_positivity(cur, m);
            rec_cur = tracker.record(m, cur);
            if (m % options.record_stride == 0 || m == criterion.budget)
                result.trace.push_back(rec_cur);
        }
        check_positivity(cur, criterion.budget);
        result.rho = std::move(cur);
        result.m_stop = criterion.budget;
        result.peak_value = tracker.value(rec_cur);
        return result;
    }

    double v_prev = neg_inf;
    double v_cur = tracker.value(rec_cur);
    long no_improve = 0;
    for (long m = 1; m <= options.max_electrons; ++m) {
        Matrix next = step(cur, kraus);
        if (m % options.positivity_stride == 0) check_positivity(next, m);
        const TraceRecord rec_next = tracker.record(m, next);
        const double v_next = tracker.value(rec_next);
        if (m % options.record_stride == 0) result.trace.push_back(rec_next);

        // 3-point strict local maximum on the raw trace; m=0 counts as a
        // maximum when the very first step already decreases. Maxima before
        // min_electrons (e.g. the antipodal dip of a long-way rotation) are
        // skipped.
        if (m - 1 >= options.min_electrons && v_cur > v_prev && v_cur > v_next) {
            check_positivity(cur, m - 1);
            result.rho = std::move(cur);
            result.m_stop = m - 1;
            result.peak_value = v_cur;
            return result;
        }
        no_improve = (v_next > v_cur || m <= options.min_electrons) ? 0 : no_improve + 1;
        if (no_improve >= options.stall_window)
            throw stall_error("run_until: no improvement over " +
                              std::to_string(options.stall_window) + " electrons (value " +
                              std::to_string(v_cur) + ")");
        v_prev = v_cur;
        v_cur = v_next;
        cur = std::move(next);
    }
    throw stall_error("run_until: no maximum within " + std::to_string(options.max_electrons) +
                      " electrons");
}

EffectiveExchange fit_effective_exchange(const Matrix& M0, const std::vector<Eigen::Index>& onehot,
                                         double unitarity_tol) {
    const int n = int(onehot.size());
    if (n < 2) throw std::invalid_argument("fit_effective_exchange: need n >= 2");
    Matrix block(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) block(i, j) = M0(onehot[i], onehot[j]);

    const double defect = (block.adjoint() * block - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > unitarity_tol)
        throw invalid_state("fit_effective_exchange: one-hot block unitarity defect " +
                            std::to_string(defect));

    // Factor out the block's overall phase so the principal log sees
    // eigenvalues near +1; a uniform diagonal shift does not move J_eff.
    const double phase0 = std::arg(block.trace());
    const Matrix centered = std::exp(-im * phase0) * block;

    Eigen::ComplexEigenSolver<Matrix> es(centered);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("fit_effective_exchange: eigensolver failed");
    Vector log_ev(n);
    for (int k = 0; k < n; ++k) {
        const Complex lambda = es.eigenvalues()[k];
        if (std::abs(wrap_angle(std::arg(lambda))) > pi - 0.05)
            throw branch_cut_error(
                "fit_effective_exchange: eigenphase near the log branch cut; reduce Omega");
        log_ev[k] = std::log(lambda);
    }
    const Matrix h_eff =
        im * (es.eigenvectors() * log_ev.asDiagonal() *
              es.eigenvectors().inverse()) -
        phase0 * Matrix::Identity(n, n);

    // Uniform all-to-all model: H = delta I + omega (ee^T - I).
    Complex diag_mean = h_eff.diagonal().mean();
    Complex off_mean = (h_eff.sum() - h_eff.diagonal().sum()) / double(n * (n - 1));
    const Complex ph_sym = std::exp(-im * (diag_mean + off_mean * double(n - 1)));
    const Complex ph_rest = std::exp(-im * (diag_mean - off_mean));
    Matrix model = Matrix::Constant(n, n, (ph_sym - ph_rest) / double(n));
    model.diagonal().array() += ph_rest;

    EffectiveExchange fit;
    fit.n = n;
    fit.J_eff = off_mean.real() / 2.0;
    fit.residual = (block - model).norm() / block.norm();
    return fit;
}

double estimate_electrons(int n, int q, double J_eff) {
    if (n > 4 * q) throw jump_infeasible("estimate_electrons: n > 4q");
    if (J_eff <= 0.0) throw std::invalid_argument("estimate_electrons: J_eff must be > 0");
    return std::asin(std::sqrt(n / (4.0 * q))) / (n * J_eff);
}

RzCalibration calibrate_rz_per_electron(const scatter::ChannelConfig& config,
                                        double leakage_threshold) {
    if (config.n != 1)
        throw std::invalid_argument("calibrate_rz_per_electron: needs a single-qubit channel");
    const auto kraus = extract_kraus_sector(scatter::total_reflection_sector(config), 1, config);
    const Complex m_ground = kraus.M0(0, 0);
    const Complex m_excited = kraus.M0(1, 1);
    RzCalibration cal;
    cal.phi_per_electron = wrap_angle(std::arg(m_excited) - std::arg(m_ground));
    cal.leakage = 1.0 - std::min(std::abs(m_ground), std::abs(m_excited));
    cal.reliable = cal.leakage <= leakage_threshold;
    return cal;
}

}  // namespace wst::kraus
