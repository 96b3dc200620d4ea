#include "wst/fom.hpp"

#include "wst/kraus.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

namespace wst::fom {

StructureReport structure_report(const Matrix& R_B, int n, const Spinor& chi) {
    if (n < 2) throw std::invalid_argument("structure_report: need n >= 2");
    scatter::ChannelConfig prov;
    prov.n = n;
    prov.injected_spin = chi;
    const auto kraus = kraus::extract_kraus(R_B, n, chi, prov);
    const auto onehot = kraus::onehot_indices_full(n);

    StructureReport rep;
    Complex off_sum = 0.0, diag_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        diag_sum += kraus.M0(onehot[i], onehot[i]);
        for (int j = 0; j < n; ++j)
            if (i != j) off_sum += kraus.M0(onehot[i], onehot[j]);
    }
    rep.alpha = off_sum / double(n * (n - 1));
    rep.beta = diag_sum / double(n);
    for (int i = 0; i < n; ++i) {
        rep.beta_spread = std::max(rep.beta_spread,
                                   std::abs(kraus.M0(onehot[i], onehot[i]) - rep.beta));
        for (int j = 0; j < n; ++j)
            if (i != j)
                rep.alpha_spread = std::max(rep.alpha_spread,
                                            std::abs(kraus.M0(onehot[i], onehot[j]) - rep.alpha));
    }

    // M1 lowers the static excitation number by one; group its weight by the
    // source sector k = 1..n.
    rep.gamma_norms.assign(n, 0.0);
    const long dim = 1L << n;
    for (long col = 0; col < dim; ++col) {
        const int k = scatter::excitations(col);
        if (k == 0) continue;
        rep.gamma_norms[k - 1] += kraus.M1.col(col).squaredNorm();
    }
    for (auto& g : rep.gamma_norms) g = std::sqrt(g);
    rep.m1_frobenius = kraus.M1.norm();
    rep.unitary_emulation_defect =
        std::abs(std::norm(rep.beta) + 2.0 * std::norm(rep.alpha) - 1.0);
    return rep;
}

double fom_value(const StructureReport& report) {
    if (std::abs(report.alpha) == 0.0) return std::numeric_limits<double>::infinity();
    return std::log(report.m1_frobenius / std::abs(report.alpha));
}

Param param_from_name(const std::string& name) {
    if (name == "kd") return Param::Kd;
    if (name == "kd0") return Param::Kd0;
    if (name == "gamma") return Param::Gamma;
    if (name == "omega") return Param::Omega;
    throw std::invalid_argument("unknown sweep parameter: " + name);
}

std::string param_name(Param p) {
    switch (p) {
        case Param::Kd: return "kd";
        case Param::Kd0: return "kd0";
        case Param::Gamma: return "gamma";
        case Param::Omega: return "omega";
    }
    return "?";
}

namespace {

void set_param(scatter::ChannelConfig& cfg, Param p, double v) {
    switch (p) {
        case Param::Kd: cfg.kd = v; break;
        case Param::Kd0: cfg.kd0 = v; break;
        case Param::Gamma: cfg.Gamma = v; break;
        case Param::Omega: cfg.Omega = v; break;
    }
}

double axis_value(const Axis& ax, int i) {
    // open interval: avoids the degenerate endpoints kd = 0, 2pi etc.
    return ax.lo + (ax.hi - ax.lo) * (i + 0.5) / ax.count;
}

FomSample evaluate(scatter::ChannelConfig cfg) {
    FomSample s{cfg.kd, cfg.kd0, cfg.Gamma, cfg.Omega, 0.0, false};
    try {
        const auto rep = structure_report(scatter::total_reflection(cfg), cfg.n);
        s.fom = fom_value(rep);
        s.degenerate = !std::isfinite(s.fom);
    } catch (const resonance_singularity&) {
        s.fom = std::numeric_limits<double>::infinity();
        s.degenerate = true;
    }
    return s;
}

}  // namespace

SweepResult sweep(const scatter::ChannelConfig& base, const Axis& axis1, const Axis& axis2,
                  int threads) {
    if (axis1.count < 1 || axis2.count < 1) throw std::invalid_argument("sweep: empty grid");
    const int total = axis1.count * axis2.count;
    SweepResult result;
    result.samples.resize(total);

    if (threads <= 0) threads = int(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, total);

    std::vector<std::thread> pool;
    std::atomic<int> cursor{0};
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int idx = cursor.fetch_add(1); idx < total; idx = cursor.fetch_add(1)) {
                scatter::ChannelConfig cfg = base;
                set_param(cfg, axis1.param, axis_value(axis1, idx / axis2.count));
                set_param(cfg, axis2.param, axis_value(axis2, idx % axis2.count));
                result.samples[idx] = evaluate(cfg);
            }
        });
    }
    for (auto& th : pool) th.join();

    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < total; ++i) {
        if (!result.samples[i].degenerate && result.samples[i].fom < best) {
            best = result.samples[i].fom;
            result.argmin = i;
        }
    }
    return result;
}

}  // namespace wst::fom
