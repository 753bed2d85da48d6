#include "geomphase/fock.hpp"

#include <cmath>
#include <sstream>

#include "geomphase/detail/stepping.hpp"
#include "geomphase/dynamics.hpp"
#include "geomphase/errors.hpp"

namespace geomphase {

namespace {

constexpr double kNormDriftTol = 1e-6;
constexpr double kTopPopulationTol = 1e-8;

double wrap_pi(double x) {
    return std::remainder(x, kTwoPi);
}

}  // namespace

double FockState::norm() const {
    double s = 0.0;
    for (const cx& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
}

double FockState::mean_photon() const {
    double s = 0.0;
    for (std::size_t n = 0; n < amplitudes.size(); ++n) {
        s += static_cast<double>(n) * std::norm(amplitudes[n]);
    }
    return s;
}

double FockState::top_population(std::size_t levels) const {
    double s = 0.0;
    const std::size_t n = amplitudes.size();
    for (std::size_t k = n > levels ? n - levels : 0; k < n; ++k) {
        s += std::norm(amplitudes[k]);
    }
    return s;
}

cx overlap(const FockState& a, const FockState& b) {
    if (a.dim() != b.dim()) {
        throw validation_error("overlap: dimension mismatch");
    }
    cx s(0.0, 0.0);
    for (std::size_t n = 0; n < a.dim(); ++n) {
        s += std::conj(a.amplitudes[n]) * b.amplitudes[n];
    }
    return s;
}

std::size_t truncation_for(double n_max) {
    if (!std::isfinite(n_max) || n_max < 0.0) {
        throw validation_error("truncation_for: n_max must be finite and >= 0");
    }
    return static_cast<std::size_t>(std::ceil(n_max + 8.0 * std::sqrt(n_max) + 10.0));
}

FockState coherent_vector(cx alpha, std::size_t dim) {
    if (dim == 0) {
        throw validation_error("coherent_vector: dim must be positive");
    }
    if (dim < truncation_for(std::norm(alpha))) {
        throw oracle_error("coherent_vector: truncation too small for |alpha|^2");
    }
    FockState s;
    s.amplitudes.resize(dim);
    cx c = std::exp(cx(-0.5 * std::norm(alpha), 0.0));
    for (std::size_t n = 0; n < dim; ++n) {
        s.amplitudes[n] = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return s;
}

FockState evolve_fock(const Waveform& w, double delta_s, std::size_t dim) {
    w.validate();
    if (!std::isfinite(delta_s)) {
        throw validation_error("evolve_fock: delta_s must be finite");
    }
    if (dim < 2 || dim > 256) {
        throw validation_error("evolve_fock: dim must be in [2, 256]");
    }
    const double max_e = w.max_abs();
    if (delta_s != 0.0 && max_e > 0.0) {
        // Certify the truncation for the worst case: twice the slow-drive
        // peak amplitude, i.e. four times its photon number.
        const double n_worst = 4.0 * mean_photon_number(max_e, delta_s);
        if (dim < truncation_for(n_worst)) {
            throw oracle_error("evolve_fock: truncation rule violated for the worst-case photon number");
        }
    }

    // Spectral bound of the truncated generator sets the step size.
    const double nd = static_cast<double>(dim);
    const double rate = std::abs(delta_s) * (nd - 1.0) + max_e * std::sqrt(nd);
    const std::size_t per = detail::substeps_per_interval(w, rate);
    const double h = w.dt / static_cast<double>(per);
    const std::size_t m = w.steps();

    std::vector<double> sq(dim);
    for (std::size_t n = 0; n < dim; ++n) sq[n] = std::sqrt(static_cast<double>(n));

    std::vector<cx> psi(dim, cx(0.0, 0.0));
    psi[0] = cx(1.0, 0.0);

    // d psi_n/dt = -i [ delta_s n psi_n + (E/2) sqrt(n) psi_{n-1}
    //                   + (conj(E)/2) sqrt(n+1) psi_{n+1} ]
    auto rhs = [&](std::vector<cx>& out, const std::vector<cx>& v, const cx& e) {
        const cx half_e = 0.5 * e;
        const cx half_ec = std::conj(half_e);
        for (std::size_t n = 0; n < dim; ++n) {
            cx acc = delta_s * static_cast<double>(n) * v[n];
            if (n > 0) acc += half_e * sq[n] * v[n - 1];
            if (n + 1 < dim) acc += half_ec * sq[n + 1] * v[n + 1];
            out[n] = cx(acc.imag(), -acc.real());  // multiply by -i
        }
    };

    std::vector<cx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    for (std::size_t k = 0; k < m; ++k) {
        const cx e0 = w.values[k];
        const cx e1 = w.values[k + 1];
        for (std::size_t j = 0; j < per; ++j) {
            const cx ea = detail::lerp(e0, e1, static_cast<double>(j) / per);
            const cx em = detail::lerp(e0, e1, (static_cast<double>(j) + 0.5) / per);
            const cx eb = detail::lerp(e0, e1, static_cast<double>(j + 1) / per);

            rhs(k1, psi, ea);
            for (std::size_t n = 0; n < dim; ++n) tmp[n] = psi[n] + 0.5 * h * k1[n];
            rhs(k2, tmp, em);
            for (std::size_t n = 0; n < dim; ++n) tmp[n] = psi[n] + 0.5 * h * k2[n];
            rhs(k3, tmp, em);
            for (std::size_t n = 0; n < dim; ++n) tmp[n] = psi[n] + h * k3[n];
            rhs(k4, tmp, eb);
            for (std::size_t n = 0; n < dim; ++n) {
                psi[n] += (h / 6.0) * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
            }
        }
    }

    FockState out;
    out.amplitudes = std::move(psi);
    const double drift = std::abs(out.norm() - 1.0);
    if (!std::isfinite(drift) || drift > kNormDriftTol) {
        throw numeric_error("evolve_fock: norm drift exceeds tolerance (step-size failure)");
    }
    if (out.top_population(3) > kTopPopulationTol) {
        throw oracle_error("evolve_fock: population reached the truncation edge");
    }
    return out;
}

std::string OracleReport::to_json() const {
    std::ostringstream os;
    os.precision(12);
    os << "{\"fidelity_g\":" << fidelity_g
       << ",\"fidelity_e\":" << fidelity_e
       << ",\"phase_residual_rad\":" << phase_residual_rad
       << ",\"r_residual\":" << r_residual
       << ",\"norm_drift_g\":" << norm_drift_g
       << ",\"norm_drift_e\":" << norm_drift_e
       << ",\"n_truncation\":" << n_truncation
       << ",\"dt_ns\":" << dt_ns << "}";
    return os.str();
}

OracleReport oracle_compare(const Waveform& w, const SystemParams& p, std::size_t dim) {
    if (p.kappa != 0.0) {
        throw oracle_error("oracle_compare: damped runs are not supported (kappa must be 0)");
    }
    const auto [tg, te] = evolve_joint(w, p);
    const FockState psi_g = evolve_fock(w, p.delta_g(), dim);
    const FockState psi_e = evolve_fock(w, p.delta_e(), dim);

    const cx phase_g = std::exp(cx(0.0, tg.final_theta()));
    const cx phase_e = std::exp(cx(0.0, te.final_theta()));
    FockState ref_g = coherent_vector(tg.final_alpha(), dim);
    FockState ref_e = coherent_vector(te.final_alpha(), dim);
    for (cx& a : ref_g.amplitudes) a *= phase_g;
    for (cx& a : ref_e.amplitudes) a *= phase_e;

    const CoherenceResult coh = coherence(tg, te);
    const cx fock_overlap = overlap(psi_g, psi_e);

    OracleReport r;
    r.fidelity_g = std::abs(overlap(ref_g, psi_g));
    r.fidelity_e = std::abs(overlap(ref_e, psi_e));
    r.phase_residual_rad = std::abs(wrap_pi(std::arg(fock_overlap) - coh.gamma));
    r.r_residual = std::abs(std::abs(fock_overlap) - coh.r);
    r.norm_drift_g = std::abs(psi_g.norm() - 1.0);
    r.norm_drift_e = std::abs(psi_e.norm() - 1.0);
    r.n_truncation = dim;
    r.dt_ns = w.dt;
    return r;
}

std::size_t recommended_truncation(const Waveform& w, const SystemParams& p) {
    w.validate();
    const double max_e = w.max_abs();
    double n_worst = 0.0;
    if (max_e > 0.0) {
        const double ng = 4.0 * mean_photon_number(max_e, p.delta_g());
        const double ne = 4.0 * mean_photon_number(max_e, p.delta_e());
        n_worst = std::max(ng, ne);
    }
    const std::size_t dim = truncation_for(n_worst);
    if (dim > 256) {
        throw oracle_error("recommended_truncation: pulse needs more than 256 levels");
    }
    return std::max<std::size_t>(dim, 2);
}

}  // namespace geomphase
