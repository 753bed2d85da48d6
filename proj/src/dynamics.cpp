#include "geomphase/dynamics.hpp"

#include <cmath>
#include <cstdio>

#include "geomphase/detail/stepping.hpp"
#include "geomphase/errors.hpp"
#include "geomphase/paths.hpp"
#include "geomphase/version.hpp"

namespace geomphase {

namespace {

constexpr cx kI{0.0, 1.0};

void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

}  // namespace

double BranchTrajectory::max_abs_alpha() const {
    double m = 0.0;
    for (const cx& a : alpha) m = std::max(m, std::abs(a));
    return m;
}

BranchTrajectory evolve_branch(const Waveform& w, double delta_s, double kappa) {
    w.validate();
    if (!std::isfinite(delta_s)) {
        throw validation_error("evolve_branch: delta_s must be finite");
    }
    if (!std::isfinite(kappa) || kappa < 0.0) {
        throw validation_error("evolve_branch: kappa must be finite and >= 0");
    }

    const double max_e = w.max_abs();
    const std::size_t m = w.steps();
    const std::size_t per = detail::substeps_per_interval(w, std::max(std::abs(delta_s), max_e));
    const double h = w.dt / static_cast<double>(per);

    BranchTrajectory out;
    out.dt = w.dt;
    out.branch_detuning = delta_s;
    out.alpha.resize(m + 1, cx(0.0, 0.0));
    out.theta.resize(m + 1, 0.0);

    const cx damping = cx(kappa / 2.0, delta_s);  // alpha' = -damping*alpha - iE/2

    cx alpha(0.0, 0.0);
    double theta = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const cx e0 = w.values[k];
        const cx e1 = w.values[k + 1];
        for (std::size_t j = 0; j < per; ++j) {
            const cx ea = detail::lerp(e0, e1, static_cast<double>(j) / per);
            const cx em = detail::lerp(e0, e1, (static_cast<double>(j) + 0.5) / per);
            const cx eb = detail::lerp(e0, e1, static_cast<double>(j + 1) / per);

            auto f = [&](const cx& a, const cx& e) { return -damping * a - kI * (0.5 * e); };
            auto g = [&](const cx& a, const cx& e) {
                return -0.5 * (e.real() * a.real() + e.imag() * a.imag());  // -Re(conj(E) a)/2
            };

            const cx k1 = f(alpha, ea);
            const double l1 = g(alpha, ea);
            const cx k2 = f(alpha + 0.5 * h * k1, em);
            const double l2 = g(alpha + 0.5 * h * k1, em);
            const cx k3 = f(alpha + 0.5 * h * k2, em);
            const double l3 = g(alpha + 0.5 * h * k2, em);
            const cx k4 = f(alpha + h * k3, eb);
            const double l4 = g(alpha + h * k3, eb);

            alpha += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            theta += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
        }
        out.alpha[k + 1] = alpha;
        out.theta[k + 1] = theta;
    }

    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) || !std::isfinite(theta)) {
        throw numeric_error("evolve_branch: non-finite state");
    }
    // Linear-response sanity bound (lossless case): the driven amplitude of a
    // detuned mode cannot exceed a few times max|E|/|delta_s|.
    if (kappa == 0.0 && delta_s != 0.0 && max_e > 0.0) {
        const double bound = 3.0 * max_e / std::abs(delta_s);
        if (out.max_abs_alpha() > bound) {
            throw numeric_error("evolve_branch: |alpha| exceeded the linear-response bound");
        }
    }
    return out;
}

std::pair<BranchTrajectory, BranchTrajectory> evolve_joint(const Waveform& w,
                                                           const SystemParams& p) {
    return {evolve_branch(w, p.delta_g(), p.kappa),
            evolve_branch(w, p.delta_e(), p.kappa)};
}

CoherenceResult coherence(const BranchTrajectory& g, const BranchTrajectory& e) {
    if (g.alpha.size() != e.alpha.size() || g.dt != e.dt) {
        throw validation_error("coherence: branch trajectories must share the time grid");
    }
    const cx ag = g.final_alpha();
    const cx ae = e.final_alpha();
    const cx overlap = std::exp(-0.5 * std::norm(ag) - 0.5 * std::norm(ae) + std::conj(ag) * ae);
    CoherenceResult out;
    out.c = std::exp(kI * (e.final_theta() - g.final_theta())) * overlap;
    out.r = std::abs(out.c);
    out.gamma = std::arg(out.c);
    out.alpha_g_final = ag;
    out.alpha_e_final = ae;
    return out;
}

double ramsey_population(const CoherenceResult& c, double phi2) {
    return 0.5 * (1.0 + (std::exp(-kI * phi2) * c.c).real());
}

AdiabaticPhases adiabatic_phases(const Waveform& w, const SystemParams& p) {
    w.validate_cyclic();
    AdiabaticPhases out;
    if (w.max_abs() == 0.0) {
        return out;  // zero drive encloses nothing and shifts nothing
    }

    const double dg = p.delta_g();
    const double de = p.delta_e();

    // Trapezoidal integral of |E|^2/4 * (1/delta_e - 1/delta_g).
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < w.values.size(); ++k) {
        acc += 0.5 * (std::norm(w.values[k]) + std::norm(w.values[k + 1]));
    }
    out.gamma_dyn = acc * w.dt * 0.25 * (1.0 / de - 1.0 / dg);

    const double area_e = signed_area(contour_of(w));
    out.delta_area = area_e / (4.0 * de * de) - area_e / (4.0 * dg * dg);
    out.gamma_geo = -2.0 * out.delta_area;
    return out;
}

double mean_photon_number(double eps0, double delta_s) {
    if (!std::isfinite(eps0) || eps0 < 0.0) {
        throw validation_error("mean_photon_number: eps0 must be finite and >= 0");
    }
    if (delta_s == 0.0 || !std::isfinite(delta_s)) {
        throw validation_error("mean_photon_number: delta_s must be finite and nonzero");
    }
    return eps0 * eps0 / (4.0 * delta_s * delta_s);
}

cx lorentzian_response(double delta_s, double kappa, cx drive) {
    if (delta_s == 0.0 && kappa == 0.0) {
        throw validation_error("lorentzian_response: delta_s and kappa cannot both be zero");
    }
    return -(0.5 * drive) / cx(delta_s, -kappa / 2.0);
}

std::string trajectories_csv(const BranchTrajectory& g, const BranchTrajectory& e) {
    if (g.alpha.size() != e.alpha.size() || g.dt != e.dt) {
        throw validation_error("trajectories_csv: branch trajectories must share the time grid");
    }
    std::string out;
    out += kCsvTag;
    out += "\n";
    out += "t_ns,re_alpha_g,im_alpha_g,theta_g,re_alpha_e,im_alpha_e,theta_e\n";
    for (std::size_t k = 0; k < g.alpha.size(); ++k) {
        append_num(out, g.dt * static_cast<double>(k));
        out += ",";
        append_num(out, g.alpha[k].real());
        out += ",";
        append_num(out, g.alpha[k].imag());
        out += ",";
        append_num(out, g.theta[k]);
        out += ",";
        append_num(out, e.alpha[k].real());
        out += ",";
        append_num(out, e.alpha[k].imag());
        out += ",";
        append_num(out, e.theta[k]);
        out += "\n";
    }
    return out;
}

}  // namespace geomphase
