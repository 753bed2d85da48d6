#pragma once

// Coherent-state dynamics of the driven mode in the frame rotating at the
// drive frequency.
//
// With the qubit pinned to one state the mode sees a branch detuning
// delta_s (delta for ground, delta + 2*chi for excited) and evolves as a
// displaced vacuum |psi> = e^{i theta} |alpha> with
//
//     d alpha/dt = -(i delta_s + kappa/2) alpha - i E(t)/2,   alpha(0) = 0,
//     d theta/dt = -Re(conj(E) alpha) / 2,
//
// which is exact for the linear generator at kappa = 0.  The phase law is
// kept in the same form for kappa > 0; damped runs are flagged approximate
// by the experiment layer.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "geomphase/core.hpp"

namespace geomphase {

// Trajectory of one branch, recorded on the waveform grid.
struct BranchTrajectory {
    double dt = 0.0;
    double branch_detuning = 0.0;
    std::vector<cx> alpha;     // alpha[0] = 0
    std::vector<double> theta; // theta[0] = 0

    cx final_alpha() const { return alpha.back(); }
    double final_theta() const { return theta.back(); }
    double max_abs_alpha() const;
};

// Fixed-step RK4 on the pair (alpha, theta), substepping each waveform
// interval so that max(|delta_s|, max|E|) * h <= 0.05 rad and the pulse uses
// at least 2000 steps.  E(t) is linearly interpolated between samples.
BranchTrajectory evolve_branch(const Waveform& w, double delta_s, double kappa);

// Both dispersive branches of the same pulse (ground first).
std::pair<BranchTrajectory, BranchTrajectory> evolve_joint(const Waveform& w,
                                                           const SystemParams& p);

// Qubit coherence after one pulse: C = e^{i(theta_e - theta_g)} <alpha_g|alpha_e>
// with <a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b).  r = |C| is the Ramsey
// fringe contrast, gamma = arg C the relative phase.
struct CoherenceResult {
    cx c;
    double r = 0.0;
    double gamma = 0.0;
    cx alpha_g_final;
    cx alpha_e_final;

    double x() const { return c.real(); }
    double y() const { return c.imag(); }
};

CoherenceResult coherence(const BranchTrajectory& g, const BranchTrajectory& e);

// Excited-state probability after a Ramsey sequence whose second pi/2 pulse
// is phase-shifted by phi2: (1 + Re(e^{-i phi2} C)) / 2.
double ramsey_population(const CoherenceResult& c, double phi2);

// Closed-form slow-drive limit of the branch phase difference.
//   gamma_dyn = integral |E|^2/4 (1/delta_e - 1/delta_g) dt   (trapezoidal)
//   gamma_geo = -2 (A_e - A_g),  A_s = A_E / (4 delta_s^2)
// where A_E is the signed area enclosed by the sampled envelope contour.
struct AdiabaticPhases {
    double gamma_dyn = 0.0;
    double gamma_geo = 0.0;
    double delta_area = 0.0;  // A_e - A_g
};

AdiabaticPhases adiabatic_phases(const Waveform& w, const SystemParams& p);

// Steady-state photon number of a branch held at constant drive amplitude
// eps0: n = eps0^2 / (4 delta_s^2).
double mean_photon_number(double eps0, double delta_s);

// Steady state of the damped driven mode under constant drive:
// alpha_ss = -(E/2) / (delta_s - i kappa/2).  |alpha_ss|^2 vs delta_s is a
// Lorentzian of FWHM kappa.
cx lorentzian_response(double delta_s, double kappa, cx drive);

// CSV export with columns t_ns, re_alpha_g, im_alpha_g, theta_g,
// re_alpha_e, im_alpha_e, theta_e.  Both trajectories must share the grid.
std::string trajectories_csv(const BranchTrajectory& g, const BranchTrajectory& e);

}  // namespace geomphase
