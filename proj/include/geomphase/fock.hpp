#pragma once

// Brute-force cross-check: integrate the same pulse in a truncated number
// basis, with no coherent-state assumption, and compare against the
// displaced-vacuum solver.  Kept deliberately independent of dynamics.cpp:
// the two share only the sampled waveform and its interpolation rule.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "geomphase/core.hpp"

namespace geomphase {

struct FockState {
    std::vector<cx> amplitudes;

    std::size_t dim() const { return amplitudes.size(); }
    double norm() const;
    double mean_photon() const;
    // Total population of the top `levels` basis states (truncation certificate).
    double top_population(std::size_t levels = 3) const;
};

cx overlap(const FockState& a, const FockState& b);  // <a|b>

// Smallest dimension certified for states of mean photon number up to n_max:
// N >= n_max + 8 sqrt(n_max) + 10.
std::size_t truncation_for(double n_max);

// Coherent state |alpha> truncated to `dim` levels, built with the stable
// recurrence c_{n+1} = c_n * alpha / sqrt(n+1).  Throws oracle_error if the
// truncation rule is not satisfied for |alpha|^2.
FockState coherent_vector(cx alpha, std::size_t dim);

// Integrate i d psi/dt = H(t) psi from vacuum with the tridiagonal
// H = delta_s diag(n) + (E(t)/2) raising + (conj(E(t))/2) lowering.
// Uses the same per-step phase cap as the coherent solver, applied to the
// spectral bound |delta_s| (N-1) + max|E| sqrt(N) of the truncated generator.
// Throws numeric_error on norm drift > 1e-6 and oracle_error if the top
// three levels accumulate more than 1e-8 population.
FockState evolve_fock(const Waveform& w, double delta_s, std::size_t dim);

struct OracleReport {
    double fidelity_g = 0.0;
    double fidelity_e = 0.0;
    double phase_residual_rad = 0.0;  // |arg<psi_g|psi_e> - gamma_coherent|, wrapped
    double r_residual = 0.0;          // ||<psi_g|psi_e>| - r_coherent|
    double norm_drift_g = 0.0;
    double norm_drift_e = 0.0;
    std::size_t n_truncation = 0;
    double dt_ns = 0.0;

    std::string to_json() const;
};

// Run both branches through both solvers and report the discrepancies.
// Requires kappa = 0 (the number-basis integrator is unitary only).
OracleReport oracle_compare(const Waveform& w, const SystemParams& p, std::size_t dim);

// Dimension recommended by the truncation rule for this pulse, with a
// factor-2 amplitude margin over the slow-drive peak photon number.
std::size_t recommended_truncation(const Waveform& w, const SystemParams& p);

}  // namespace geomphase
