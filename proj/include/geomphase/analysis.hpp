#pragma once

// Post-processing: Ramsey-style phase extraction, straight-reference
// subtraction, phase unwrapping, least-squares fits and fringe-contrast
// extrema, plus the tabular container experiments serialize.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "geomphase/core.hpp"
#include "geomphase/dynamics.hpp"

namespace geomphase {

// One pulse end to end: both branch evolutions, then the qubit coherence.
// x = Re C and y = Im C mirror the two Ramsey projections; gamma = arg C.
CoherenceResult measured_phase(const Waveform& w, const SystemParams& p);

// Phase of the closed path relative to its amplitude-matched straight
// reference, taken as arg(C_shape * conj(C_ref)) so the comparison happens
// on the complex coherences rather than on wrapped angles.  Returns a value
// in (-pi, pi]; sweeps unwrap afterwards.  Straight input is rejected (its
// reference is itself, the difference is identically zero).
double geometric_phase_measured(const PathSpec& spec, const SystemParams& p);

// Classic continuity unwrapping: each output differs from its predecessor by
// the wrapped increment, so jumps larger than pi alias (callers keep sweeps
// dense enough that true adjacent differences stay below pi).
std::vector<double> unwrap_phase(const std::vector<double>& series);

// Rigid 2 pi shift of an unwrapped series so its last element lands nearest
// `reference`.  Pins the overall winding number of a sweep to a known
// asymptote without touching the differences.
std::vector<double> anchor_phases(const std::vector<double>& series, double reference);

// Least-squares fit result: one named coefficient per basis function.
struct FitResult {
    std::string basis;                        // human-readable basis description
    std::vector<std::string> names;           // one per coefficient
    std::vector<double> coefficients;
    double rms_residual = 0.0;
    double quality = 0.0;                     // 1 - SS_res/SS_tot (R^2 analog)

    double coefficient(const std::string& name) const;
};

// Fit y ~ a0 + a1/t (+ a2/t^2 for order 2) by normal equations on the
// scaled variable u = t_ref/t (t_ref = median t) for conditioning.
// `order` is the highest inverse power, 1 or 2.  Coefficients are reported
// for the unscaled basis {1, 1/t, 1/t^2}; a0 is the t -> infinity limit.
FitResult fit_inverse_t(const std::vector<double>& t, const std::vector<double>& y,
                        int order = 2);

// Fit r ~ r0 exp(-c x^2) by linear regression of ln r on x^2.  Requires all
// r in (0, 1].  Coefficients are named r0 and c; the residual is that of the
// log-linear fit.
FitResult fit_gaussian_r(const std::vector<double>& x, const std::vector<double>& r);

// Discrete local maxima of r(t) by 3-point comparison; plateaus count once,
// at their leftmost index.  sparse_grid_warning is set when two maxima land
// within 8 grid points of each other (the grid under-resolves the period).
struct ExtremaResult {
    std::vector<double> t_maxima;
    bool sparse_grid_warning = false;
};

ExtremaResult find_r_extrema(const std::vector<double>& t, const std::vector<double>& r);

// Column-oriented sweep results: one independent variable, any number of
// dependent columns of equal length, plus string metadata that the writers
// embed in every output file.
struct SweepTable {
    struct Column {
        std::string name;
        std::vector<double> values;
    };

    std::string x_name;
    std::vector<double> x;
    std::vector<Column> columns;
    std::map<std::string, std::string> metadata;

    void add_column(const std::string& name, std::vector<double> values);
    const Column& column(const std::string& name) const;

    // validation_error unless x is strictly increasing, nonempty, and every
    // column matches its length with a unique name.
    void validate() const;

    // CSV: version tag, one "# key=value" line per metadata entry (sorted),
    // header row, then one row per sweep point, numbers formatted %.12g.
    std::string to_csv() const;
    // JSON document with x, columns and metadata, 2-space indent, sorted keys.
    std::string to_json() const;
};

}  // namespace geomphase
