#pragma once

// Drive-path generation and geometry in the envelope IQ plane.
//
// All closed shapes start and end at E = 0, reach a peak amplitude eps0 and
// are traversed at constant slew rate (time allocated proportional to arc
// length).  With the counterclockwise orientation label the enclosed signed
// area is positive; the clockwise variant is the complex conjugate path.

#include <complex>
#include <string>
#include <vector>

#include "geomphase/core.hpp"

namespace geomphase {

// Closed polyline in the IQ plane: vertices[0] == vertices.back() exactly.
struct ClosedContour {
    std::vector<cx> vertices;

    explicit ClosedContour(std::vector<cx> vertices);
};

// Sample the drive envelope of the given path on the uniform time grid.
// The first and last samples are exactly zero.
Waveform make_path(const PathSpec& spec);

// Amplitude-matched reference pulse: same |E(t)| profile, zero enclosed area
// (the envelope moves along the positive real axis).  Idempotent.
Waveform straight_reference(const Waveform& w);

// View a cyclic waveform as a closed contour (throws if not closed).
ClosedContour contour_of(const Waveform& w);

// Shoelace signed area; counterclockwise traversal is positive.  The polyline
// area converges to the smooth-curve area as O(1/samples^2).
double signed_area(const ClosedContour& c);

struct SpectralLine {
    double offset;  // rad/ns, relative to the rotating frame
    cx amplitude;
};

// Discrete Fourier series of the envelope over one pulse period [0, T),
// returned sorted by frequency offset.  Offsets are envelope frequencies
// Omega in the rotating frame; the component at Omega = -delta_s drives the
// branch resonantly (lab frequency omega_drive - Omega), so a clockwise cycle
// (content at -2pi/T) pushes toward resonance when delta_s > 0.
std::vector<SpectralLine> drive_spectrum(const Waveform& w);

// CSV export with columns t_ns, eps_I, eps_Q.
std::string waveform_csv(const Waveform& w);

}  // namespace geomphase
