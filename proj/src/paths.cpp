#include "geomphase/paths.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "geomphase/errors.hpp"
#include "geomphase/version.hpp"

namespace geomphase {

namespace {

constexpr cx kI{0.0, 1.0};

// Unit-amplitude path point (eps0 = 1) at curve parameter u in [0, 1].
// Piecewise shapes allocate u proportional to arc length so the traversal
// speed |dE/du| is constant.
cx unit_circle(double u, Orientation o) {
    const double sgn = (o == Orientation::CCW) ? 1.0 : -1.0;
    return 0.5 * (1.0 - std::exp(kI * (sgn * kTwoPi * u)));
}

cx unit_semicircle(double u, Orientation o) {
    // Arc half of the circle first (the half swept first by the full-circle
    // parameterization of the same orientation), then a straight return to 0
    // along the real axis.  Arc fraction of the total length pi*r + 2r.
    const double arc_frac = kPi / (kPi + 2.0);
    const double sgn = (o == Orientation::CCW) ? 1.0 : -1.0;
    if (u <= arc_frac) {
        const double s = u / arc_frac;  // in [0, 1] over the half-turn
        return 0.5 * (1.0 - std::exp(kI * (sgn * kPi * s)));
    }
    const double s = (u - arc_frac) / (1.0 - arc_frac);
    return cx(1.0 - s, 0.0);
}

cx unit_square(double u, Orientation o) {
    // Diamond 0 -> (1 -/+ i)/2 -> 1 -> (1 +/- i)/2 -> 0 with equal-length
    // edges, a quarter of the time on each.
    const double sgn = (o == Orientation::CCW) ? -1.0 : 1.0;
    const cx p0(0.0, 0.0);
    const cx p1(0.5, sgn * 0.5);
    const cx p2(1.0, 0.0);
    const cx p3(0.5, -sgn * 0.5);
    const cx verts[5] = {p0, p1, p2, p3, p0};
    double s = u * 4.0;
    int seg = static_cast<int>(s);
    if (seg > 3) seg = 3;
    const double f = s - seg;
    return verts[seg] + f * (verts[seg + 1] - verts[seg]);
}

cx unit_figure_eight(double u, Orientation o) {
    // Two tangent circles of radius 1/4 centered at 1/4 and 3/4, traversed
    // with opposite senses; the curve passes through 1 and encloses zero net
    // area.  Segment lengths: quarter, half, quarter of the total.
    const double sgn = (o == Orientation::CCW) ? 1.0 : -1.0;
    if (u <= 0.25) {
        const double s = u / 0.25;
        return 0.25 * (1.0 - std::exp(kI * (sgn * kPi * s)));
    }
    if (u <= 0.75) {
        const double s = (u - 0.25) / 0.5;
        return cx(0.75, 0.0) - 0.25 * std::exp(kI * (-sgn * kTwoPi * s));
    }
    const double s = (u - 0.75) / 0.25;
    return 0.25 * (1.0 - std::exp(kI * (sgn * kPi * (1.0 + s))));
}

cx unit_point(const PathSpec& spec, double u) {
    switch (spec.shape) {
        case PathShape::Circle: return unit_circle(u, spec.orientation);
        case PathShape::Semicircle: return unit_semicircle(u, spec.orientation);
        case PathShape::Square: return unit_square(u, spec.orientation);
        case PathShape::FigureEight: return unit_figure_eight(u, spec.orientation);
        case PathShape::Straight: return cx(std::sin(kPi * u), 0.0);
    }
    throw validation_error("make_path: unknown shape");
}

void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

}  // namespace

ClosedContour::ClosedContour(std::vector<cx> v) : vertices(std::move(v)) {
    if (vertices.size() < 4) {
        throw validation_error("ClosedContour: need at least 3 segments");
    }
    if (vertices.front() != vertices.back()) {
        throw validation_error("ClosedContour: contour must close exactly (last vertex == first)");
    }
    int distinct = 1;
    for (std::size_t i = 1; i + 1 < vertices.size() && distinct < 3; ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < i; ++j) {
            if (vertices[j] == vertices[i]) { seen = true; break; }
        }
        if (!seen) ++distinct;
    }
    if (distinct < 3) {
        throw validation_error("ClosedContour: need at least 3 distinct vertices");
    }
}

Waveform make_path(const PathSpec& spec) {
    const std::size_t m = spec.samples;
    Waveform w;
    w.dt = spec.duration / static_cast<double>(m);
    w.values.resize(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(m);
        w.values[k] = spec.eps0 * unit_point(spec, u);
    }
    // All shapes start and end at zero analytically; pin the endpoints so the
    // cyclic invariant holds exactly in floating point.
    w.values.front() = cx(0.0, 0.0);
    w.values.back() = cx(0.0, 0.0);
    w.validate_cyclic();
    return w;
}

Waveform straight_reference(const Waveform& w) {
    w.validate();
    Waveform out;
    out.dt = w.dt;
    out.values.reserve(w.values.size());
    for (const cx& v : w.values) {
        out.values.emplace_back(std::abs(v), 0.0);
    }
    return out;
}

ClosedContour contour_of(const Waveform& w) {
    w.validate_cyclic();
    return ClosedContour(w.values);
}

double signed_area(const ClosedContour& c) {
    if (c.vertices.front() != c.vertices.back()) {
        throw validation_error("signed_area: contour must be closed");
    }
    // A = 1/2 sum Im(conj(z_k) * z_{k+1})  (shoelace).
    double twice = 0.0;
    for (std::size_t k = 0; k + 1 < c.vertices.size(); ++k) {
        const cx& a = c.vertices[k];
        const cx& b = c.vertices[k + 1];
        twice += a.real() * b.imag() - a.imag() * b.real();
    }
    return 0.5 * twice;
}

std::vector<SpectralLine> drive_spectrum(const Waveform& w) {
    w.validate();
    const std::size_t m = w.steps();  // one period: samples 0..m-1
    const double t_total = w.duration();

    // Twiddle table exp(-2pi i r / m); index (j*k) mod m keeps every term an
    // exact table entry, so the sum carries no recurrence drift.
    std::vector<cx> tw(m);
    for (std::size_t r = 0; r < m; ++r) {
        tw[r] = std::exp(cx(0.0, -kTwoPi * static_cast<double>(r) / static_cast<double>(m)));
    }

    std::vector<SpectralLine> lines(m);
    // Signed bin indices in (-m/2, m/2], reported in ascending order.
    const long k_min = -((static_cast<long>(m) - 1) / 2);
    for (std::size_t idx = 0; idx < m; ++idx) {
        const long k = k_min + static_cast<long>(idx);
        cx sum(0.0, 0.0);
        const long kk = ((k % static_cast<long>(m)) + static_cast<long>(m)) % static_cast<long>(m);
        for (std::size_t j = 0; j < m; ++j) {
            sum += w.values[j] * tw[(j * static_cast<std::size_t>(kk)) % m];
        }
        lines[idx].offset = kTwoPi * static_cast<double>(k) / t_total;
        lines[idx].amplitude = sum / static_cast<double>(m);
    }
    return lines;
}

std::string waveform_csv(const Waveform& w) {
    w.validate();
    std::string out;
    out += kCsvTag;
    out += "\n";
    out += "t_ns,eps_I,eps_Q\n";
    for (std::size_t k = 0; k < w.values.size(); ++k) {
        append_num(out, w.dt * static_cast<double>(k));
        out += ",";
        append_num(out, w.values[k].real());
        out += ",";
        append_num(out, w.values[k].imag());
        out += "\n";
    }
    return out;
}

}  // namespace geomphase
