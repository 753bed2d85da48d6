#include "doctest.h"

#include <cmath>
#include <complex>

#include "geomphase/core.hpp"
#include "geomphase/errors.hpp"
#include "geomphase/paths.hpp"

using namespace geomphase;

namespace {

Waveform circle(Orientation o, double eps0_mhz = 370.0, double t = 300.0,
                std::size_t samples = 2048) {
    return make_path(PathSpec(PathShape::Circle, o, to_angular(eps0_mhz), t, samples));
}

}  // namespace

TEST_CASE("every shape starts and ends at exactly zero") {
    for (const PathShape s : {PathShape::Circle, PathShape::Semicircle, PathShape::Square,
                              PathShape::FigureEight, PathShape::Straight}) {
        const Waveform w = make_path(PathSpec(s, Orientation::CCW, 1.0, 10.0, 256));
        CHECK(w.values.front() == cx(0.0, 0.0));
        CHECK(w.values.back() == cx(0.0, 0.0));
        CHECK(w.values.size() == 257);
        CHECK(w.dt == doctest::Approx(10.0 / 256.0).epsilon(1e-15));
    }
}

TEST_CASE("circle modulus follows eps0 |sin(pi t / T)|") {
    const double eps0 = to_angular(370.0);
    const Waveform w = circle(Orientation::CCW);
    const std::size_t m = w.steps();
    for (const std::size_t k : {std::size_t(1), m / 4, m / 2, (3 * m) / 4, m - 1}) {
        const double expected = eps0 * std::abs(std::sin(kPi * static_cast<double>(k) /
                                                         static_cast<double>(m)));
        CHECK(std::abs(w.values[k]) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(w.max_abs() == doctest::Approx(eps0).epsilon(1e-12));
}

TEST_CASE("straight path is the real sine arch") {
    const double eps0 = to_angular(190.0);
    const Waveform w = make_path(PathSpec(PathShape::Straight, Orientation::CCW, eps0, 40.0, 512));
    for (const std::size_t k : {std::size_t(7), std::size_t(128), std::size_t(300)}) {
        CHECK(w.values[k].imag() == 0.0);
        CHECK(w.values[k].real() ==
              doctest::Approx(eps0 * std::sin(kPi * static_cast<double>(k) / 512.0))
                  .epsilon(1e-12));
    }
}

TEST_CASE("straight_reference keeps the modulus and is idempotent") {
    const Waveform w = circle(Orientation::CCW, 190.0, 40.0, 512);
    const Waveform ref = straight_reference(w);
    REQUIRE(ref.values.size() == w.values.size());
    for (std::size_t k = 0; k < w.values.size(); ++k) {
        CHECK(ref.values[k].imag() == 0.0);
        CHECK(ref.values[k].real() == doctest::Approx(std::abs(w.values[k])).epsilon(1e-14));
    }
    const Waveform twice = straight_reference(ref);
    for (std::size_t k = 0; k < ref.values.size(); ++k) {
        CHECK(twice.values[k] == ref.values[k]);
    }
}

TEST_CASE("orientation reversal conjugates the drive") {
    const Waveform ccw = circle(Orientation::CCW, 190.0, 40.0, 512);
    const Waveform cw = circle(Orientation::CW, 190.0, 40.0, 512);
    for (std::size_t k = 0; k < ccw.values.size(); ++k) {
        CHECK(cw.values[k].real() == doctest::Approx(ccw.values[k].real()).epsilon(1e-13));
        CHECK(cw.values[k].imag() == doctest::Approx(-ccw.values[k].imag()).epsilon(1e-13));
    }
}

TEST_CASE("amplitude scaling is exact") {
    const Waveform w1 = circle(Orientation::CCW, 100.0, 40.0, 256);
    const Waveform w2 = make_path(
        PathSpec(PathShape::Circle, Orientation::CCW, 2.0 * to_angular(100.0), 40.0, 256));
    for (std::size_t k = 0; k < w1.values.size(); ++k) {
        CHECK(w2.values[k] == 2.0 * w1.values[k]);
    }
}

TEST_CASE("signed areas match the closed forms") {
    const double eps0 = to_angular(200.0);
    const double disc = kPi * (eps0 / 2.0) * (eps0 / 2.0);

    const double a_ccw = signed_area(contour_of(
        make_path(PathSpec(PathShape::Circle, Orientation::CCW, eps0, 100.0, 4096))));
    const double a_cw = signed_area(contour_of(
        make_path(PathSpec(PathShape::Circle, Orientation::CW, eps0, 100.0, 4096))));
    CHECK(a_ccw == doctest::Approx(disc).epsilon(1e-6));
    CHECK(a_cw == doctest::Approx(-disc).epsilon(1e-6));

    const double a_semi = signed_area(contour_of(
        make_path(PathSpec(PathShape::Semicircle, Orientation::CCW, eps0, 100.0, 4096))));
    CHECK(a_semi == doctest::Approx(0.5 * disc).epsilon(1e-5));

    const double a_square = signed_area(contour_of(
        make_path(PathSpec(PathShape::Square, Orientation::CCW, eps0, 100.0, 4096))));
    CHECK(a_square == doctest::Approx(0.5 * eps0 * eps0).epsilon(1e-12));
    // The diamond-to-circle area ratio is 2/pi at equal span.
    CHECK(a_square / a_ccw == doctest::Approx(2.0 / kPi).epsilon(1e-5));

    const double a_eight = signed_area(contour_of(
        make_path(PathSpec(PathShape::FigureEight, Orientation::CCW, eps0, 100.0, 4096))));
    CHECK(std::abs(a_eight) < 1e-6 * eps0 * eps0);
}

TEST_CASE("contour validation") {
    CHECK_THROWS_AS(ClosedContour({cx(0, 0), cx(1, 0), cx(0, 1)}), validation_error);  // open
    CHECK_THROWS_AS(ClosedContour({cx(0, 0), cx(1, 0), cx(0, 0)}), validation_error);  // 2 distinct
    CHECK_NOTHROW(ClosedContour({cx(0, 0), cx(1, 0), cx(0, 1), cx(0, 0)}));

    Waveform open_w;
    open_w.dt = 1.0;
    open_w.values = {cx(0, 0), cx(1, 0), cx(1e-9, 0)};
    CHECK_THROWS_AS(contour_of(open_w), validation_error);
}

TEST_CASE("circle spectrum has exactly two lines") {
    const double eps0 = to_angular(190.0);
    const double t = 40.0;
    const Waveform ccw = circle(Orientation::CCW, 190.0, t, 256);
    const auto lines = drive_spectrum(ccw);
    REQUIRE(lines.size() == 256);

    const double omega0 = kTwoPi / t;
    double stray = 0.0;
    for (const SpectralLine& line : lines) {
        if (std::abs(line.offset) < 1e-12) {
            // Carrier component eps0/2.
            CHECK(line.amplitude.real() == doctest::Approx(eps0 / 2.0).epsilon(1e-12));
            CHECK(std::abs(line.amplitude.imag()) < 1e-12);
        } else if (std::abs(line.offset - omega0) < 1e-9) {
            // Single rotating component -eps0/2 at +2 pi / T.
            CHECK(line.amplitude.real() == doctest::Approx(-eps0 / 2.0).epsilon(1e-12));
            CHECK(std::abs(line.amplitude.imag()) < 1e-12);
        } else {
            stray = std::max(stray, std::abs(line.amplitude));
        }
    }
    CHECK(stray < 1e-12 * eps0);

    // The mirrored orientation puts the rotating line at -2 pi / T.
    const auto cw_lines = drive_spectrum(circle(Orientation::CW, 190.0, t, 256));
    for (const SpectralLine& line : cw_lines) {
        if (std::abs(line.offset + omega0) < 1e-9) {
            CHECK(line.amplitude.real() == doctest::Approx(-eps0 / 2.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("straight spectrum matches the sine-arch Fourier series") {
    const double eps0 = to_angular(190.0);
    const std::size_t m = 4096;
    const Waveform w = make_path(PathSpec(PathShape::Straight, Orientation::CCW, eps0, 40.0, m));
    const auto lines = drive_spectrum(w);

    // Discrete mean of sin(pi j / m) is cot(pi / 2m) / m; its limit is 2/pi.
    const double c0_exact = eps0 / (std::tan(kPi / (2.0 * static_cast<double>(m))) *
                                    static_cast<double>(m));
    const double omega0 = kTwoPi / 40.0;
    for (const SpectralLine& line : lines) {
        if (std::abs(line.offset) < 1e-12) {
            CHECK(line.amplitude.real() == doctest::Approx(c0_exact).epsilon(1e-12));
            CHECK(line.amplitude.real() == doctest::Approx(2.0 * eps0 / kPi).epsilon(1e-6));
        } else if (std::abs(std::abs(line.offset) - omega0) < 1e-9) {
            // k = +/-1 coefficients of sin(pi u): 2/(pi (1 - 4)) = -2/(3 pi).
            CHECK(line.amplitude.real() ==
                  doctest::Approx(-2.0 * eps0 / (3.0 * kPi)).epsilon(1e-5));
        }
    }
}

TEST_CASE("spectrum satisfies Parseval") {
    const Waveform w = make_path(
        PathSpec(PathShape::FigureEight, Orientation::CW, to_angular(150.0), 60.0, 512));
    const auto lines = drive_spectrum(w);
    double freq_power = 0.0;
    for (const SpectralLine& line : lines) freq_power += std::norm(line.amplitude);
    double time_power = 0.0;
    for (std::size_t j = 0; j < w.steps(); ++j) time_power += std::norm(w.values[j]);
    time_power /= static_cast<double>(w.steps());
    CHECK(freq_power == doctest::Approx(time_power).epsilon(1e-10));
}

TEST_CASE("spectrum offsets ascend and cover (-m/2, m/2]") {
    const Waveform w = circle(Orientation::CCW, 100.0, 20.0, 64);
    const auto lines = drive_spectrum(w);
    REQUIRE(lines.size() == 64);
    const double step = kTwoPi / 20.0;  // one harmonic of the pulse period
    CHECK(lines.front().offset == doctest::Approx(-31.0 * step).epsilon(1e-12));
    CHECK(lines.back().offset == doctest::Approx(32.0 * step).epsilon(1e-12));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK(lines[i].offset - lines[i - 1].offset == doctest::Approx(step).epsilon(1e-9));
    }
}

TEST_CASE("waveform_csv is tagged, headed, and deterministic") {
    const Waveform w = circle(Orientation::CCW, 100.0, 20.0, 64);
    const std::string csv = waveform_csv(w);
    CHECK(csv.rfind("# geomphase v1\nt_ns,eps_I,eps_Q\n0,0,0\n", 0) == 0);
    CHECK(csv == waveform_csv(w));
    std::size_t rows = 0;
    for (char c : csv) rows += c == '\n';
    CHECK(rows == 2 + 65);
}
