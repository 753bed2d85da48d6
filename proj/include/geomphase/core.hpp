#pragma once

// Core value types, units and configuration parsing.
//
// Conventions used throughout the project:
//   hbar = 1, angular frequencies and rates in rad/ns, times in ns.
//   Frequencies quoted in config files are ordinary frequencies in MHz
//   (f = omega / 2 pi) and are converted with to_angular().

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace geomphase {

using cx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// MHz -> rad/ns.  to_angular(40) = 0.2513...; to_angular(370) = 2.3248...
double to_angular(double f_mhz);

// Static parameters of one simulated setup.  `delta` is the drive-resonator
// detuning seen with the qubit in its ground state; with the qubit excited the
// resonator is dispersively shifted and the drive sees delta + 2*chi.
// `kappa` is the resonator linewidth (0 = lossless).
struct SystemParams {
    double delta;
    double chi;
    double kappa;

    SystemParams(double delta_rad_ns, double chi_rad_ns, double kappa_rad_ns = 0.0);

    double delta_g() const { return delta; }
    double delta_e() const { return delta + 2.0 * chi; }
};

enum class PathShape { Circle, Semicircle, Square, FigureEight, Straight };
enum class Orientation { CCW, CW };

PathShape parse_shape(std::string_view s);
Orientation parse_orientation(std::string_view s);
std::string to_string(PathShape s);
std::string to_string(Orientation o);

// Geometric description of one drive pulse: a closed curve in the IQ plane of
// the drive envelope, its peak amplitude eps0 (rad/ns), total duration (ns)
// and the number of uniform time steps used when sampling it.
struct PathSpec {
    PathShape shape;
    Orientation orientation;
    double eps0;
    double duration;
    std::size_t samples;

    PathSpec(PathShape shape, Orientation orientation, double eps0_rad_ns,
             double duration_ns, std::size_t samples);
};

// Sampled complex drive envelope E(t_k) = eps_I + i eps_Q on the uniform grid
// t_k = k*dt, k = 0..steps().  Pulses produced by make_path() start and end at
// exactly zero; evolve_* accept any finite sampled envelope.
struct Waveform {
    double dt = 0.0;
    std::vector<cx> values;

    std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
    double duration() const { return dt * static_cast<double>(steps()); }
    double max_abs() const;

    // Throws validation_error unless the waveform is a well-formed sampled
    // envelope (dt > 0, >= 2 samples, all finite).
    void validate() const;
    // Additionally requires exact zero endpoints (cyclic drive pulse).
    void validate_cyclic() const;
};

// Flat key=value configuration document.  Entries are separated by newlines
// or commas; '#' starts a comment.  Only the keys listed in known_keys() are
// accepted; anything else is a config_error (catches typos early).
class ConfigDoc {
  public:
    static const std::vector<std::string>& known_keys();
    static ConfigDoc parse(std::string_view text);
    static ConfigDoc parse_file(const std::string& path);

    bool has(const std::string& key) const;
    // All getters throw config_error naming the key on malformed values.
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    void set(const std::string& key, const std::string& value);

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

// Extract SystemParams from a config document.  delta_mhz is required;
// chi_mhz defaults to -1 MHz and kappa_mhz to 0.
SystemParams params_from_config(std::string_view text);
SystemParams params_from_doc(const ConfigDoc& doc);

// Extract the drive-pulse description.  Defaults: eps0_mhz = 370,
// duration_ns = 300, samples = 2048, shape = circle, orientation = ccw.
PathSpec pathspec_from_doc(const ConfigDoc& doc);

}  // namespace geomphase
