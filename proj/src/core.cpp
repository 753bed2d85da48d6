#include "geomphase/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "geomphase/errors.hpp"

namespace geomphase {

double to_angular(double f_mhz) {
    if (!std::isfinite(f_mhz)) {
        throw validation_error("to_angular: frequency must be finite");
    }
    // MHz = 1e-3 cycles/ns, so omega = 2*pi*f*1e-3 rad/ns.
    return kTwoPi * f_mhz * 1e-3;
}

SystemParams::SystemParams(double delta_rad_ns, double chi_rad_ns, double kappa_rad_ns)
    : delta(delta_rad_ns), chi(chi_rad_ns), kappa(kappa_rad_ns) {
    if (!std::isfinite(delta) || !std::isfinite(chi) || !std::isfinite(kappa)) {
        throw validation_error("SystemParams: delta, chi, kappa must be finite");
    }
    if (delta == 0.0) {
        throw validation_error("SystemParams: delta must be nonzero (drive on resonance with the bare mode is outside the dispersive model)");
    }
    if (delta + 2.0 * chi == 0.0) {
        throw validation_error("SystemParams: delta + 2*chi must be nonzero (excited-branch detuning vanishes)");
    }
    if (kappa < 0.0) {
        throw validation_error("SystemParams: kappa must be >= 0");
    }
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_double_or_throw(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v.empty()) throw config_error("config: empty value for key '" + key + "'");
    char* end = nullptr;
    double out = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || !std::isfinite(out)) {
        throw config_error("config: key '" + key + "' has non-numeric value '" + v + "'");
    }
    return out;
}

}  // namespace

PathShape parse_shape(std::string_view s) {
    const std::string v = lower(trim(s));
    if (v == "circle") return PathShape::Circle;
    if (v == "semicircle") return PathShape::Semicircle;
    if (v == "square") return PathShape::Square;
    if (v == "figure-eight" || v == "figure_eight" || v == "figure8") return PathShape::FigureEight;
    if (v == "straight") return PathShape::Straight;
    throw config_error("config: unknown shape '" + std::string(s) + "'");
}

Orientation parse_orientation(std::string_view s) {
    const std::string v = lower(trim(s));
    if (v == "ccw") return Orientation::CCW;
    if (v == "cw") return Orientation::CW;
    throw config_error("config: unknown orientation '" + std::string(s) + "' (expected ccw or cw)");
}

std::string to_string(PathShape s) {
    switch (s) {
        case PathShape::Circle: return "circle";
        case PathShape::Semicircle: return "semicircle";
        case PathShape::Square: return "square";
        case PathShape::FigureEight: return "figure-eight";
        case PathShape::Straight: return "straight";
    }
    return "?";
}

std::string to_string(Orientation o) {
    return o == Orientation::CCW ? "ccw" : "cw";
}

PathSpec::PathSpec(PathShape shape_, Orientation orientation_, double eps0_rad_ns,
                   double duration_ns, std::size_t samples_)
    : shape(shape_), orientation(orientation_), eps0(eps0_rad_ns),
      duration(duration_ns), samples(samples_) {
    if (!std::isfinite(eps0) || eps0 < 0.0) {
        throw validation_error("PathSpec: eps0 must be finite and >= 0");
    }
    if (!std::isfinite(duration) || duration <= 0.0) {
        throw validation_error("PathSpec: duration must be finite and > 0");
    }
    if (samples < 16) {
        throw validation_error("PathSpec: samples must be >= 16");
    }
}

double Waveform::max_abs() const {
    double m = 0.0;
    for (const cx& v : values) m = std::max(m, std::abs(v));
    return m;
}

void Waveform::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw validation_error("Waveform: dt must be finite and > 0");
    }
    if (values.size() < 2) {
        throw validation_error("Waveform: need at least 2 samples");
    }
    for (const cx& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw validation_error("Waveform: non-finite sample");
        }
    }
}

void Waveform::validate_cyclic() const {
    validate();
    if (values.front() != cx(0.0, 0.0) || values.back() != cx(0.0, 0.0)) {
        throw validation_error("Waveform: cyclic pulse must start and end at exactly zero");
    }
}

const std::vector<std::string>& ConfigDoc::known_keys() {
    static const std::vector<std::string> keys = {
        "delta_mhz", "chi_mhz", "kappa_mhz", "eps0_mhz",
        "duration_ns", "samples", "shape", "orientation",
    };
    return keys;
}

ConfigDoc ConfigDoc::parse(std::string_view text) {
    ConfigDoc doc;
    std::string current;
    std::vector<std::string> pieces;
    for (char c : text) {
        if (c == '\n' || c == ',') {
            pieces.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    pieces.push_back(current);

    const auto& keys = known_keys();
    for (const std::string& raw : pieces) {
        std::string entry = raw;
        if (auto hash = entry.find('#'); hash != std::string::npos) {
            entry.erase(hash);
        }
        entry = trim(entry);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw config_error("config: malformed entry '" + entry + "' (expected key=value)");
        }
        const std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw config_error("config: unknown key '" + key + "'");
        }
        if (doc.entries_.count(key)) {
            throw config_error("config: duplicate key '" + key + "'");
        }
        if (value.empty()) {
            throw config_error("config: empty value for key '" + key + "'");
        }
        doc.entries_[key] = value;
    }
    return doc;
}

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("config: cannot open file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

bool ConfigDoc::has(const std::string& key) const { return entries_.count(key) != 0; }

double ConfigDoc::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    return parse_double_or_throw(key, it->second);
}

long ConfigDoc::get_int(const std::string& key, long fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    const long out = static_cast<long>(v);
    if (static_cast<double>(out) != v) {
        throw config_error("config: key '" + key + "' must be an integer");
    }
    return out;
}

std::string ConfigDoc::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

void ConfigDoc::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

SystemParams params_from_doc(const ConfigDoc& doc) {
    if (!doc.has("delta_mhz")) {
        throw config_error("config: missing required key 'delta_mhz'");
    }
    const double delta = to_angular(doc.get_double("delta_mhz", 0.0));
    const double chi = to_angular(doc.get_double("chi_mhz", -1.0));
    const double kappa = to_angular(doc.get_double("kappa_mhz", 0.0));
    return SystemParams(delta, chi, kappa);
}

SystemParams params_from_config(std::string_view text) {
    return params_from_doc(ConfigDoc::parse(text));
}

PathSpec pathspec_from_doc(const ConfigDoc& doc) {
    const double eps0 = to_angular(doc.get_double("eps0_mhz", 370.0));
    const double duration = doc.get_double("duration_ns", 300.0);
    const long samples = doc.get_int("samples", 2048);
    if (samples <= 0) {
        throw config_error("config: 'samples' must be positive");
    }
    const PathShape shape = parse_shape(doc.get_string("shape", "circle"));
    const Orientation orientation = parse_orientation(doc.get_string("orientation", "ccw"));
    return PathSpec(shape, orientation, eps0, duration, static_cast<std::size_t>(samples));
}

}  // namespace geomphase
