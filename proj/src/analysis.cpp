#include "geomphase/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "geomphase/errors.hpp"
#include "geomphase/paths.hpp"
#include "geomphase/version.hpp"

namespace geomphase {

namespace {

void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

// Solve the k x k normal equations G a = b in place (Gaussian elimination
// with partial pivoting; k <= 3 here).
std::vector<double> solve_normal(std::vector<std::vector<double>> g, std::vector<double> b) {
    const std::size_t k = b.size();
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r) {
            if (std::abs(g[r][col]) > std::abs(g[piv][col])) piv = r;
        }
        if (std::abs(g[piv][col]) < 1e-14) {
            throw numeric_error("least-squares fit: rank-deficient normal equations");
        }
        std::swap(g[col], g[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < k; ++r) {
            const double f = g[r][col] / g[col][col];
            for (std::size_t c = col; c < k; ++c) g[r][c] -= f * g[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> a(k);
    for (std::size_t i = k; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < k; ++c) s -= g[i][c] * a[c];
        a[i] = s / g[i][i];
    }
    return a;
}

// Least squares of y on the rows of `design` (n x k); fills residual stats.
std::vector<double> least_squares(const std::vector<std::vector<double>>& design,
                                  const std::vector<double>& y,
                                  double& rms_residual, double& quality) {
    const std::size_t n = y.size();
    const std::size_t k = design.front().size();
    std::vector<std::vector<double>> g(k, std::vector<double>(k, 0.0));
    std::vector<double> b(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < k; ++r) {
            b[r] += design[i][r] * y[i];
            for (std::size_t c = r; c < k; ++c) g[r][c] += design[i][r] * design[i][c];
        }
    }
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < r; ++c) g[r][c] = g[c][r];
    }
    std::vector<double> a = solve_normal(std::move(g), std::move(b));

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = 0.0;
        for (std::size_t c = 0; c < k; ++c) fit += design[i][c] * a[c];
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    rms_residual = std::sqrt(ss_res / static_cast<double>(n));
    quality = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return a;
}

}  // namespace

CoherenceResult measured_phase(const Waveform& w, const SystemParams& p) {
    const auto [tg, te] = evolve_joint(w, p);
    return coherence(tg, te);
}

double geometric_phase_measured(const PathSpec& spec, const SystemParams& p) {
    if (spec.shape == PathShape::Straight) {
        throw validation_error("geometric_phase_measured: the straight path is its own reference");
    }
    const Waveform shaped = make_path(spec);
    const Waveform ref = straight_reference(shaped);
    const cx c_shape = measured_phase(shaped, p).c;
    const cx c_ref = measured_phase(ref, p).c;
    return std::arg(c_shape * std::conj(c_ref));
}

std::vector<double> unwrap_phase(const std::vector<double>& series) {
    std::vector<double> out;
    out.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!std::isfinite(series[i])) {
            throw validation_error("unwrap_phase: non-finite input");
        }
        if (i == 0) {
            out.push_back(series[0]);
        } else {
            out.push_back(out.back() + std::remainder(series[i] - series[i - 1], kTwoPi));
        }
    }
    return out;
}

std::vector<double> anchor_phases(const std::vector<double>& series, double reference) {
    if (series.empty()) {
        throw validation_error("anchor_phases: empty series");
    }
    const double shift = kTwoPi * std::round((reference - series.back()) / kTwoPi);
    std::vector<double> out = series;
    for (double& v : out) v += shift;
    return out;
}

double FitResult::coefficient(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return coefficients[i];
    }
    throw validation_error("FitResult: no coefficient named '" + name + "'");
}

FitResult fit_inverse_t(const std::vector<double>& t, const std::vector<double>& y, int order) {
    if (order != 1 && order != 2) {
        throw validation_error("fit_inverse_t: order must be 1 or 2");
    }
    const std::size_t k = static_cast<std::size_t>(order) + 1;
    if (t.size() != y.size() || t.size() < k + 1) {
        throw validation_error("fit_inverse_t: need at least order+2 matching points");
    }
    for (double v : t) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw validation_error("fit_inverse_t: t values must be finite and positive");
        }
    }

    // Regress on powers of u = t_ref/t, with t_ref the median t, so the
    // normal equations stay well conditioned for t spanning decades.
    std::vector<double> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    const double t_ref = sorted[sorted.size() / 2];

    std::vector<std::vector<double>> design(t.size(), std::vector<double>(k));
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double u = t_ref / t[i];
        double p = 1.0;
        for (std::size_t c = 0; c < k; ++c) {
            design[i][c] = p;
            p *= u;
        }
    }

    FitResult r;
    std::vector<double> a = least_squares(design, y, r.rms_residual, r.quality);
    r.basis = order == 1 ? "1, 1/t" : "1, 1/t, 1/t^2";
    r.names = {"const", "inv_t"};
    r.coefficients = {a[0], a[1] * t_ref};
    if (order == 2) {
        r.names.push_back("inv_t2");
        r.coefficients.push_back(a[2] * t_ref * t_ref);
    }
    return r;
}

FitResult fit_gaussian_r(const std::vector<double>& x, const std::vector<double>& r) {
    if (x.size() != r.size() || x.size() < 3) {
        throw validation_error("fit_gaussian_r: need at least 3 matching points");
    }
    std::vector<double> log_r(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0) || r[i] > 1.0 || !std::isfinite(x[i])) {
            throw validation_error("fit_gaussian_r: contrast values must lie in (0, 1]");
        }
        log_r[i] = std::log(r[i]);
    }

    std::vector<std::vector<double>> design(x.size(), std::vector<double>(2));
    for (std::size_t i = 0; i < x.size(); ++i) {
        design[i][0] = 1.0;
        design[i][1] = x[i] * x[i];
    }

    FitResult out;
    std::vector<double> a = least_squares(design, log_r, out.rms_residual, out.quality);
    out.basis = "ln r = ln r0 - c x^2";
    out.names = {"r0", "c"};
    out.coefficients = {std::exp(a[0]), -a[1]};
    return out;
}

ExtremaResult find_r_extrema(const std::vector<double>& t, const std::vector<double>& r) {
    if (t.size() != r.size() || t.size() < 3) {
        throw validation_error("find_r_extrema: need at least 3 matching points");
    }
    ExtremaResult out;
    std::size_t last_idx = 0;
    bool have_last = false;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        // Strict rise into i, non-rise out of it: a plateau registers once,
        // at its left edge.
        if (r[i] > r[i - 1] && r[i + 1] <= r[i]) {
            out.t_maxima.push_back(t[i]);
            if (have_last && i - last_idx < 8) out.sparse_grid_warning = true;
            last_idx = i;
            have_last = true;
        }
    }
    return out;
}

void SweepTable::add_column(const std::string& name, std::vector<double> values) {
    columns.push_back(Column{name, std::move(values)});
}

const SweepTable::Column& SweepTable::column(const std::string& name) const {
    for (const Column& c : columns) {
        if (c.name == name) return c;
    }
    throw validation_error("SweepTable: no column named '" + name + "'");
}

void SweepTable::validate() const {
    if (x_name.empty() || x.empty()) {
        throw validation_error("SweepTable: empty independent variable");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) {
            throw validation_error("SweepTable: independent variable must increase strictly");
        }
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].values.size() != x.size()) {
            throw validation_error("SweepTable: column '" + columns[i].name + "' length mismatch");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (columns[j].name == columns[i].name) {
                throw validation_error("SweepTable: duplicate column '" + columns[i].name + "'");
            }
        }
    }
}

std::string SweepTable::to_csv() const {
    validate();
    std::string out = kCsvTag;
    out += '\n';
    for (const auto& [key, value] : metadata) {
        out += "# " + key + "=" + value + "\n";
    }
    out += x_name;
    for (const Column& c : columns) {
        out += ',';
        out += c.name;
    }
    out += '\n';
    for (std::size_t i = 0; i < x.size(); ++i) {
        append_num(out, x[i]);
        for (const Column& c : columns) {
            out += ',';
            append_num(out, c.values[i]);
        }
        out += '\n';
    }
    return out;
}

std::string SweepTable::to_json() const {
    validate();
    nlohmann::json doc;
    doc["x_name"] = x_name;
    doc["x"] = x;
    nlohmann::json cols = nlohmann::json::object();
    for (const Column& c : columns) cols[c.name] = c.values;
    doc["columns"] = cols;
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [key, value] : metadata) meta[key] = value;
    doc["metadata"] = meta;
    return doc.dump(2) + "\n";
}

}  // namespace geomphase
