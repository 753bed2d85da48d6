#include "geomphase/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "geomphase/detail/parallel.hpp"
#include "geomphase/detail/stepping.hpp"
#include "geomphase/dynamics.hpp"
#include "geomphase/errors.hpp"
#include "geomphase/fock.hpp"
#include "geomphase/paths.hpp"
#include "geomphase/svg.hpp"
#include "geomphase/version.hpp"

namespace geomphase {

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_label(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

double parse_num(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
        throw validation_error("grid key '" + key + "': not a number: '" + text + "'");
    }
    return v;
}

double grid_num(const ExperimentSpec& spec, const std::string& key) {
    const auto it = spec.grid.find(key);
    if (it == spec.grid.end()) {
        throw validation_error("experiment '" + spec.name + "': missing grid key '" + key + "'");
    }
    return parse_num(key, it->second);
}

std::vector<double> grid_list(const ExperimentSpec& spec, const std::string& key) {
    const auto it = spec.grid.find(key);
    if (it == spec.grid.end()) {
        throw validation_error("experiment '" + spec.name + "': missing grid key '" + key + "'");
    }
    std::vector<double> values;
    std::string item;
    for (std::size_t pos = 0; pos <= it->second.size(); ++pos) {
        if (pos == it->second.size() || it->second[pos] == ',') {
            if (!item.empty()) values.push_back(parse_num(key, item));
            item.clear();
        } else if (!std::isspace(static_cast<unsigned char>(it->second[pos]))) {
            item += it->second[pos];
        }
    }
    if (values.empty()) {
        throw validation_error("grid key '" + key + "': empty list");
    }
    return values;
}

std::vector<double> range_grid(const ExperimentSpec& spec, const std::string& start_key,
                               const std::string& stop_key, const std::string& step_key) {
    const double start = grid_num(spec, start_key);
    const double stop = grid_num(spec, stop_key);
    const double step = grid_num(spec, step_key);
    if (step <= 0.0) {
        throw validation_error("grid key '" + step_key + "': step must be positive");
    }
    if (stop < start) {
        throw validation_error("grid: '" + stop_key + "' must be >= '" + start_key + "'");
    }
    const double count = std::floor((stop - start) / step + 1e-9) + 1.0;
    if (count > 100000.0) {
        throw validation_error("grid: more than 100000 points requested");
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
        values.push_back(start + static_cast<double>(i) * step);
    }
    return values;
}

void base_metadata(SweepTable& table, const ExperimentSpec& spec) {
    const SystemParams p = spec.params();
    const PathSpec ps = pathspec_from_doc(spec.config);
    const double mhz = to_angular(1.0);
    table.metadata["experiment"] = spec.name;
    table.metadata["version"] = kVersion;
    table.metadata["delta_mhz"] = fmt_num(p.delta / mhz);
    table.metadata["chi_mhz"] = fmt_num(p.chi / mhz);
    table.metadata["kappa_mhz"] = fmt_num(p.kappa / mhz);
    table.metadata["eps0_mhz"] = fmt_num(ps.eps0 / mhz);
    table.metadata["duration_ns"] = fmt_num(ps.duration);
    table.metadata["samples"] = std::to_string(ps.samples);
    table.metadata["shape"] = to_string(ps.shape);
    table.metadata["orientation"] = to_string(ps.orientation);
    for (const auto& [key, value] : spec.grid) {
        table.metadata["grid_" + key] = value;
    }
    table.metadata["solver_max_phase_per_step"] = fmt_num(detail::kMaxPhasePerStep);
    table.metadata["solver_min_total_steps"] = std::to_string(detail::kMinTotalSteps);
    if (p.kappa > 0.0) {
        // The phase law stays in unitary form when the field is damped.
        table.metadata["damped_phase_approximation"] = "true";
    }
}

// The closed shape the experiment traces; Straight has no enclosed area and
// therefore no relative phase to measure against itself.
PathShape closed_shape(const PathSpec& ps, const std::string& name) {
    if (ps.shape == PathShape::Straight) {
        throw validation_error("experiment '" + name + "' needs a closed drive shape");
    }
    return ps.shape;
}

struct Outputs {
    SweepTable table;
    std::string svg;
};

// Both orientations of one closed pulse plus the shared straight reference.
struct OrientedCoherences {
    cx c_ccw;
    cx c_cw;
    cx c_ref;
    AdiabaticPhases ad_ccw;
    AdiabaticPhases ad_cw;
    AdiabaticPhases ad_ref;
};

OrientedCoherences oriented_run(PathShape shape, double eps0, double duration,
                                std::size_t samples, const SystemParams& p) {
    const Waveform w_ccw = make_path(PathSpec(shape, Orientation::CCW, eps0, duration, samples));
    const Waveform w_cw = make_path(PathSpec(shape, Orientation::CW, eps0, duration, samples));
    const Waveform w_ref = straight_reference(w_ccw);
    OrientedCoherences out;
    out.c_ccw = measured_phase(w_ccw, p).c;
    out.c_cw = measured_phase(w_cw, p).c;
    out.c_ref = measured_phase(w_ref, p).c;
    out.ad_ccw = adiabatic_phases(w_ccw, p);
    out.ad_cw = adiabatic_phases(w_cw, p);
    out.ad_ref = adiabatic_phases(w_ref, p);
    return out;
}

Outputs run_fig3a(const ExperimentSpec& spec) {
    const SystemParams p = spec.params();
    const PathSpec ps = pathspec_from_doc(spec.config);
    const PathShape shape = closed_shape(ps, spec.name);
    const std::vector<double> t = range_grid(spec, "t_start_ns", "t_stop_ns", "t_step_ns");

    std::vector<OrientedCoherences> rows(t.size());
    detail::parallel_for(t.size(), spec.jobs, [&](std::size_t i) {
        rows[i] = oriented_run(shape, ps.eps0, t[i], ps.samples, p);
    });

    std::vector<double> g_ccw(t.size()), g_cw(t.size()), g_st(t.size());
    std::vector<double> a_ccw(t.size()), a_cw(t.size()), a_st(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        g_ccw[i] = std::arg(rows[i].c_ccw);
        g_cw[i] = std::arg(rows[i].c_cw);
        g_st[i] = std::arg(rows[i].c_ref);
        a_ccw[i] = rows[i].ad_ccw.gamma_dyn + rows[i].ad_ccw.gamma_geo;
        a_cw[i] = rows[i].ad_cw.gamma_dyn + rows[i].ad_cw.gamma_geo;
        a_st[i] = rows[i].ad_ref.gamma_dyn;
    }
    // Total phases wind far beyond pi; unwrap along the sweep and pin the
    // winding number at the slowest pulse, where the closed-form limit holds.
    g_ccw = anchor_phases(unwrap_phase(g_ccw), a_ccw.back());
    g_cw = anchor_phases(unwrap_phase(g_cw), a_cw.back());
    g_st = anchor_phases(unwrap_phase(g_st), a_st.back());

    Outputs out;
    out.table.x_name = "t_ns";
    out.table.x = t;
    out.table.add_column("gamma_ccw", std::move(g_ccw));
    out.table.add_column("gamma_cw", std::move(g_cw));
    out.table.add_column("gamma_straight", std::move(g_st));
    out.table.add_column("gamma_ccw_adiabatic", std::move(a_ccw));
    out.table.add_column("gamma_cw_adiabatic", std::move(a_cw));
    out.table.add_column("gamma_straight_adiabatic", std::move(a_st));
    base_metadata(out.table, spec);
    out.table.metadata["gamma_geo_adiabatic_ccw"] = fmt_num(rows.back().ad_ccw.gamma_geo);
    out.table.metadata["gamma_geo_adiabatic_cw"] = fmt_num(rows.back().ad_cw.gamma_geo);
    out.svg = emit_svg(out.table, XYSeries::Style::Line,
                       {"fig3a: total phase vs pulse duration", "pulse duration (ns)", "phase (rad)"});
    return out;
}

Outputs run_fig3b(const ExperimentSpec& spec) {
    const SystemParams p = spec.params();
    const PathSpec ps = pathspec_from_doc(spec.config);
    const PathShape shape = closed_shape(ps, spec.name);
    const std::vector<double> t = range_grid(spec, "t_start_ns", "t_stop_ns", "t_step_ns");
    const int fit_order = static_cast<int>(grid_num(spec, "fit_order"));

    std::vector<OrientedCoherences> rows(t.size());
    detail::parallel_for(t.size(), spec.jobs, [&](std::size_t i) {
        rows[i] = oriented_run(shape, ps.eps0, t[i], ps.samples, p);
    });

    std::vector<double> g_ccw(t.size()), g_cw(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        g_ccw[i] = std::arg(rows[i].c_ccw * std::conj(rows[i].c_ref));
        g_cw[i] = std::arg(rows[i].c_cw * std::conj(rows[i].c_ref));
    }
    // The enclosed-area phase does not depend on duration, so the slow end
    // of the sweep anchors the winding number directly.
    g_ccw = anchor_phases(unwrap_phase(g_ccw), rows.back().ad_ccw.gamma_geo);
    g_cw = anchor_phases(unwrap_phase(g_cw), rows.back().ad_cw.gamma_geo);

    const FitResult fit_ccw = fit_inverse_t(t, g_ccw, fit_order);
    const FitResult fit_cw = fit_inverse_t(t, g_cw, fit_order);
    auto eval = [&](const FitResult& f, double tt) {
        double y = f.coefficients[0] + f.coefficients[1] / tt;
        if (f.coefficients.size() > 2) y += f.coefficients[2] / (tt * tt);
        return y;
    };
    std::vector<double> fit_col_ccw(t.size()), fit_col_cw(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        fit_col_ccw[i] = eval(fit_ccw, t[i]);
        fit_col_cw[i] = eval(fit_cw, t[i]);
    }

    Outputs out;
    out.table.x_name = "t_ns";
    out.table.x = t;
    out.table.add_column("gamma_g_ccw", std::move(g_ccw));
    out.table.add_column("gamma_g_cw", std::move(g_cw));
    out.table.add_column("gamma_g_ccw_fit", std::move(fit_col_ccw));
    out.table.add_column("gamma_g_cw_fit", std::move(fit_col_cw));
    base_metadata(out.table, spec);
    out.table.metadata["fit_basis"] = fit_ccw.basis;
    out.table.metadata["gamma_infinity_ccw"] = fmt_num(fit_ccw.coefficients[0]);
    out.table.metadata["gamma_infinity_cw"] = fmt_num(fit_cw.coefficients[0]);
    out.table.metadata["fit_rms_ccw"] = fmt_num(fit_ccw.rms_residual);
    out.table.metadata["fit_rms_cw"] = fmt_num(fit_cw.rms_residual);
    out.table.metadata["gamma_geo_adiabatic_ccw"] = fmt_num(rows.back().ad_ccw.gamma_geo);
    out.table.metadata["gamma_geo_adiabatic_cw"] = fmt_num(rows.back().ad_cw.gamma_geo);
    out.svg = emit_svg(out.table, XYSeries::Style::Scatter,
                       {"fig3b: enclosed-area phase vs pulse duration", "pulse duration (ns)",
                        "geometric phase (rad)"});
    return out;
}

Outputs run_fig3c(const ExperimentSpec& spec) {
    const SystemParams p = spec.params();
    const PathSpec ps = pathspec_from_doc(spec.config);
    const PathShape shape = closed_shape(ps, spec.name);
    const std::vector<double> eps_mhz = range_grid(spec, "eps0_start_mhz", "eps0_stop_mhz",
                                                   "eps0_step_mhz");

    std::vector<OrientedCoherences> rows(eps_mhz.size());
    detail::parallel_for(eps_mhz.size(), spec.jobs, [&](std::size_t i) {
        rows[i] = oriented_run(shape, to_angular(eps_mhz[i]), ps.duration, ps.samples, p);
    });

    const std::size_t n = eps_mhz.size();
    std::vector<double> g_ccw(n), g_cw(n), area_ccw(n), area_cw(n);
    for (std::size_t i = 0; i < n; ++i) {
        g_ccw[i] = std::arg(rows[i].c_ccw * std::conj(rows[i].c_ref));
        g_cw[i] = std::arg(rows[i].c_cw * std::conj(rows[i].c_ref));
        area_ccw[i] = rows[i].ad_ccw.delta_area;
        area_cw[i] = rows[i].ad_cw.delta_area;
    }
    g_ccw = anchor_phases(unwrap_phase(g_ccw), rows.back().ad_ccw.gamma_geo);
    g_cw = anchor_phases(unwrap_phase(g_cw), rows.back().ad_cw.gamma_geo);

    // Pool both orientations and regress phase on enclosed area.
    double sxx = 0.0, sx = 0.0, sy = 0.0, sxy = 0.0;
    const double m = 2.0 * static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        sx += area_ccw[i] + area_cw[i];
        sy += g_ccw[i] + g_cw[i];
        sxx += area_ccw[i] * area_ccw[i] + area_cw[i] * area_cw[i];
        sxy += area_ccw[i] * g_ccw[i] + area_cw[i] * g_cw[i];
    }
    const double det = m * sxx - sx * sx;
    if (std::abs(det) < 1e-14) {
        throw numeric_error("fig3c: degenerate area regression");
    }
    const double slope = (m * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / m;

    std::vector<double> fit_ccw(n), fit_cw(n);
    for (std::size_t i = 0; i < n; ++i) {
        fit_ccw[i] = intercept + slope * area_ccw[i];
        fit_cw[i] = intercept + slope * area_cw[i];
    }

    Outputs out;
    out.table.x_name = "eps0_mhz";
    out.table.x = eps_mhz;
    out.table.add_column("delta_area_ccw", std::move(area_ccw));
    out.table.add_column("gamma_g_ccw", std::move(g_ccw));
    out.table.add_column("gamma_g_ccw_fit", std::move(fit_ccw));
    out.table.add_column("delta_area_cw", std::move(area_cw));
    out.table.add_column("gamma_g_cw", std::move(g_cw));
    out.table.add_column("gamma_g_cw_fit", std::move(fit_cw));
    base_metadata(out.table, spec);
    out.table.metadata["slope_gamma_vs_area"] = fmt_num(slope);
    out.table.metadata["intercept_gamma_vs_area"] = fmt_num(intercept);
    out.svg = emit_svg(out.table, XYSeries::Style::Scatter,
                       {"fig3c: enclosed-area phase vs drive amplitude", "drive amplitude (MHz)",
                        "geometric phase (rad)"});
    return out;
}

Outputs run_fig3d(const ExperimentSpec& spec) {
    const PathSpec ps = pathspec_from_doc(spec.config);
    const PathShape shape = closed_shape(ps, spec.name);
    const double d_min = grid_num(spec, "delta_min_mhz");
    const double d_max = grid_num(spec, "delta_max_mhz");
    const double d_step = grid_num(spec, "delta_step_mhz");
    if (d_min <= 0.0 || d_max < d_min || d_step <= 0.0) {
        throw validation_error("fig3d grid: need 0 < delta_min_mhz <= delta_max_mhz and positive step");
    }
    const double chi = to_angular(spec.config.get_double("chi_mhz", -1.0));
    const double kappa = to_angular(spec.config.get_double("kappa_mhz", 0.0));
    const Orientation orient = ps.orientation;

    // Both detuning signs, negative side first so the axis increases.
    std::vector<double> deltas;
    for (double d = -d_max; d <= -d_min + 1e-9; d += d_step) deltas.push_back(d);
    for (double d = d_min; d <= d_max + 1e-9; d += d_step) deltas.push_back(d);

    const Waveform w = make_path(PathSpec(shape, orient, ps.eps0, ps.duration, ps.samples));
    const Waveform w_ref = straight_reference(w);

    std::vector<double> g(deltas.size()), g_ad(deltas.size());
    detail::parallel_for(deltas.size(), spec.jobs, [&](std::size_t i) {
        const SystemParams p(to_angular(deltas[i]), chi, kappa);
        const cx c_shape = measured_phase(w, p).c;
        const cx c_ref = measured_phase(w_ref, p).c;
        g[i] = std::arg(c_shape * std::conj(c_ref));
        g_ad[i] = adiabatic_phases(w, p).gamma_geo;
    });

    Outputs out;
    out.table.x_name = "delta_mhz";
    out.table.x = deltas;
    out.table.add_column("gamma_g", std::move(g));
    out.table.add_column("gamma_g_adiabatic", std::move(g_ad));
    base_metadata(out.table, spec);
    // Reported as principal values: the default grid keeps |gamma| < pi.
    out.table.metadata["phase_convention"] = "principal";
    out.svg = emit_svg(out.table, XYSeries::Style::Scatter,
                       {"fig3d: enclosed-area phase vs detuning", "detuning (MHz)",
                        "geometric phase (rad)"});
    return out;
}

Outputs run_fig4a(const ExperimentSpec& spec) {
    const SystemParams p = spec.params();
    const PathSpec ps = pathspec_from_doc(spec.config);
    const PathShape shape = closed_shape(ps, spec.name);
    const std::vector<double> eps_mhz = range_grid(spec, "eps0_start_mhz", "eps0_stop_mhz",
                                                   "eps0_step_mhz");
    const std::vector<double> t_list = grid_list(spec, "t_list_ns");

    const std::size_t n = eps_mhz.size();
    const std::size_t k = t_list.size();
    // Row-major slabs: per amplitude, contrasts for every (duration, orientation).
    std::vector<double> r_ccw(n * k), r_cw(n * k);
    detail::parallel_for(n, spec.jobs, [&](std::size_t i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double eps0 = to_angular(eps_mhz[i]);
            const Waveform w1 = make_path(PathSpec(shape, Orientation::CCW, eps0, t_list[j], ps.samples));
            const Waveform w2 = make_path(PathSpec(shape, Orientation::CW, eps0, t_list[j], ps.samples));
            r_ccw[i * k + j] = measured_phase(w1, p).r;
            r_cw[i * k + j] = measured_phase(w2, p).r;
        }
    });

    // Amplitudes in rad/ns for the Gaussian fits (physical units of eps0).
    std::vector<double> eps_rad(n);
    for (std::size_t i = 0; i < n; ++i) eps_rad[i] = to_angular(eps_mhz[i]);

    Outputs out;
    out.table.x_name = "eps0_mhz";
    out.table.x = eps_mhz;
    base_metadata(out.table, spec);
    for (std::size_t j = 0; j < k; ++j) {
        for (const bool ccw : {true, false}) {
            const std::vector<double>& slab = ccw ? r_ccw : r_cw;
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = slab[i * k + j];
            const std::string tag = std::string(ccw ? "r_ccw_t" : "r_cw_t") + fmt_label(t_list[j]);
            const FitResult fit = fit_gaussian_r(eps_rad, col);
            std::vector<double> fit_col(n);
            for (std::size_t i = 0; i < n; ++i) {
                fit_col[i] = fit.coefficients[0] *
                             std::exp(-fit.coefficients[1] * eps_rad[i] * eps_rad[i]);
            }
            out.table.add_column(tag, std::move(col));
            out.table.add_column(tag + "_fit", std::move(fit_col));
            out.table.metadata["fit_r0_" + tag] = fmt_num(fit.coefficients[0]);
            out.table.metadata["fit_c_" + tag] = fmt_num(fit.coefficients[1]);
            out.table.metadata["fit_rms_" + tag] = fmt_num(fit.rms_residual);
        }
    }
    out.svg = emit_svg(out.table, XYSeries::Style::Scatter,
                       {"fig4a: fringe contrast vs drive amplitude", "drive amplitude (MHz)",
                        "fringe contrast R"});
    return out;
}

Outputs run_fig4b(const ExperimentSpec& spec) {
    const SystemParams p = spec.params();
    const PathSpec ps = pathspec_from_doc(spec.config);
    const PathShape shape = closed_shape(ps, spec.name);
    const std::vector<double> t = range_grid(spec, "t_start_ns", "t_stop_ns", "t_step_ns");

    std::vector<double> r_ccw(t.size()), r_cw(t.size());
    detail::parallel_for(t.size(), spec.jobs, [&](std::size_t i) {
        const Waveform w1 = make_path(PathSpec(shape, Orientation::CCW, ps.eps0, t[i], ps.samples));
        const Waveform w2 = make_path(PathSpec(shape, Orientation::CW, ps.eps0, t[i], ps.samples));
        r_ccw[i] = measured_phase(w1, p).r;
        r_cw[i] = measured_phase(w2, p).r;
    });

    Outputs out;
    out.table.x_name = "t_ns";
    out.table.x = t;
    base_metadata(out.table, spec);
    for (const bool ccw : {true, false}) {
        const std::vector<double>& col = ccw ? r_ccw : r_cw;
        const std::string tag = ccw ? "ccw" : "cw";
        const ExtremaResult ex = find_r_extrema(t, col);
        std::string joined;
        for (std::size_t i = 0; i < ex.t_maxima.size(); ++i) {
            if (i) joined += ',';
            joined += fmt_num(ex.t_maxima[i]);
        }
        out.table.metadata["maxima_t_" + tag] = joined;
        if (ex.t_maxima.size() >= 2) {
            const double span = ex.t_maxima.back() - ex.t_maxima.front();
            out.table.metadata["maxima_mean_spacing_" + tag] =
                fmt_num(span / static_cast<double>(ex.t_maxima.size() - 1));
        }
        out.table.metadata["maxima_sparse_grid_" + tag] = ex.sparse_grid_warning ? "true" : "false";
    }
    out.table.add_column("r_ccw", std::move(r_ccw));
    out.table.add_column("r_cw", std::move(r_cw));
    out.svg = emit_svg(out.table, XYSeries::Style::Line,
                       {"fig4b: fringe contrast vs pulse duration", "pulse duration (ns)",
                        "fringe contrast R"});
    return out;
}

Outputs run_fig4c(const ExperimentSpec& spec) {
    const SystemParams p = spec.params();
    const PathSpec ps = pathspec_from_doc(spec.config);
    const Waveform w = make_path(ps);
    const auto [tg, te] = evolve_joint(w, p);
    const CoherenceResult coh = coherence(tg, te);

    const std::size_t n = w.values.size();
    std::vector<double> t(n);
    std::vector<double> re_g(n), im_g(n), th_g(n), re_e(n), im_e(n), th_e(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = w.dt * static_cast<double>(i);
        re_g[i] = tg.alpha[i].real();
        im_g[i] = tg.alpha[i].imag();
        th_g[i] = tg.theta[i];
        re_e[i] = te.alpha[i].real();
        im_e[i] = te.alpha[i].imag();
        th_e[i] = te.theta[i];
    }

    // Instantaneous steady state of each branch, for the phase-space plot.
    auto adiabatic_series = [&](double delta_s) {
        XYSeries s;
        s.x.resize(n);
        s.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const cx a = -w.values[i] / (2.0 * delta_s);
            s.x[i] = a.real();
            s.y[i] = a.imag();
        }
        s.style = XYSeries::Style::Line;
        return s;
    };

    Outputs out;
    out.table.x_name = "t_ns";
    out.table.x = t;
    out.table.add_column("re_alpha_g", re_g);
    out.table.add_column("im_alpha_g", im_g);
    out.table.add_column("theta_g", std::move(th_g));
    out.table.add_column("re_alpha_e", re_e);
    out.table.add_column("im_alpha_e", im_e);
    out.table.add_column("theta_e", std::move(th_e));
    base_metadata(out.table, spec);
    out.table.metadata["r_final"] = fmt_num(coh.r);
    out.table.metadata["gamma_final"] = fmt_num(coh.gamma);
    out.table.metadata["alpha_g_final"] = fmt_num(coh.alpha_g_final.real()) + "," +
                                          fmt_num(coh.alpha_g_final.imag());
    out.table.metadata["alpha_e_final"] = fmt_num(coh.alpha_e_final.real()) + "," +
                                          fmt_num(coh.alpha_e_final.imag());

    std::vector<XYSeries> series(4);
    series[0] = XYSeries{"alpha_g", re_g, im_g, XYSeries::Style::Line};
    series[1] = XYSeries{"alpha_e", re_e, im_e, XYSeries::Style::Line};
    series[2] = adiabatic_series(p.delta_g());
    series[2].label = "alpha_g_adiabatic";
    series[3] = adiabatic_series(p.delta_e());
    series[3].label = "alpha_e_adiabatic";
    out.svg = render_chart(series,
                           {"fig4c: coherent-state trajectories", "Re alpha", "Im alpha"},
                           out.table.metadata);
    return out;
}

Outputs run_oracle_check(const ExperimentSpec& spec) {
    const SystemParams p = spec.params();
    const PathSpec ps = pathspec_from_doc(spec.config);
    std::vector<double> t_list = grid_list(spec, "t_list_ns");
    for (std::size_t i = 1; i < t_list.size(); ++i) {
        if (!(t_list[i] > t_list[i - 1])) {
            throw validation_error("oracle-check: t_list_ns must increase strictly");
        }
    }
    const long dim_override = static_cast<long>(grid_num(spec, "n_truncation"));

    const std::size_t n = t_list.size();
    std::vector<OracleReport> reports(n);
    detail::parallel_for(n, spec.jobs, [&](std::size_t i) {
        const Waveform w = make_path(PathSpec(ps.shape, ps.orientation, ps.eps0, t_list[i],
                                              ps.samples));
        const std::size_t dim = dim_override > 0 ? static_cast<std::size_t>(dim_override)
                                                 : recommended_truncation(w, p);
        reports[i] = oracle_compare(w, p, dim);
    });

    constexpr double kMinFidelity = 0.999;
    constexpr double kMaxPhaseResidual = 1e-3;
    constexpr double kMaxRResidual = 1e-4;
    constexpr double kMaxNormDrift = 1e-6;

    Outputs out;
    out.table.x_name = "t_ns";
    out.table.x = t_list;
    std::vector<double> fg(n), fe(n), ph(n), rr(n), ng(n), ne(n), dims(n), dts(n);
    bool pass = true;
    for (std::size_t i = 0; i < n; ++i) {
        const OracleReport& r = reports[i];
        fg[i] = r.fidelity_g;
        fe[i] = r.fidelity_e;
        ph[i] = r.phase_residual_rad;
        rr[i] = r.r_residual;
        ng[i] = r.norm_drift_g;
        ne[i] = r.norm_drift_e;
        dims[i] = static_cast<double>(r.n_truncation);
        dts[i] = r.dt_ns;
        pass = pass && r.fidelity_g >= kMinFidelity && r.fidelity_e >= kMinFidelity &&
               r.phase_residual_rad <= kMaxPhaseResidual && r.r_residual <= kMaxRResidual &&
               r.norm_drift_g <= kMaxNormDrift && r.norm_drift_e <= kMaxNormDrift;
    }
    out.table.add_column("fidelity_g", std::move(fg));
    out.table.add_column("fidelity_e", std::move(fe));
    out.table.add_column("phase_residual_rad", std::move(ph));
    out.table.add_column("r_residual", std::move(rr));
    out.table.add_column("norm_drift_g", std::move(ng));
    out.table.add_column("norm_drift_e", std::move(ne));
    out.table.add_column("n_truncation", std::move(dims));
    out.table.add_column("dt_ns", std::move(dts));
    base_metadata(out.table, spec);
    out.table.metadata["threshold_min_fidelity"] = fmt_num(kMinFidelity);
    out.table.metadata["threshold_max_phase_residual_rad"] = fmt_num(kMaxPhaseResidual);
    out.table.metadata["threshold_max_r_residual"] = fmt_num(kMaxRResidual);
    out.table.metadata["threshold_max_norm_drift"] = fmt_num(kMaxNormDrift);
    out.table.metadata["thresholds_pass"] = pass ? "true" : "false";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw io_error("cannot open '" + path + "' for writing");
    }
    f << content;
    f.flush();
    if (!f) {
        throw io_error("write failed for '" + path + "'");
    }
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
    static const std::vector<ExperimentInfo> registry = {
        {"fig3a",
         "total phase vs pulse duration for both circle orientations and the straight reference",
         {{"delta_mhz", "40"}, {"eps0_mhz", "370"}},
         {{"t_start_ns", "30"}, {"t_stop_ns", "600"}, {"t_step_ns", "10"}}},
        {"fig3b",
         "enclosed-area phase vs pulse duration with inverse-duration fits",
         {{"delta_mhz", "40"}, {"eps0_mhz", "370"}},
         {{"t_start_ns", "100"}, {"t_stop_ns", "600"}, {"t_step_ns", "10"}, {"fit_order", "2"}}},
        {"fig3c",
         "enclosed-area phase vs drive amplitude at fixed duration, regressed on enclosed area",
         {{"delta_mhz", "40"}, {"eps0_mhz", "370"}, {"duration_ns", "300"}},
         {{"eps0_start_mhz", "20"}, {"eps0_stop_mhz", "370"}, {"eps0_step_mhz", "10"}}},
        {"fig3d",
         "enclosed-area phase vs detuning of both signs at slow drive",
         {{"delta_mhz", "40"}, {"eps0_mhz", "50"}, {"duration_ns", "2000"}},
         {{"delta_min_mhz", "15"}, {"delta_max_mhz", "100"}, {"delta_step_mhz", "5"}}},
        {"fig4a",
         "fringe contrast vs drive amplitude at several durations, with Gaussian fits",
         {{"delta_mhz", "40"}},
         {{"eps0_start_mhz", "0"}, {"eps0_stop_mhz", "250"}, {"eps0_step_mhz", "10"},
          {"t_list_ns", "20,30,50"}}},
        {"fig4b",
         "fringe contrast vs pulse duration for both orientations, with ringing maxima",
         {{"delta_mhz", "40"}, {"eps0_mhz", "190"}},
         {{"t_start_ns", "10"}, {"t_stop_ns", "150"}, {"t_step_ns", "1"}}},
        {"fig4c",
         "coherent-state trajectories of both branches for one fast pulse",
         {{"delta_mhz", "40"}, {"eps0_mhz", "190"}, {"duration_ns", "30"}},
         {}},
        {"oracle-check",
         "coherent solver versus truncated number-basis integrator",
         {{"delta_mhz", "40"}, {"eps0_mhz", "190"}},
         {{"t_list_ns", "30,100"}, {"n_truncation", "0"}}},
    };
    return registry;
}

const ExperimentInfo& experiment_info(const std::string& name) {
    for (const ExperimentInfo& info : experiment_registry()) {
        if (info.name == name) return info;
    }
    std::string known;
    for (const ExperimentInfo& info : experiment_registry()) {
        if (!known.empty()) known += ", ";
        known += info.name;
    }
    throw validation_error("unknown experiment '" + name + "' (known: " + known + ")");
}

SystemParams ExperimentSpec::params() const {
    return params_from_doc(config);
}

ExperimentSpec make_experiment(const std::string& name, const std::string& config_text,
                               const std::vector<std::pair<std::string, std::string>>& overrides,
                               const std::string& out_dir, std::size_t jobs) {
    const ExperimentInfo& info = experiment_info(name);

    ExperimentSpec spec;
    spec.name = name;
    spec.grid = info.grid_defaults;
    spec.out_dir = out_dir;
    spec.jobs = jobs;
    for (const auto& [key, value] : info.config_overlay) {
        spec.config.set(key, value);
    }
    if (!config_text.empty()) {
        const ConfigDoc file_doc = ConfigDoc::parse(config_text);
        for (const auto& [key, value] : file_doc.entries()) {
            spec.config.set(key, value);
        }
    }
    const auto& config_keys = ConfigDoc::known_keys();
    for (const auto& [key, value] : overrides) {
        if (std::find(config_keys.begin(), config_keys.end(), key) != config_keys.end()) {
            spec.config.set(key, value);
        } else if (spec.grid.count(key)) {
            spec.grid[key] = value;
        } else {
            std::string valid;
            for (const std::string& k : config_keys) valid += k + ", ";
            for (const auto& [k, unused] : info.grid_defaults) valid += k + ", ";
            if (!valid.empty()) valid.resize(valid.size() - 2);
            throw validation_error("unknown --set key '" + key + "' for experiment '" + name +
                                   "' (valid: " + valid + ")");
        }
    }
    return spec;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    Outputs out;
    if (spec.name == "fig3a") out = run_fig3a(spec);
    else if (spec.name == "fig3b") out = run_fig3b(spec);
    else if (spec.name == "fig3c") out = run_fig3c(spec);
    else if (spec.name == "fig3d") out = run_fig3d(spec);
    else if (spec.name == "fig4a") out = run_fig4a(spec);
    else if (spec.name == "fig4b") out = run_fig4b(spec);
    else if (spec.name == "fig4c") out = run_fig4c(spec);
    else if (spec.name == "oracle-check") out = run_oracle_check(spec);
    else experiment_info(spec.name);  // throws with the known-names list

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(spec.out_dir), ec);
    if (ec) {
        throw io_error("cannot create output directory '" + spec.out_dir + "': " + ec.message());
    }

    ExperimentResult result;
    const std::string stem = spec.out_dir + "/" + spec.name;
    write_file(stem + ".csv", out.table.to_csv());
    result.files_written.push_back(stem + ".csv");
    write_file(stem + ".json", out.table.to_json());
    result.files_written.push_back(stem + ".json");
    if (!out.svg.empty()) {
        write_file(stem + ".svg", out.svg);
        result.files_written.push_back(stem + ".svg");
    }
    result.table = std::move(out.table);
    return result;
}

}  // namespace geomphase
