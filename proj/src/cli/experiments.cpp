#include "qlink/cli/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <ostream>

#include "qlink/ent/lewenstein_sanpera.hpp"
#include "qlink/ent/measures.hpp"
#include "qlink/ent/ree.hpp"
#include "qlink/errors.hpp"
#include "qlink/fock/factories.hpp"
#include "qlink/fourport/channel.hpp"
#include "qlink/gaussian/separability.hpp"
#include "qlink/gaussian/thresholds.hpp"
#include "qlink/gaussian/transform.hpp"

namespace qlink::cli {

namespace {

constexpr double kLn2 = 0.6931471805599453;

/// Evaluate `body(i)` for every row index, in parallel, preserving row order
/// in the outputs the body writes. The first failing row (by index) is
/// rethrown with a row-indexed diagnostic so the caller sees which grid
/// point broke.
void parallel_rows(int n, const GridSpec& grid,
                   const std::function<void(int)>& body) {
    std::vector<std::exception_ptr> failures(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
            failures[static_cast<size_t>(i)] = std::current_exception();
        }
    }
    for (int i = 0; i < n; ++i) {
        const auto& ep = failures[static_cast<size_t>(i)];
        if (!ep) continue;
        const std::string at = "row " + std::to_string(i) + " (grid value " +
                               format_g12(grid.point(i)) + "): ";
        try {
            std::rethrow_exception(ep);
        } catch (const invariant_violation& e) {
            throw invariant_violation(at + e.what());
        } catch (const truncation_error& e) {
            throw truncation_error(at + e.what());
        } catch (const degenerate_device_error& e) {
            throw degenerate_device_error(at + e.what());
        } catch (const singular_threshold_error& e) {
            throw singular_threshold_error(at + e.what());
        } catch (const invalid_device_error& e) {
            throw invalid_device_error(at + e.what());
        } catch (const unsupported_dimension_error& e) {
            throw unsupported_dimension_error(at + e.what());
        } catch (const dimension_error& e) {
            throw dimension_error(at + e.what());
        } catch (const domain_error& e) {
            throw domain_error(at + e.what());
        } catch (const io_error& e) {
            throw io_error(at + e.what());
        } catch (const error& e) {
            throw error(at + e.what());
        } catch (const std::exception& e) {
            throw error(at + e.what());
        }
    }
}

// ---------------------------------------------------------------- bell decay

/// Channel output of a Bell state through two equal real-transmission
/// absorbing fibers with vacuum device input.
fourport::ChannelResult bell_through_fibers(fock::BellKind kind, double t_amp,
                                            const SweepConfig& cfg) {
    const int fc = cfg.field_cutoff_value();
    const fock::ModeLayout field({fc, fc});
    const fock::FockState input = fock::make_bell_state(kind, field);
    const fourport::DeviceSpec dev =
        fourport::scalar_device(t_amp, t_amp, +1, 0.0);
    fourport::ChannelOptions opt;
    opt.device_cutoff = cfg.device_cutoff_value();
    return fourport::apply_channel(input, dev, opt);
}

struct MeasureValue {
    double value = 0.0;
    double residual = 0.0;
    bool converged = true;
};

MeasureValue bell_measure(const fock::DensityOperator& rho,
                          const SweepConfig& cfg) {
    const auto cut = ent::Bipartition::against_rest(rho.layout(), {0});
    if (cfg.measure == "ree") {
        const auto rep = ent::relative_entropy_entanglement(rho, cut);
        return {rep.value, rep.residual, rep.converged};
    }
    if (cfg.measure == "negativity") {
        const auto rep = ent::negativity(rho, cut);
        return {rep.value, rep.residual, rep.converged};
    }
    if (cfg.measure == "log-negativity") {
        const auto rep = ent::log_negativity(rho, cut);
        return {rep.value, rep.residual, rep.converged};
    }
    const auto rep = ent::lewenstein_sanpera(rho, cut);
    return {rep.entanglement, rep.residual, rep.converged};
}

/// Closed-form channel output of a Bell state for diagonal transmission
/// diag(t1, t2) and vacuum device, on the two-qubit basis {00, 01, 10, 11}
/// (second mode fastest). Used by --verify against the dilation engine.
Eigen::Matrix4cd closed_form_bell_output(fock::BellKind kind, double t1,
                                         double t2) {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    const double sign = fock::bell_sign(kind);
    const double t1sq = t1 * t1;
    const double t2sq = t2 * t2;
    if (fock::is_psi_family(kind)) {
        rho(0, 0) = 0.5 * (2.0 - t1sq - t2sq);
        rho(1, 1) = 0.5 * t2sq;
        rho(2, 2) = 0.5 * t1sq;
        rho(1, 2) = sign * 0.5 * t1 * t2;
        rho(2, 1) = sign * 0.5 * t1 * t2;
    } else {
        rho(0, 0) = 0.5 * (1.0 - t1sq) * (1.0 - t2sq) + 0.5;
        rho(1, 1) = 0.5 * t2sq * (1.0 - t1sq);
        rho(2, 2) = 0.5 * t1sq * (1.0 - t2sq);
        rho(3, 3) = 0.5 * t1sq * t2sq;
        rho(0, 3) = sign * 0.5 * t1 * t2;
        rho(3, 0) = sign * 0.5 * t1 * t2;
    }
    return rho;
}

/// Elementwise comparison of the engine output against the closed form,
/// embedded in the full field register (every other entry must vanish).
void verify_bell_row(fock::BellKind kind, double t_amp, const SweepConfig& cfg,
                     double tol) {
    const auto res = bell_through_fibers(kind, t_amp, cfg);
    const auto& rho = res.state.matrix();
    const auto& layout = res.state.layout();
    const Eigen::Matrix4cd reference =
        closed_form_bell_output(kind, t_amp, t_amp);
    const fock::Index s0 = layout.stride(0);
    const std::array<fock::Index, 4> idx = {0, 1, s0, s0 + 1};
    Eigen::MatrixXcd expected =
        Eigen::MatrixXcd::Zero(layout.dim(), layout.dim());
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            expected(idx[static_cast<size_t>(r)], idx[static_cast<size_t>(c)]) =
                reference(r, c);
    const double diff = (rho - expected).cwiseAbs().maxCoeff();
    if (diff > tol)
        throw invariant_violation(
            "channel output deviates from the closed-form matrix by " +
            format_g12(diff));
}

// ------------------------------------------------------------ gaussian rows

/// Closed-form PPT margin of a TMSV sent through two equal scalar devices:
/// the partially transposed covariance of this family has smallest
/// symplectic eigenvalue a' - |c'| with a' the diagonal and c' the
/// cross-block coefficient after the moment map. Used by --verify as an
/// eigensolver-free oracle.
double closed_form_margin(double zeta, double t_sq, double n_th, int sigma) {
    const double a = 0.5 * std::cosh(2.0 * zeta);
    const double c = 0.5 * std::sinh(2.0 * zeta);
    const double noise = (sigma == +1 ? (1.0 - t_sq) : (t_sq - 1.0)) *
                         (n_th + 0.5);
    const double a_out = t_sq * a + noise;
    const double c_out = t_sq * c;
    return a_out - std::abs(c_out) - 0.5;
}

gaussian::SeparabilityResult tmsv_after_devices(double zeta, double t_amp,
                                                double n_th, int sigma) {
    const gaussian::ScalarDevice dev{t_amp, n_th, sigma};
    return gaussian::is_separable_ppt(
        gaussian::transform_moments(gaussian::tmsv_covariance(zeta), dev, dev));
}

/// Locate the separability boundary: the first sign change of `margin` along
/// the grid, refined by bisection on the continuous margin function.
/// Returns grid.start when the state is already at the boundary there.
double find_crossing(const GridSpec& grid, const std::vector<double>& margins,
                     const std::function<double(double)>& margin_fn) {
    if (margins.front() >= -1e-9) {
        if (margins.front() > 1e-9)
            throw domain_error(
                "state is separable at the start of the grid; no crossing "
                "to detect (move grid_start down)");
        return grid.start;
    }
    int bracket = -1;
    for (int i = 0; i + 1 < grid.steps; ++i) {
        if (margins[static_cast<size_t>(i)] < 0.0 &&
            margins[static_cast<size_t>(i + 1)] >= 0.0) {
            bracket = i;
            break;
        }
    }
    if (bracket < 0)
        throw domain_error("grid does not bracket the separability boundary; "
                           "extend grid_stop");
    double lo = grid.point(bracket);
    double hi = grid.point(bracket + 1);
    for (int it = 0; it < 200 && (hi - lo) > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (margin_fn(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

// ----------------------------------------------------------------- formatting

std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(const Table& t, std::ostream& os) {
    os << "# schema " << t.schema << "\n";
    for (size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << t.columns[c];
    os << "\n";
    for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << format_g12(row[c]);
        os << "\n";
    }
    for (const auto& [key, value] : t.summary)
        os << "# " << key << " " << format_g12(value) << "\n";
    for (const auto& [key, value] : t.notes)
        os << "# " << key << " " << value << "\n";
}

io::json table_to_json(const Table& t) {
    io::json rows = io::json::array();
    for (const auto& row : t.rows) rows.push_back(row);
    io::json summary = io::json::object();
    for (const auto& [key, value] : t.summary) summary[key] = value;
    io::json notes = io::json::object();
    for (const auto& [key, value] : t.notes) notes[key] = value;
    return io::json{{"schema", t.schema},
                    {"columns", t.columns},
                    {"rows", rows},
                    {"summary", summary},
                    {"notes", notes}};
}

// ----------------------------------------------------------------- bell decay

Table run_bell_decay(const SweepConfig& cfg) {
    cfg.validate();
    const GridSpec grid = cfg.grid();
    const bool plus = cfg.kind == "plus";
    const fock::BellKind psi_kind =
        plus ? fock::BellKind::psi_plus : fock::BellKind::psi_minus;
    const fock::BellKind phi_kind =
        plus ? fock::BellKind::phi_plus : fock::BellKind::phi_minus;

    Table t;
    t.schema = "qlink.bell-decay.v1";
    t.columns = {"l_over_L",   "T_sq",       "E_psi",
                 "E_phi",      "bound_psi",  "bound_phi",
                 "E_psi_norm", "E_phi_norm", "bound_psi_norm",
                 "bound_phi_norm"};
    t.rows.assign(static_cast<size_t>(grid.steps), {});

    std::vector<double> residuals(static_cast<size_t>(grid.steps), 0.0);
    parallel_rows(grid.steps, grid, [&](int i) {
        const double l = grid.point(i);
        const double t_amp = std::exp(-l);
        const double t_sq = t_amp * t_amp;
        const auto psi_out = bell_through_fibers(psi_kind, t_amp, cfg);
        const auto phi_out = bell_through_fibers(phi_kind, t_amp, cfg);
        const MeasureValue e_psi = bell_measure(psi_out.state, cfg);
        const MeasureValue e_phi = bell_measure(phi_out.state, cfg);
        const double b_psi = ent::bell_output_bound(psi_kind, t_sq);
        const double b_phi = ent::bell_output_bound(phi_kind, t_sq);
        t.rows[static_cast<size_t>(i)] = {
            l,           t_sq,          e_psi.value,   e_phi.value,
            b_psi,       b_phi,         e_psi.value / kLn2,
            e_phi.value / kLn2,         b_psi / kLn2,  b_phi / kLn2};
        residuals[static_cast<size_t>(i)] =
            std::max(e_psi.residual, e_phi.residual);
        if (cfg.verify && i % 20 == 0) {
            verify_bell_row(psi_kind, t_amp, cfg, 1e-10);
            verify_bell_row(phi_kind, t_amp, cfg, 1e-10);
        }
    });

    // The closed-form checks below hold for the relative entropy of
    // entanglement; other measures are emitted as data only.
    if (cfg.measure == "ree") {
        for (int i = 0; i < grid.steps; ++i) {
            const auto& row = t.rows[static_cast<size_t>(i)];
            const double l = row[0];
            const double e_psi = row[2];
            const double e_phi = row[3];
            const std::string at =
                "row " + std::to_string(i) + " (l/L = " + format_g12(l) + "): ";
            if (l == 0.0) {
                if (std::abs(e_psi - kLn2) > 1e-4 ||
                    std::abs(e_phi - kLn2) > 1e-4)
                    throw invariant_violation(
                        at + "lossless fibers must preserve ln 2 of "
                             "entanglement; got E_psi = " +
                        format_g12(e_psi) + ", E_phi = " + format_g12(e_phi));
            } else {
                if (e_phi > e_psi + 1e-6)
                    throw invariant_violation(
                        at + "the vacuum-bright family must not outlive the "
                             "single-excitation family: E_phi = " +
                        format_g12(e_phi) + " > E_psi = " + format_g12(e_psi));
            }
            if (e_psi > row[4] + 1e-4 || e_phi > row[5] + 1e-4)
                throw invariant_violation(
                    at + "measured entanglement exceeds its convexity bound");
        }
    }

    double max_residual = 0.0;
    for (double r : residuals) max_residual = std::max(max_residual, r);
    t.summary.emplace_back("max_residual", max_residual);
    t.notes.emplace_back("measure", cfg.measure);
    t.notes.emplace_back("kind", cfg.kind);
    return t;
}

// ----------------------------------------------------------- tmsv separability

Table run_tmsv_separability(const SweepConfig& cfg) {
    cfg.validate();
    const GridSpec grid = cfg.grid();
    const double zeta = cfg.zeta;
    const double n_th = cfg.n_th_value();

    Table t;
    t.schema = "qlink.tmsv-separability.v1";
    t.columns = {"l_over_L", "T_sq", "nu_tilde", "margin", "separable"};
    t.rows.assign(static_cast<size_t>(grid.steps), {});

    std::vector<double> margins(static_cast<size_t>(grid.steps), 0.0);
    parallel_rows(grid.steps, grid, [&](int i) {
        const double l = grid.point(i);
        const double t_amp = std::exp(-l);
        const auto sep = tmsv_after_devices(zeta, t_amp, n_th, +1);
        t.rows[static_cast<size_t>(i)] = {l, t_amp * t_amp, sep.nu_min,
                                          sep.margin,
                                          sep.separable ? 1.0 : 0.0};
        margins[static_cast<size_t>(i)] = sep.margin;
        if (cfg.verify && i % 20 == 0) {
            const double oracle =
                closed_form_margin(zeta, t_amp * t_amp, n_th, +1);
            if (std::abs(oracle - sep.margin) > 1e-9)
                throw invariant_violation(
                    "PPT margin deviates from its closed form by " +
                    format_g12(std::abs(oracle - sep.margin)));
        }
    });

    const double crossing = find_crossing(grid, margins, [&](double l) {
        return tmsv_after_devices(zeta, std::exp(-l), n_th, +1).margin;
    });
    const double formula = gaussian::lmax_fiber(zeta, n_th);
    if (std::abs(crossing - formula) > 1e-6)
        throw invariant_violation(
            "detected separability crossing l/L = " + format_g12(crossing) +
            " disagrees with the closed-form maximal fiber length " +
            format_g12(formula));

    t.summary.emplace_back("crossing_l_over_L", crossing);
    t.summary.emplace_back("lmax_formula", formula);
    t.summary.emplace_back("crossing_error", std::abs(crossing - formula));
    t.notes.emplace_back("zeta", format_g12(zeta));
    t.notes.emplace_back("n_th", format_g12(n_th));
    return t;
}

// -------------------------------------------------------------- amplifier gain

Table run_amplifier_gain(const SweepConfig& cfg) {
    cfg.validate();
    const GridSpec grid = cfg.grid();
    const double zeta = cfg.zeta;

    Table t;
    t.schema = "qlink.amplifier-gain.v1";
    t.columns = {"T_sq", "gain", "nu_tilde", "margin", "separable"};
    t.rows.assign(static_cast<size_t>(grid.steps), {});

    std::vector<double> margins(static_cast<size_t>(grid.steps), 0.0);
    parallel_rows(grid.steps, grid, [&](int i) {
        const double t_sq = grid.point(i);
        const auto sep = tmsv_after_devices(zeta, std::sqrt(t_sq), 0.0, -1);
        t.rows[static_cast<size_t>(i)] = {t_sq, t_sq - 1.0, sep.nu_min,
                                          sep.margin,
                                          sep.separable ? 1.0 : 0.0};
        margins[static_cast<size_t>(i)] = sep.margin;
        if (cfg.verify && i % 20 == 0) {
            const double oracle = closed_form_margin(zeta, t_sq, 0.0, -1);
            if (std::abs(oracle - sep.margin) > 1e-9)
                throw invariant_violation(
                    "PPT margin deviates from its closed form by " +
                    format_g12(std::abs(oracle - sep.margin)));
        }
    });

    const double crossing = find_crossing(grid, margins, [&](double t_sq) {
        return tmsv_after_devices(zeta, std::sqrt(t_sq), 0.0, -1).margin;
    });
    const auto formula = gaussian::max_gain(zeta, cfg.reflection);
    if (std::abs(crossing - formula.t_max_sq) > 1e-6)
        throw invariant_violation(
            "detected PPT sign change at |T|^2 = " + format_g12(crossing) +
            " disagrees with the closed-form maximal working point " +
            format_g12(formula.t_max_sq));

    t.summary.emplace_back("crossing_T_sq", crossing);
    t.summary.emplace_back("t_max_sq_formula", formula.t_max_sq);
    t.summary.emplace_back("g_max_formula", formula.g_max);
    t.summary.emplace_back("crossing_error",
                           std::abs(crossing - formula.t_max_sq));
    t.notes.emplace_back("zeta", format_g12(zeta));
    return t;
}

// -------------------------------------------------------------- channel apply

io::json run_channel_apply(const SweepConfig& cfg) {
    cfg.validate();
    const io::json input_json = io::load_json_file(cfg.input_path);
    const io::json device_json = io::load_json_file(cfg.device_path);
    const fourport::DeviceSpec spec = io::device_from_json(device_json);
    const io::StateKind kind = io::detect_state_kind(input_json);

    io::json out;
    if (kind == io::StateKind::gaussian_moments) {
        const gaussian::GaussianState g = io::gaussian_from_json(input_json);
        if (g.modes() != 2)
            throw dimension_error(
                "channel-apply expects a two-mode Gaussian state");
        const auto& tm = spec.transmission;
        if (std::abs(tm(0, 1)) > 1e-14 || std::abs(tm(1, 0)) > 1e-14)
            throw domain_error(
                "the Gaussian moment engine handles per-fiber scalar "
                "devices only; the transmission matrix must be diagonal");
        const gaussian::ScalarDevice m1{tm(0, 0), spec.n_th, spec.sigma};
        const gaussian::ScalarDevice m2{tm(1, 1), spec.n_th, spec.sigma};
        const gaussian::GaussianState mapped =
            gaussian::transform_moments(g, m1, m2);
        out = io::to_json(mapped);
        out["channel"] = io::json{{"engine", "gaussian-moments"},
                                  {"sigma", spec.sigma},
                                  {"n_th", spec.n_th}};
        if (cfg.verify) io::gaussian_from_json(out).validate();
        return out;
    }

    fourport::ChannelOptions opt;
    opt.device_cutoff = cfg.device_cutoff_value();
    fourport::ChannelResult result =
        kind == io::StateKind::fock_pure
            ? fourport::apply_channel(io::fock_state_from_json(input_json),
                                      spec, opt)
            : fourport::apply_channel(io::density_from_json(input_json), spec,
                                      opt);
    out = io::to_json(result.state);
    out["leakage"] =
        io::json{{"device_truncation_weight",
                  result.report.device_truncation_weight},
                 {"field_top_population", result.report.field_top_population},
                 {"device_top_population",
                  result.report.device_top_population},
                 {"trace_delta", result.report.trace_delta}};
    out["channel"] = io::json{{"engine", "fock-dilation"},
                              {"sigma", spec.sigma},
                              {"n_th", spec.n_th},
                              {"device_cutoff", opt.device_cutoff}};
    if (cfg.verify) {
        io::density_from_json(out); // deep validation round trip
        if (spec.sigma == +1 && std::abs(result.report.trace_delta) > 1e-9)
            throw invariant_violation(
                "absorbing channel failed to preserve the trace: delta = " +
                format_g12(result.report.trace_delta));
    }
    return out;
}

} // namespace qlink::cli
