#include "qlink/ent/ree.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "qlink/ent/sector.hpp"
#include "qlink/errors.hpp"

namespace qlink::ent {

namespace {

struct EigH {
    Eigen::VectorXd s;
    Mat v;
};

EigH eigh(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    return {es.eigenvalues(), es.eigenvectors()};
}

Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

// Partial transpose on the right factor of C^dl (x) C^dr, right index fastest.
Mat pt_right(const Mat& m, Index dl, Index dr) {
    Mat out(m.rows(), m.cols());
    for (Index a = 0; a < dl; ++a)
        for (Index b = 0; b < dr; ++b)
            for (Index a2 = 0; a2 < dl; ++a2)
                for (Index b2 = 0; b2 < dr; ++b2)
                    out(a * dr + b, a2 * dr + b2) = m(a * dr + b2, a2 * dr + b);
    return out;
}

// Euclidean projection of a real vector onto the probability simplex.
Eigen::VectorXd simplex_project(const Eigen::VectorXd& v) {
    const Index n = v.size();
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    int support = 0;
    for (Index k = 0; k < n; ++k) {
        cum += u[static_cast<size_t>(k)];
        const double t = (cum - 1.0) / double(k + 1);
        if (u[static_cast<size_t>(k)] - t > 0.0) {
            tau = t;
            support = int(k + 1);
        }
    }
    (void)support;
    return (v.array() - tau).max(0.0);
}

// Projection onto {X Hermitian PSD, tr X = 1}.
Mat project_density(const Mat& x) {
    const EigH e = eigh(hermitize(x));
    const Eigen::VectorXd lam = simplex_project(e.s);
    return e.v * lam.asDiagonal() * e.v.adjoint();
}

// Projection onto {X Hermitian : X^Gamma >= 0} (partial transpose is a
// Frobenius isometry, so project the PT onto the PSD cone and undo).
Mat project_pt_psd(const Mat& x, Index dl, Index dr) {
    const EigH e = eigh(hermitize(pt_right(x, dl, dr)));
    const Eigen::VectorXd lam = e.s.cwiseMax(0.0);
    return pt_right(e.v * lam.asDiagonal() * e.v.adjoint(), dl, dr);
}

double min_pt_eigenvalue(const Mat& m, Index dl, Index dr) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(pt_right(m, dl, dr)),
                                          Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double min_eigenvalue(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m),
                                          Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Exact-feasibility repair: mix toward the maximally mixed state just enough
// to lift any residual negative eigenvalue of x or its partial transpose.
// The objective value at a repaired point is a true upper bound on the
// constrained minimum, which the reported measure relies on.
Mat make_feasible(const Mat& x, Index dl, Index dr) {
    const double viol =
        std::max({0.0, -min_eigenvalue(x), -min_pt_eigenvalue(x, dl, dr)});
    if (viol == 0.0) return x;
    const double n = double(x.rows());
    const double beta = std::min(1.0, (1.0 + 1e-6) * n * viol / (1.0 + n * viol));
    Mat mixed = (1.0 - beta) * x;
    mixed.diagonal().array() += beta / n;
    return mixed;
}

// Dykstra alternating projection onto density matrices with PSD partial
// transpose, followed by the exact-feasibility repair (the projection alone
// can leave a residual constraint violation when the input is far outside).
Mat project_ppt_density(const Mat& x0, Index dl, Index dr) {
    Mat x = x0, p = Mat::Zero(x0.rows(), x0.cols()), q = p, y;
    for (int it = 0; it < 400; ++it) {
        y = project_density(x + p);
        p = x + p - y;
        const Mat xn = project_pt_psd(y + q, dl, dr);
        q = y + q - xn;
        const double change = (xn - x).norm();
        x = xn;
        if (change < 1e-15) break;
    }
    x = project_density(x);
    x = make_feasible(x, dl, dr);
    return x / x.trace().real();
}

// f(sigma) = -tr(rho ln sigma) given sigma's eigendecomposition.
// Spectral floor: the objective is evaluated on (1-delta) sigma + delta I/n,
// which shares sigma's eigenvectors and maps its spectrum affinely. The floor
// keeps the log-gradient bounded by ~ln(n/delta), so the duality gap stays a
// usable certificate even when the optimum is rank-deficient, while shifting
// the optimal value by far less than the optimizer tolerances.
constexpr double kFloor = 1e-11;

double floored(double s, Index n) {
    return (1.0 - kFloor) * std::max(s, 0.0) + kFloor / double(n);
}

double objective(const Mat& rho, const EigH& e) {
    const Index n = e.s.size();
    double f = 0.0;
    for (Index k = 0; k < n; ++k) {
        const double w =
            std::max(0.0, (e.v.col(k).adjoint() * rho * e.v.col(k))(0).real());
        f -= w * std::log(floored(e.s(k), n));
    }
    return f;
}

// Gradient of the floored objective at sigma:
// -(1-delta) V (Phi o (V^dag rho V)) V^dag with the divided differences
// Phi_ij = (ln s_i - ln s_j)/(s_i - s_j) of the logarithm on the floored
// spectrum.
Mat gradient(const Mat& rho, const EigH& e) {
    const Index n = e.s.size();
    const Mat w = e.v.adjoint() * rho * e.v;
    Mat phi(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            const double si = floored(e.s(i), n);
            const double sj = floored(e.s(j), n);
            if (std::abs(si - sj) < 1e-12 * std::max(si, sj))
                phi(i, j) = 2.0 / (si + sj);
            else
                phi(i, j) = (std::log(si) - std::log(sj)) / (si - sj);
        }
    return hermitize(-(1.0 - kFloor) * e.v * phi.cwiseProduct(w) *
                     e.v.adjoint());
}

struct LmoResult {
    Mat omega;    ///< rank-one product state
    Vec chi;      ///< right factor of the winner, reusable as a warm start
    double value; ///< <omega, G>
};

// Linear minimization oracle over product states: min <phi chi| G |phi chi>
// by alternating eigensolves from marginal-eigenvector, warm, and random
// starts. The reported value only upper-bounds the true minimum, so the
// caller must treat a negative duality gap as a failed certificate.
LmoResult lmo_product_min(const Mat& g, Index dl, Index dr, uint64_t seed,
                          const std::vector<Vec>& warm_starts) {
    auto solve_left = [&](const Vec& chi) {
        Mat m = Mat::Zero(dl, dl);
        for (Index a = 0; a < dl; ++a)
            for (Index a2 = 0; a2 < dl; ++a2) {
                std::complex<double> s = 0.0;
                for (Index b = 0; b < dr; ++b)
                    for (Index b2 = 0; b2 < dr; ++b2)
                        s += std::conj(chi(b)) * g(a * dr + b, a2 * dr + b2) *
                             chi(b2);
                m(a, a2) = s;
            }
        return hermitize(m);
    };
    auto solve_right = [&](const Vec& phi) {
        Mat m = Mat::Zero(dr, dr);
        for (Index b = 0; b < dr; ++b)
            for (Index b2 = 0; b2 < dr; ++b2) {
                std::complex<double> s = 0.0;
                for (Index a = 0; a < dl; ++a)
                    for (Index a2 = 0; a2 < dl; ++a2)
                        s += std::conj(phi(a)) * g(a * dr + b, a2 * dr + b2) *
                             phi(a2);
                m(b, b2) = s;
            }
        return hermitize(m);
    };

    std::vector<Vec> starts;
    {
        // Eigenvectors of the right marginal of G.
        Mat gb = Mat::Zero(dr, dr);
        for (Index a = 0; a < dl; ++a)
            for (Index b = 0; b < dr; ++b)
                for (Index b2 = 0; b2 < dr; ++b2)
                    gb(b, b2) += g(a * dr + b, a * dr + b2);
        const EigH eb = eigh(gb);
        for (Index k = 0; k < dr; ++k) starts.push_back(eb.v.col(k));
        // Eigenvectors of the left marginal, mapped to right factors.
        Mat ga = Mat::Zero(dl, dl);
        for (Index b = 0; b < dr; ++b)
            for (Index a = 0; a < dl; ++a)
                for (Index a2 = 0; a2 < dl; ++a2)
                    ga(a, a2) += g(a * dr + b, a2 * dr + b);
        const EigH ea = eigh(ga);
        for (Index k = 0; k < dl; ++k) {
            Eigen::SelfAdjointEigenSolver<Mat> er(solve_right(ea.v.col(k)));
            starts.push_back(er.eigenvectors().col(0));
        }
        for (const Vec& w : warm_starts)
            if (w.size() == dr) starts.push_back(w);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> nd;
        for (int r = 0; r < 6; ++r) {
            Vec chi(dr);
            for (Index b = 0; b < dr; ++b)
                chi(b) = std::complex<double>(nd(rng), nd(rng));
            chi.normalize();
            starts.push_back(chi);
        }
    }

    LmoResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const Vec& start : starts) {
        Vec chi = start, phi;
        double val = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 60; ++it) {
            Eigen::SelfAdjointEigenSolver<Mat> ea(solve_left(chi));
            phi = ea.eigenvectors().col(0);
            Eigen::SelfAdjointEigenSolver<Mat> eb(solve_right(phi));
            chi = eb.eigenvectors().col(0);
            const double v = eb.eigenvalues()(0);
            if (val - v < 1e-14) {
                val = v;
                break;
            }
            val = v;
        }
        if (val < best.value) {
            Vec prod(dl * dr);
            for (Index a = 0; a < dl; ++a)
                for (Index b = 0; b < dr; ++b) prod(a * dr + b) = phi(a) * chi(b);
            best.value = val;
            best.omega = prod * prod.adjoint();
            best.chi = chi;
        }
    }
    return best;
}

double entropy_term(const Mat& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
    double t = 0.0;
    for (Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double l = es.eigenvalues()(k);
        if (l > 1e-15) t += l * std::log(l);
    }
    return t;
}

} // namespace

EntanglementReport relative_entropy_entanglement(
    const fock::DensityOperator& rho, const Bipartition& cut,
    const ReeOptions& opt) {
    const QubitSector sec = project_qubit_sector(rho, cut);
    const Index dl = sec.dim_left, dr = sec.dim_right;
    EntanglementReport rep{Measure::relative_entropy, 0.0, true, 0, 0.0};
    if (dl == 1 || dr == 1) return rep; // product support is separable

    // At qubit x qubit, PPT is exactly separability; a PPT state has
    // measure zero and entangled states have strictly negative PT spectrum.
    const double pt_min = min_pt_eigenvalue(sec.rho, dl, dr);
    if (pt_min >= -1e-12) return rep;

    const Mat& target = sec.rho;
    Mat sigma = Mat::Zero(dl * dr, dl * dr);
    sigma.diagonal() = 0.5 * target.diagonal() +
                       0.5 * Vec::Constant(dl * dr, 1.0 / double(dl * dr));
    sigma = project_density(sigma); // clean normalization
    {
        // The feasible projection of the target itself is an excellent start
        // for weakly entangled states, where it nearly solves the problem.
        const Mat near = project_ppt_density(target, dl, dr);
        if (objective(target, eigh(near)) < objective(target, eigh(sigma)))
            sigma = near;
    }

    EigH es = eigh(sigma);
    double f = objective(target, es);
    double eta = 0.25;
    double gap = std::numeric_limits<double>::infinity();
    int it = 0;
    int stall = 0;
    bool converged = false;
    std::vector<Vec> warm;

    for (; it < opt.max_iterations; ++it) {
        const Mat g = gradient(target, es);
        const LmoResult lmo =
            lmo_product_min(g, dl, dr, opt.seed + uint64_t(it), warm);
        warm.assign(1, lmo.chi);
        gap = (g.cwiseProduct(sigma.conjugate())).sum().real() - lmo.value;
        // The oracle value only upper-bounds the true product minimum, so a
        // materially negative gap certifies nothing; never converge on it.
        if (std::abs(gap) < opt.gap_tolerance) {
            converged = true;
            break;
        }

        // Frank-Wolfe candidate with a golden-section line search. Skipped
        // when the oracle direction is not a descent direction.
        Mat fw_sigma;
        double fw_f = std::numeric_limits<double>::infinity();
        if (gap > 0.0) {
            const Mat dir = lmo.omega - sigma;
            double lo = 0.0, hi = 1.0;
            auto eval = [&](double t) {
                return objective(target, eigh(sigma + t * dir));
            };
            constexpr double kInvPhi = 0.6180339887498949;
            double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
            double f1 = eval(x1), f2 = eval(x2);
            for (int ls = 0; ls < 40; ++ls) {
                if (f1 < f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - kInvPhi * (hi - lo);
                    f1 = eval(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + kInvPhi * (hi - lo);
                    f2 = eval(x2);
                }
            }
            const double gamma = 0.5 * (lo + hi);
            fw_sigma = sigma + gamma * dir;
            fw_f = objective(target, eigh(fw_sigma));
        }

        // Projected-gradient candidate with backtracking.
        Mat pg_sigma;
        double pg_f = std::numeric_limits<double>::infinity();
        {
            double step = eta;
            for (int bt = 0; bt < 12; ++bt) {
                Mat trial = project_ppt_density(sigma - step * g, dl, dr);
                const double ft = objective(target, eigh(trial));
                if (ft < f || bt == 11) {
                    pg_sigma = std::move(trial);
                    pg_f = ft;
                    if (bt == 0) eta = std::min(4.0, eta * 1.4);
                    else eta = step;
                    break;
                }
                step *= 0.5;
            }
        }

        const double new_f = std::min(fw_f, pg_f);
        if (new_f < f) {
            sigma = (fw_f <= pg_f) ? fw_sigma : pg_sigma;
            es = eigh(sigma);
            const double drop = f - new_f;
            f = new_f;
            stall = (drop < opt.objective_tolerance * std::max(1.0, std::abs(f)))
                        ? stall + 1
                        : 0;
        } else {
            ++stall;
        }
        if (stall >= 80) break; // no progress; report the honest gap
    }

    rep.value = entropy_term(target) + f;
    rep.converged = converged;
    rep.iterations = it;
    rep.residual = gap;
    return rep;
}

} // namespace qlink::ent
