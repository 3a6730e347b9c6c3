#include "qlink/ent/lewenstein_sanpera.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "qlink/errors.hpp"

namespace qlink::ent {

namespace {

Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

Mat pt_right(const Mat& m, Index dl, Index dr) {
    Mat out(m.rows(), m.cols());
    for (Index a = 0; a < dl; ++a)
        for (Index b = 0; b < dr; ++b)
            for (Index a2 = 0; a2 < dl; ++a2)
                for (Index b2 = 0; b2 < dr; ++b2)
                    out(a * dr + b, a2 * dr + b2) = m(a * dr + b2, a2 * dr + b);
    return out;
}

double min_eig(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Entropy of entanglement of a pure two-qubit-sector state (nats).
double pure_entropy(const Vec& psi, Index dl, Index dr) {
    Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                                   Eigen::Dynamic, Eigen::RowMajor>>
        m(psi.data(), dl, dr);
    Eigen::JacobiSVD<Mat> svd(m);
    double s = 0.0;
    for (Index k = 0; k < svd.singularValues().size(); ++k) {
        const double w = svd.singularValues()(k) * svd.singularValues()(k);
        if (w > 1e-15) s -= w * std::log(w);
    }
    return s;
}

// For a fixed candidate pure part psi, the largest weight mu such that
// Q = rho - mu psi psi^dag stays PSD with PSD partial transpose determines
// the separable weight 1 - mu. h(mu) = lambda_min((rho - mu psi psi^dag)^PT)
// is concave in mu, so its smallest nonnegative root is found by a
// golden-section maximum followed by bisection; PSD-ness of Q itself enters
// as a graded penalty so the outer search sees a smooth landscape.
struct InnerResult {
    double mu = 0.0;
    double penalty = 0.0; ///< infeasibility measure, 0 when valid
};

InnerResult inner_weight(const Mat& rho, const Mat& rho_pt, const Vec& psi,
                         Index dl, Index dr) {
    const Mat proj = psi * psi.adjoint();
    const Mat proj_pt = pt_right(proj, dl, dr);
    auto h = [&](double mu) { return min_eig(rho_pt - mu * proj_pt); };

    const double h0 = h(0.0);
    if (h0 >= 0.0) return {0.0, 0.0}; // state already PPT; nothing to remove

    // Maximize the concave h over [0, 2].
    double lo = 0.0, hi = 2.0;
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double h1 = h(x1), h2 = h(x2);
    for (int it = 0; it < 60; ++it) {
        if (h1 > h2) {
            hi = x2;
            x2 = x1;
            h2 = h1;
            x1 = hi - kInvPhi * (hi - lo);
            h1 = h(x1);
        } else {
            lo = x1;
            x1 = x2;
            h1 = h2;
            x2 = lo + kInvPhi * (hi - lo);
            h2 = h(x2);
        }
    }
    const double mu_star = 0.5 * (lo + hi);
    const double h_star = h(mu_star);
    if (h_star < -1e-11)
        // No weight of this psi ever restores PPT: infeasible direction.
        return {2.0, -h_star};

    double mu = mu_star;
    if (h_star > 0.0) {
        // Smallest root of h in [0, mu_star].
        double a = 0.0, b = mu_star;
        for (int it = 0; it < 80; ++it) {
            const double m = 0.5 * (a + b);
            (h(m) < 0.0 ? a : b) = m;
        }
        mu = 0.5 * (a + b);
    }
    const double q_min = min_eig(rho - mu * proj);
    return {mu, std::max(0.0, -q_min)};
}

} // namespace

LsResult lewenstein_sanpera(const fock::DensityOperator& rho,
                            const Bipartition& cut, const LsOptions& opt) {
    const QubitSector sec = project_qubit_sector(rho, cut);
    const Index dl = sec.dim_left, dr = sec.dim_right;
    const Index d = dl * dr;

    LsResult res;
    res.sector = sec;
    if (dl == 1 || dr == 1 || min_eig(pt_right(sec.rho, dl, dr)) >= -1e-12) {
        // Separable: the state is its own separable part.
        res.lambda_max = 1.0;
        res.entanglement = 0.0;
        res.separable_part = sec.rho;
        res.pure_part = Vec::Zero(d);
        res.pure_part(0) = 1.0;
        return res;
    }

    const Mat target = sec.rho;
    const Mat target_pt = pt_right(target, dl, dr);

    // The optimal pure part lies in the range of rho; parametrize it there.
    Eigen::SelfAdjointEigenSolver<Mat> es(target);
    std::vector<Index> sup;
    for (Index k = 0; k < d; ++k)
        if (es.eigenvalues()(k) > 1e-12) sup.push_back(k);
    const Index rank = static_cast<Index>(sup.size());
    Mat range_basis(d, rank);
    for (Index k = 0; k < rank; ++k)
        range_basis.col(k) = es.eigenvectors().col(sup[static_cast<size_t>(k)]);

    auto to_psi = [&](const Eigen::VectorXd& x) {
        Vec z(rank);
        for (Index k = 0; k < rank; ++k)
            z(k) = std::complex<double>(x(2 * k), x(2 * k + 1));
        const double n = z.norm();
        if (n < 1e-14) return Vec(Vec::Zero(d));
        return Vec(range_basis * (z / n));
    };

    int evals = 0;
    auto score = [&](const Eigen::VectorXd& x) {
        ++evals;
        const Vec psi = to_psi(x);
        if (psi.norm() < 0.5) return 1e3; // null direction
        const InnerResult in = inner_weight(target, target_pt, psi, dl, dr);
        return in.mu + 60.0 * in.penalty;
    };

    // Structured starts: the dominant eigenvector of rho and the range
    // component of the most negative PT eigenvector, then random points.
    std::vector<Eigen::VectorXd> starts;
    auto pack = [&](const Vec& psi) {
        const Vec z = range_basis.adjoint() * psi;
        Eigen::VectorXd x(2 * rank);
        for (Index k = 0; k < rank; ++k) {
            x(2 * k) = z(k).real();
            x(2 * k + 1) = z(k).imag();
        }
        return x;
    };
    starts.push_back(pack(es.eigenvectors().col(d - 1)));
    {
        Eigen::SelfAdjointEigenSolver<Mat> ept(target_pt);
        starts.push_back(pack(ept.eigenvectors().col(0)));
    }
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> nd;
    while (static_cast<int>(starts.size()) < opt.restarts) {
        Eigen::VectorXd x(2 * rank);
        for (Index k = 0; k < 2 * rank; ++k) x(k) = nd(rng);
        starts.push_back(x);
    }

    // Nelder-Mead over the 2*rank real coordinates of the pure part.
    const Index nd_dim = 2 * rank;
    double best_mu = 0.0;
    Eigen::VectorXd best_x;
    double best_score = std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        std::vector<Eigen::VectorXd> splx;
        std::vector<double> fs;
        splx.push_back(start);
        for (Index k = 0; k < nd_dim; ++k) {
            Eigen::VectorXd v = start;
            v(k) += 0.35;
            splx.push_back(v);
        }
        for (const auto& v : splx) fs.push_back(score(v));
        for (int it = 0; it < opt.max_search_iterations; ++it) {
            // Order the simplex.
            std::vector<size_t> ord(splx.size());
            std::iota(ord.begin(), ord.end(), size_t{0});
            std::sort(ord.begin(), ord.end(),
                      [&](size_t a, size_t b) { return fs[a] < fs[b]; });
            std::vector<Eigen::VectorXd> sx;
            std::vector<double> sf;
            for (size_t o : ord) {
                sx.push_back(splx[o]);
                sf.push_back(fs[o]);
            }
            splx = std::move(sx);
            fs = std::move(sf);
            if (fs.back() - fs.front() < opt.tol) break;

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(nd_dim);
            for (size_t k = 0; k + 1 < splx.size(); ++k) centroid += splx[k];
            centroid /= double(splx.size() - 1);

            const Eigen::VectorXd refl = centroid + (centroid - splx.back());
            const double fr = score(refl);
            if (fr < fs.front()) {
                const Eigen::VectorXd exp_pt =
                    centroid + 2.0 * (centroid - splx.back());
                const double fe = score(exp_pt);
                if (fe < fr) {
                    splx.back() = exp_pt;
                    fs.back() = fe;
                } else {
                    splx.back() = refl;
                    fs.back() = fr;
                }
            } else if (fr < fs[fs.size() - 2]) {
                splx.back() = refl;
                fs.back() = fr;
            } else {
                const Eigen::VectorXd contr =
                    centroid + 0.5 * (splx.back() - centroid);
                const double fc = score(contr);
                if (fc < fs.back()) {
                    splx.back() = contr;
                    fs.back() = fc;
                } else {
                    for (size_t k = 1; k < splx.size(); ++k) {
                        splx[k] = splx.front() + 0.5 * (splx[k] - splx.front());
                        fs[k] = score(splx[k]);
                    }
                }
            }
        }
        if (fs.front() < best_score) {
            best_score = fs.front();
            best_x = splx.front();
        }
    }

    const Vec psi = to_psi(best_x);
    const InnerResult in = inner_weight(target, target_pt, psi, dl, dr);
    best_mu = in.mu;

    res.lambda_max = 1.0 - best_mu;
    res.pure_part = psi;
    res.iterations = evals;
    res.entanglement = best_mu * pure_entropy(psi, dl, dr);
    const Mat q = target - best_mu * (psi * psi.adjoint());
    const double viol =
        std::max(std::max(0.0, -min_eig(q)),
                 std::max(0.0, -min_eig(pt_right(q, dl, dr))));
    res.residual = viol;
    res.converged = viol < 1e-8 && in.penalty < 1e-8;
    if (res.lambda_max > 1e-12)
        res.separable_part = q / res.lambda_max;
    else
        res.separable_part = Mat::Zero(d, d);
    return res;
}

} // namespace qlink::ent
