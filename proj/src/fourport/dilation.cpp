#include "qlink/fourport/dilation.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qlink/errors.hpp"

namespace qlink::fourport {

namespace {

constexpr double kTermTol = 1e-14;

// Quadratic Hamiltonian terms over the joint (field, field, dev, dev)
// register. A hop is w * a_to^dag a_from (to == from gives w * n); a pair is
// w * a_hi^dag a_lo^dag + h.c. with conjugation handled where applied.
struct Hop {
    int from, to;
    std::complex<double> w;
};
struct Pair {
    int a, b;
    std::complex<double> w;
};

struct TermList {
    std::vector<Hop> hops;
    std::vector<Pair> pairs;
};

TermList build_terms(const LambdaMatrix& lam) {
    TermList terms;
    auto add_hops = [&](const Mat2& h, int row0, int col0) {
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                if (std::abs(h(j, k)) > kTermTol)
                    terms.hops.push_back({col0 + k, row0 + j, h(j, k)});
    };
    if (lam.sigma == +1) {
        const Mat4 h = passive_generator(lam);
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                if (std::abs(h(j, k)) > kTermTol)
                    terms.hops.push_back({k, j, h(j, k)});
    } else {
        const BogoliubovGenerator g = bogoliubov_generator(lam);
        add_hops(g.field_hop, 0, 0);
        add_hops(g.device_hop, 2, 2);
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                if (std::abs(g.pair(j, k)) > kTermTol)
                    terms.pairs.push_back({j, 2 + k, g.pair(j, k)});
    }
    return terms;
}

struct UnionFind {
    std::vector<Index> parent;
    explicit UnionFind(Index n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), Index{0});
    }
    Index find(Index x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
};

} // namespace

Dilation::Dilation(const LambdaMatrix& lam, const ModeLayout& field_layout,
                   int device_cutoff) {
    if (field_layout.modes() != 2)
        throw dimension_error("dilation expects two field modes");
    if (device_cutoff < 1)
        throw dimension_error("device cutoff must be >= 1");
    joint_ = field_layout.concat(ModeLayout({device_cutoff, device_cutoff}));

    const TermList terms = build_terms(lam);
    const Index n = joint_.dim();
    const int nm = joint_.modes();

    // Connected components of the sparsity graph. The conservation laws of
    // the generator (total photon number, or field minus device number) fall
    // out of this automatically, as does per-fiber factorization when the
    // transmission matrix is diagonal.
    UnionFind uf(n);
    std::vector<int> occ(static_cast<size_t>(nm));
    for (Index idx = 0; idx < n; ++idx) {
        joint_.occupation(idx, occ);
        for (const Hop& h : terms.hops) {
            if (h.from == h.to) continue;
            if (occ[static_cast<size_t>(h.from)] >= 1 &&
                occ[static_cast<size_t>(h.to)] < joint_.cutoff(h.to))
                uf.unite(idx, idx - joint_.stride(h.from) + joint_.stride(h.to));
        }
        for (const Pair& p : terms.pairs) {
            if (occ[static_cast<size_t>(p.a)] < joint_.cutoff(p.a) &&
                occ[static_cast<size_t>(p.b)] < joint_.cutoff(p.b))
                uf.unite(idx, idx + joint_.stride(p.a) + joint_.stride(p.b));
        }
    }

    // Group indices by component root, ordered by smallest member.
    std::vector<std::vector<Index>> comps;
    std::vector<Index> comp_of(static_cast<size_t>(n), -1);
    for (Index idx = 0; idx < n; ++idx) {
        const Index root = uf.find(idx);
        if (comp_of[static_cast<size_t>(root)] < 0) {
            comp_of[static_cast<size_t>(root)] = static_cast<Index>(comps.size());
            comps.emplace_back();
        }
        comps[static_cast<size_t>(comp_of[static_cast<size_t>(root)])].push_back(idx);
    }

    perm_.reserve(static_cast<size_t>(n));
    inv_perm_.assign(static_cast<size_t>(n), 0);
    blocks_.reserve(comps.size());

    std::vector<Index> local(static_cast<size_t>(n), -1);
    for (const auto& members : comps) {
        const Index k = static_cast<Index>(members.size());
        const Index offset = static_cast<Index>(perm_.size());
        for (Index i = 0; i < k; ++i) {
            local[static_cast<size_t>(members[static_cast<size_t>(i)])] = i;
            inv_perm_[static_cast<size_t>(members[static_cast<size_t>(i)])] =
                offset + i;
            perm_.push_back(members[static_cast<size_t>(i)]);
        }

        // Dense Hamiltonian block: fill column by column by applying every
        // term to each member state.
        Mat h = Mat::Zero(k, k);
        for (Index col = 0; col < k; ++col) {
            const Index idx = members[static_cast<size_t>(col)];
            joint_.occupation(idx, occ);
            for (const Hop& t : terms.hops) {
                const int nf = occ[static_cast<size_t>(t.from)];
                if (t.from == t.to) {
                    h(col, col) += t.w * double(nf);
                    continue;
                }
                if (nf >= 1 && occ[static_cast<size_t>(t.to)] < joint_.cutoff(t.to)) {
                    const Index tgt =
                        idx - joint_.stride(t.from) + joint_.stride(t.to);
                    h(local[static_cast<size_t>(tgt)], col) +=
                        t.w * std::sqrt(double(nf) *
                                        double(occ[static_cast<size_t>(t.to)] + 1));
                }
            }
            for (const Pair& t : terms.pairs) {
                const int na = occ[static_cast<size_t>(t.a)];
                const int nb = occ[static_cast<size_t>(t.b)];
                if (na < joint_.cutoff(t.a) && nb < joint_.cutoff(t.b)) {
                    const Index tgt = idx + joint_.stride(t.a) + joint_.stride(t.b);
                    h(local[static_cast<size_t>(tgt)], col) +=
                        t.w * std::sqrt(double(na + 1) * double(nb + 1));
                }
                if (na >= 1 && nb >= 1) {
                    const Index tgt = idx - joint_.stride(t.a) - joint_.stride(t.b);
                    h(local[static_cast<size_t>(tgt)], col) +=
                        std::conj(t.w) * std::sqrt(double(na) * double(nb));
                }
            }
        }
        h = 0.5 * (h + h.adjoint()).eval();

        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        if (es.info() != Eigen::Success)
            throw error("eigensolver failed on a Hamiltonian block");
        const Eigen::VectorXd ev = es.eigenvalues();
        Vec phase(k);
        for (Index i = 0; i < k; ++i)
            phase(i) = std::exp(std::complex<double>(0.0, -ev(i)));
        kernels::BlockU blk;
        blk.offset = offset;
        blk.u = es.eigenvectors() * phase.asDiagonal() *
                es.eigenvectors().adjoint();
        blocks_.push_back(std::move(blk));
    }
}

Index Dilation::max_block_dim() const {
    Index m = 0;
    for (const auto& b : blocks_) m = std::max(m, b.u.rows());
    return m;
}

Vec Dilation::apply(const Vec& joint_state, Exec ex) const {
    if (joint_state.size() != joint_.dim())
        throw dimension_error("state does not match the joint register");
    Vec permuted, result, out;
    kernels::remap_vec(joint_state, perm_, permuted, ex);
    kernels::block_apply(blocks_, permuted, result, ex);
    kernels::remap_vec(result, inv_perm_, out, ex);
    return out;
}

Mat Dilation::sandwich(const Mat& joint_rho, Exec ex) const {
    if (joint_rho.rows() != joint_.dim() || joint_rho.cols() != joint_.dim())
        throw dimension_error("operator does not match the joint register");
    Mat permuted, result, out;
    kernels::remap(joint_rho, perm_, permuted, ex);
    kernels::block_sandwich(blocks_, permuted, result, ex);
    kernels::remap(result, inv_perm_, out, ex);
    return out;
}

} // namespace qlink::fourport
