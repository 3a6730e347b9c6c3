#include "qlink/kernels/dense.hpp"

#include <stdexcept>

namespace qlink::kernels {

void kron(const Mat& a, const Mat& b, Mat& out, Exec ex) {
    const Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    out.resize(ra * rb, ca * cb);
    const bool par = ex == Exec::parallel;
#pragma omp parallel for if (par) schedule(static)
    for (Index i = 0; i < ra; ++i)
        for (Index j = 0; j < ca; ++j)
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
}

void kron_vec(const Vec& a, const Vec& b, Vec& out, Exec ex) {
    const Index na = a.size(), nb = b.size();
    out.resize(na * nb);
    const bool par = ex == Exec::parallel;
#pragma omp parallel for if (par) schedule(static)
    for (Index i = 0; i < na; ++i) out.segment(i * nb, nb) = a(i) * b;
}

void trace_out(const Mat& rho, const std::vector<Index>& base,
               const std::vector<Index>& off, Mat& out, Exec ex) {
    const Index n = static_cast<Index>(base.size());
    const Index m = static_cast<Index>(off.size());
    out.resize(n, n);
    const bool par = ex == Exec::parallel;
#pragma omp parallel for if (par) schedule(static)
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) {
            cxd s = 0.0;
            for (Index k = 0; k < m; ++k)
                s += rho(base[i] + off[k], base[j] + off[k]);
            out(i, j) = s;
        }
}

void remap(const Mat& rho, const std::vector<Index>& map, Mat& out, Exec ex) {
    const Index n = static_cast<Index>(map.size());
    out.resize(n, n);
    const bool par = ex == Exec::parallel;
#pragma omp parallel for if (par) schedule(static)
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) out(i, j) = rho(map[i], map[j]);
}

void remap_vec(const Vec& v, const std::vector<Index>& map, Vec& out, Exec ex) {
    const Index n = static_cast<Index>(map.size());
    out.resize(n);
    const bool par = ex == Exec::parallel;
#pragma omp parallel for if (par) schedule(static)
    for (Index i = 0; i < n; ++i) out(i) = v(map[i]);
}

void partial_transpose(const Mat& rho, const std::vector<Index>& keep_off,
                       const std::vector<Index>& tr_off, Mat& out, Exec ex) {
    const Index n = rho.rows();
    out.resize(n, n);
    const bool par = ex == Exec::parallel;
#pragma omp parallel for if (par) schedule(static)
    for (Index c = 0; c < n; ++c)
        for (Index r = 0; r < n; ++r)
            out(r, c) = rho(keep_off[r] + tr_off[c], keep_off[c] + tr_off[r]);
}

void block_sandwich(const std::vector<BlockU>& blocks, const Mat& rho,
                    Mat& out, Exec ex) {
    const Index n = rho.rows();
    Mat tmp(n, n);
    const bool par = ex == Exec::parallel;
    const Index nb = static_cast<Index>(blocks.size());
    // Two passes of disjoint row/column strips keep every output element
    // owned by a single thread.
#pragma omp parallel for if (par) schedule(dynamic)
    for (Index b = 0; b < nb; ++b) {
        const auto& blk = blocks[b];
        const Index k = blk.u.rows();
        tmp.middleRows(blk.offset, k).noalias() =
            blk.u * rho.middleRows(blk.offset, k);
    }
    out.resize(n, n);
#pragma omp parallel for if (par) schedule(dynamic)
    for (Index b = 0; b < nb; ++b) {
        const auto& blk = blocks[b];
        const Index k = blk.u.rows();
        out.middleCols(blk.offset, k).noalias() =
            tmp.middleCols(blk.offset, k) * blk.u.adjoint();
    }
}

void block_apply(const std::vector<BlockU>& blocks, const Vec& v, Vec& out,
                 Exec ex) {
    out.resize(v.size());
    const bool par = ex == Exec::parallel;
    const Index nb = static_cast<Index>(blocks.size());
#pragma omp parallel for if (par) schedule(dynamic)
    for (Index b = 0; b < nb; ++b) {
        const auto& blk = blocks[b];
        const Index k = blk.u.rows();
        out.segment(blk.offset, k).noalias() = blk.u * v.segment(blk.offset, k);
    }
}

void for_each_index(Index n, const std::function<void(Index)>& fn, Exec ex) {
    const bool par = ex == Exec::parallel;
#pragma omp parallel for if (par) schedule(dynamic)
    for (Index i = 0; i < n; ++i) fn(i);
}

} // namespace qlink::kernels
