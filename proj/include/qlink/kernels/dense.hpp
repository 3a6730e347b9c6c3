#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qlink/kernels/exec.hpp"

namespace qlink::kernels {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// out = a (x) b with the second factor fastest: out(i*rb + k, j*cb + l) =
/// a(i,j) * b(k,l). Matches row-major occupation-tuple enumeration.
void kron(const Mat& a, const Mat& b, Mat& out, Exec ex);

/// Kronecker product of vectors, second factor fastest.
void kron_vec(const Vec& a, const Vec& b, Vec& out, Exec ex);

/// Sum out a subsystem. `base[i]` is the full-space index of kept sub-basis
/// element i with all traced digits zero, `off[k]` the index of traced
/// element k with all kept digits zero (indices are additive across disjoint
/// digit groups): out(i,j) = sum_k rho(base[i]+off[k], base[j]+off[k]).
void trace_out(const Mat& rho, const std::vector<Index>& base,
               const std::vector<Index>& off, Mat& out, Exec ex);

/// Basis relabeling of rows and columns: out(i,j) = rho(map[i], map[j]).
void remap(const Mat& rho, const std::vector<Index>& map, Mat& out, Exec ex);

/// Vector counterpart: out(i) = v(map[i]).
void remap_vec(const Vec& v, const std::vector<Index>& map, Vec& out, Exec ex);

/// Transpose a subsystem. Each full index r splits additively into a kept
/// part keep_off[r] and a transposed part tr_off[r]; then
/// out(r,c) = rho(keep_off[r]+tr_off[c], keep_off[c]+tr_off[r]).
void partial_transpose(const Mat& rho, const std::vector<Index>& keep_off,
                       const std::vector<Index>& tr_off, Mat& out, Exec ex);

/// One block of a block-diagonal unitary in a contiguous (permuted) basis.
struct BlockU {
    Index offset = 0; ///< first basis index the block acts on
    Mat u;            ///< dense unitary of size block_dim x block_dim
};

/// rho_out = U rho U^dag for U = direct sum of `blocks`. Blocks must tile
/// [0, dim) without gaps.
void block_sandwich(const std::vector<BlockU>& blocks, const Mat& rho,
                    Mat& out, Exec ex);

/// out = U v for the same block-diagonal U.
void block_apply(const std::vector<BlockU>& blocks, const Vec& v, Vec& out,
                 Exec ex);

/// Deterministic parallel loop over independent rows of work. `fn(i)` must
/// only write state owned by row i.
void for_each_index(Index n, const std::function<void(Index)>& fn, Exec ex);

} // namespace qlink::kernels
