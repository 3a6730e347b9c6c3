// Timing comparison of the serial and OpenMP execution paths of the dense
// kernels, plus one end-to-end channel application. Both paths compute each
// output element with the same summation order, so results are checked to be
// bit-identical; the speedup depends on OMP_NUM_THREADS and is ~1 on a
// single-core host.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "qlink/fock/factories.hpp"
#include "qlink/fourport/channel.hpp"
#include "qlink/kernels/dense.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace qlink;
using kernels::Exec;
using kernels::Index;
using kernels::Mat;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(
               clock::now().time_since_epoch())
        .count();
}

template <typename F> double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        f();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

Mat random_matrix(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    Mat m(n, n);
    for (Index c = 0; c < n; ++c)
        for (Index r = 0; r < n; ++r) m(r, c) = {dist(rng), dist(rng)};
    return m;
}

/// Deterministic block-diagonal unitary covering [0, dim).
std::vector<kernels::BlockU> random_blocks(Index dim, Index max_block,
                                           std::mt19937_64& rng) {
    std::vector<kernels::BlockU> blocks;
    std::uniform_int_distribution<Index> size_dist(1, max_block);
    Index at = 0;
    while (at < dim) {
        const Index n = std::min(size_dist(rng), dim - at);
        const Mat g = random_matrix(n, rng);
        Eigen::HouseholderQR<Mat> qr(g);
        blocks.push_back({at, qr.householderQ() * Mat::Identity(n, n)});
        at += n;
    }
    return blocks;
}

bool same_bits(const Mat& a, const Mat& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a - b).cwiseAbs().maxCoeff() == 0.0;
}

void report(const char* name, double serial_ms, double parallel_ms,
            bool identical) {
    std::printf("%-22s serial %9.3f ms   parallel %9.3f ms   x%5.2f   %s\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "bit-identical" : "MISMATCH");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP max threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n");
#endif

    std::mt19937_64 rng(0xbe7c0ffeeULL);
    const Index dim = 768;
    const Mat rho_raw = random_matrix(dim, rng);
    const Mat rho = (rho_raw + rho_raw.adjoint()).eval();

    { // block_sandwich
        const auto blocks = random_blocks(dim, 96, rng);
        Mat out_s, out_p;
        const double ts = best_of(
            3, [&] { kernels::block_sandwich(blocks, rho, out_s, Exec::serial); });
        const double tp = best_of(3, [&] {
            kernels::block_sandwich(blocks, rho, out_p, Exec::parallel);
        });
        report("block_sandwich", ts, tp, same_bits(out_s, out_p));
    }

    { // kron
        const Mat a = random_matrix(48, rng);
        const Mat b = random_matrix(16, rng);
        Mat out_s, out_p;
        const double ts =
            best_of(3, [&] { kernels::kron(a, b, out_s, Exec::serial); });
        const double tp =
            best_of(3, [&] { kernels::kron(a, b, out_p, Exec::parallel); });
        report("kron", ts, tp, same_bits(out_s, out_p));
    }

    { // trace_out of the second factor of a 64 x 12 register
        const Index keep = 64, drop = 12;
        std::vector<Index> base(static_cast<size_t>(keep));
        std::vector<Index> off(static_cast<size_t>(drop));
        for (Index i = 0; i < keep; ++i)
            base[static_cast<size_t>(i)] = i * drop;
        for (Index k = 0; k < drop; ++k) off[static_cast<size_t>(k)] = k;
        const Mat big = random_matrix(keep * drop, rng);
        Mat out_s, out_p;
        const double ts = best_of(
            5, [&] { kernels::trace_out(big, base, off, out_s, Exec::serial); });
        const double tp = best_of(5, [&] {
            kernels::trace_out(big, base, off, out_p, Exec::parallel);
        });
        report("trace_out", ts, tp, same_bits(out_s, out_p));
    }

    { // end-to-end: thermal absorber channel on a two-mode squeezed input
        const fock::ModeLayout field({9, 9});
        const fock::TmsvState tmsv = fock::make_tmsv(0.4, field);
        const fock::DensityOperator rho_in =
            fock::DensityOperator::from_pure(tmsv.state);
        const fourport::DeviceSpec dev =
            fourport::scalar_device(0.8, 0.75, +1, 0.2);
        fourport::ChannelOptions opt;
        opt.device_cutoff = 8; // keeps the n_th = 0.2 tail inside the budget
        opt.exec = Exec::serial;
        fourport::ChannelResult rs = fourport::apply_channel(rho_in, dev, opt);
        const double ts =
            best_of(2, [&] { rs = fourport::apply_channel(rho_in, dev, opt); });
        opt.exec = Exec::parallel;
        fourport::ChannelResult rp = fourport::apply_channel(rho_in, dev, opt);
        const double tp =
            best_of(2, [&] { rp = fourport::apply_channel(rho_in, dev, opt); });
        report("apply_channel", ts, tp,
               same_bits(rs.state.matrix(), rp.state.matrix()));
    }

    return 0;
}
