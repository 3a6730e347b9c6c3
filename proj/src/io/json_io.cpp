#include "qlink/io/json_io.hpp"

#include <fstream>

#include "qlink/errors.hpp"
#include "qlink/ent/measures.hpp"

namespace qlink::io {

namespace {

constexpr const char* kGaussianConvention = "xpxp;hbar=1;vacuum-variance=1/2";

json complex_to_json(const std::complex<double>& z) {
    return json::array({z.real(), z.imag()});
}

std::complex<double> complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw io_error("complex numbers must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

template <typename Mat>
json cmatrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd cmatrix_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw io_error("expected a nested array for a complex matrix");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[r].size()) != cols)
            throw io_error("ragged complex matrix");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

std::vector<int> cutoffs_from_json(const json& j) {
    if (!j.contains("cutoffs"))
        throw io_error("serialized Fock object lacks \"cutoffs\"");
    return j.at("cutoffs").get<std::vector<int>>();
}

} // namespace

json to_json(const fock::FockState& psi) {
    json amps = json::array();
    for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i)
        amps.push_back(complex_to_json(psi.amplitudes()(i)));
    return json{{"cutoffs", psi.layout().cutoffs()}, {"amplitudes", amps}};
}

fock::FockState fock_state_from_json(const json& j) {
    const fock::ModeLayout layout(cutoffs_from_json(j));
    const json& amps = j.at("amplitudes");
    if (static_cast<Eigen::Index>(amps.size()) != layout.dim())
        throw io_error("amplitude count does not match the layout dimension");
    Eigen::VectorXcd v(layout.dim());
    for (Eigen::Index i = 0; i < layout.dim(); ++i)
        v(i) = complex_from_json(amps[static_cast<size_t>(i)]);
    return fock::FockState(layout, std::move(v));
}

json to_json(const fock::DensityOperator& rho) {
    return json{{"cutoffs", rho.layout().cutoffs()},
                {"matrix", cmatrix_to_json(rho.matrix())},
                {"truncated_output", rho.truncated_output()}};
}

fock::DensityOperator density_from_json(const json& j) {
    const fock::ModeLayout layout(cutoffs_from_json(j));
    Eigen::MatrixXcd m = cmatrix_from_json(j.at("matrix"));
    if (m.rows() != layout.dim() || m.cols() != layout.dim())
        throw io_error("matrix shape does not match the layout dimension");
    const bool trunc = j.value("truncated_output", false);
    // Deserialized operators get the full validation: they are user input.
    return fock::DensityOperator(layout, std::move(m), trunc,
                                 fock::Validation::deep);
}

json to_json(const fourport::DeviceSpec& spec) {
    return json{{"sigma", spec.sigma},
                {"n_th", spec.n_th},
                {"T", cmatrix_to_json(spec.transmission)},
                {"A", cmatrix_to_json(spec.absorption)},
                {"tolerance", spec.tolerance}};
}

fourport::DeviceSpec device_from_json(const json& j) {
    if (!j.contains("sigma") || !j.contains("T"))
        throw io_error("device spec needs at least \"sigma\" and \"T\"");
    const int sigma = j.at("sigma").get<int>();
    const double n_th = j.value("n_th", 0.0);
    const double tol = j.value("tolerance", 1e-10);
    const Eigen::MatrixXcd t = cmatrix_from_json(j.at("T"));
    if (t.rows() != 2 || t.cols() != 2)
        throw io_error("transmission block must be 2x2");
    if (!j.contains("A"))
        return fourport::device_from_transmission(t, sigma, n_th, tol);
    const Eigen::MatrixXcd a = cmatrix_from_json(j.at("A"));
    if (a.rows() != 2 || a.cols() != 2)
        throw io_error("absorption block must be 2x2");
    fourport::DeviceSpec spec;
    spec.transmission = t;
    spec.absorption = a;
    spec.sigma = sigma;
    spec.n_th = n_th;
    spec.tolerance = tol;
    spec.validate();
    return spec;
}

json to_json(const gaussian::GaussianState& g) {
    json cov = json::array();
    for (Eigen::Index i = 0; i < g.cov.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j2 = 0; j2 < g.cov.cols(); ++j2)
            row.push_back(g.cov(i, j2));
        cov.push_back(std::move(row));
    }
    return json{{"mean", std::vector<double>(g.mean.data(),
                                             g.mean.data() + g.mean.size())},
                {"cov", cov},
                {"convention", kGaussianConvention}};
}

gaussian::GaussianState gaussian_from_json(const json& j) {
    if (j.contains("convention") &&
        j.at("convention").get<std::string>() != kGaussianConvention)
        throw io_error("unsupported quadrature convention: " +
                       j.at("convention").get<std::string>());
    gaussian::GaussianState g;
    const auto mean = j.at("mean").get<std::vector<double>>();
    g.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(),
                                               static_cast<Eigen::Index>(mean.size()));
    const json& cov = j.at("cov");
    const Eigen::Index n = static_cast<Eigen::Index>(cov.size());
    g.cov.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        if (static_cast<Eigen::Index>(cov[static_cast<size_t>(r)].size()) != n)
            throw io_error("covariance matrix must be square");
        for (Eigen::Index c = 0; c < n; ++c)
            g.cov(r, c) = cov[static_cast<size_t>(r)][static_cast<size_t>(c)]
                              .get<double>();
    }
    g.validate();
    return g;
}

json to_json(const ent::EntanglementReport& rep) {
    return json{{"measure", ent::measure_name(rep.measure)},
                {"value", rep.value},
                {"converged", rep.converged},
                {"iterations", rep.iterations},
                {"residual", rep.residual}};
}

StateKind detect_state_kind(const json& j) {
    if (j.contains("amplitudes")) return StateKind::fock_pure;
    if (j.contains("matrix")) return StateKind::fock_density;
    if (j.contains("cov")) return StateKind::gaussian_moments;
    throw io_error("unrecognized state document: expected \"amplitudes\", "
                   "\"matrix\" or \"cov\"");
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw io_error("cannot parse " + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace qlink::io
