#include "modalrepair/decomposition.hpp"

#include "modalrepair/errors.hpp"
#include "modalrepair/log.hpp"
#include "modalrepair/mft.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace modalrepair {

namespace {

constexpr double kRankTolerance = 1e-13;

Tensor matrix_to_tensor(const Eigen::MatrixXd& m) {
    Tensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(t.data().data(), m.rows(),
                                                                                       m.cols()) = m;
    return t;
}

Eigen::MatrixXd tensor_to_matrix(const Tensor& t) {
    if (t.order() != 2) throw IoError("factor file must hold an order-2 tensor");
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        t.data().data(), static_cast<Eigen::Index>(t.dim(0)), static_cast<Eigen::Index>(t.dim(1)));
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void write_manifest(const std::filesystem::path& dir, const nlohmann::json& j) {
    std::ofstream os(dir / "manifest.json");
    if (!os) throw IoError("cannot write manifest in " + dir.string());
    os << j.dump(2) << '\n';
}

nlohmann::json read_manifest(const std::filesystem::path& dir) {
    std::ifstream is(dir / "manifest.json");
    if (!is) throw IoError("missing manifest.json in " + dir.string());
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad manifest in " + dir.string() + ": " + e.what());
    }
}

struct ThinSvd {
    Eigen::MatrixXd u;   // m x r
    Eigen::VectorXd s;   // r = min(m, n)
    Eigen::MatrixXd vt;  // r x n, empty unless requested
};

// Economy SVD by one-sided Jacobi after a QR preconditioner. The
// divide-and-conquer drivers (Eigen's BDCSVD, LAPACK dgesdd) produced
// non-finite or wrong factors on some of our unfoldings.
ThinSvd thin_svd(const Eigen::MatrixXd& a, bool want_v) {
    const unsigned options = want_v ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : Eigen::ComputeThinU;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, options);
    ThinSvd out{svd.matrixU(), svd.singularValues(), {}};
    if (want_v) out.vt = svd.matrixV().transpose();
    if (!out.u.allFinite() || !out.s.allFinite()) throw NumericalError("SVD produced non-finite factors");
    return out;
}

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw NumericalError(std::string(what) + ": input contains NaN or Inf; fill gaps first");
}

}  // namespace

RankRule RankRule::fixed(std::size_t n) {
    if (n == 0) throw ArgumentError("fixed rank must be >= 1");
    return {Kind::Fixed, n, 0.0};
}

RankRule RankRule::threshold(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ArgumentError("threshold must lie in (0, 1)");
    return {Kind::Threshold, 0, epsilon};
}

RankRule RankRule::full() { return {Kind::Full, 0, 0.0}; }

std::size_t RankRule::select(std::span<const double> sigma) const {
    const std::size_t available = sigma.size();
    if (available == 0) return 0;
    switch (kind_) {
        case Kind::Fixed:
            return std::min(rank_, available);
        case Kind::Full:
            return available;
        case Kind::Threshold: {
            if (!(sigma[0] > 0.0)) return 1;
            for (std::size_t n = 1; n < available; ++n)
                if (sigma[n] / sigma[0] <= epsilon_) return n;
            return available;
        }
    }
    return available;
}

std::string RankRule::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Fixed: os << "fixed:" << rank_; break;
        case Kind::Threshold: os << "threshold:" << epsilon_; break;
        case Kind::Full: os << "full"; break;
    }
    return os.str();
}

std::size_t numerical_rank(std::span<const double> sigma) {
    if (sigma.empty() || !(sigma[0] > 0.0)) return 0;
    const double cut = kRankTolerance * sigma[0];
    return static_cast<std::size_t>(std::count_if(sigma.begin(), sigma.end(), [cut](double s) { return s > cut; }));
}

void canonicalize_signs(Eigen::MatrixXd& vectors, Eigen::MatrixXd* partner) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double a = std::abs(vectors(r, c));
            if (a > best_abs) {
                best_abs = a;
                best = r;
            }
        }
        if (vectors(best, c) < 0.0) {
            vectors.col(c) = -vectors.col(c);
            if (partner) partner->col(c) = -partner->col(c);
        }
    }
}

TruncatedSVD svd_truncated(const SnapshotMatrix& m, const RankRule& rule) {
    require_finite(m, "svd_truncated");
    if (m.size() == 0) throw DimensionError("svd_truncated: empty matrix");

    const ThinSvd svd = thin_svd(m, true);
    const Eigen::VectorXd& s = svd.s;
    const std::span<const double> spectrum(s.data(), static_cast<std::size_t>(s.size()));

    const std::size_t n = rule.select(spectrum);
    if (rule.kind() == RankRule::Kind::Fixed && rule.rank() > spectrum.size())
        logger().warn("requested rank {} exceeds min(J, K) = {}; clamped", rule.rank(), spectrum.size());

    TruncatedSVD out;
    const auto keep = static_cast<Eigen::Index>(n);
    out.modes = svd.u.leftCols(keep);
    out.temporal = svd.vt.topRows(keep).transpose();
    out.sigma = s.head(keep);
    out.spectrum = s;
    canonicalize_signs(out.modes, &out.temporal);
    return out;
}

SnapshotMatrix svd_reconstruct(const TruncatedSVD& f) {
    return f.modes * f.sigma.asDiagonal() * f.temporal.transpose();
}

TuckerDecomposition hosvd(const Tensor& t, std::span<const RankRule> rules) {
    if (rules.size() != t.order())
        throw ArgumentError("hosvd needs one rank rule per mode (" + std::to_string(t.order()) + "), got " +
                            std::to_string(rules.size()));
    if (!t.all_finite()) throw NumericalError("hosvd: input contains NaN or Inf; fill gaps first");

    TuckerDecomposition out;
    out.factors.resize(t.order());
    out.sigma.resize(t.order());
    for (std::size_t mode = 0; mode < t.order(); ++mode) {
        const Eigen::MatrixXd unfolded = mode_unfold(t, mode);
        const ThinSvd svd = thin_svd(unfolded, false);
        const Eigen::VectorXd& s = svd.s;
        const std::size_t keep = rules[mode].select({s.data(), static_cast<std::size_t>(s.size())});
        if (rules[mode].kind() == RankRule::Kind::Fixed && rules[mode].rank() > keep)
            logger().debug("mode {}: rank {} clamped to {}", mode, rules[mode].rank(), keep);
        out.factors[mode] = svd.u.leftCols(static_cast<Eigen::Index>(keep));
        canonicalize_signs(out.factors[mode]);
        out.sigma[mode] = s;
    }

    Tensor core = t;
    for (std::size_t mode = 0; mode < t.order(); ++mode)
        core = mode_product(core, out.factors[mode].transpose(), mode);
    out.core = std::move(core);
    return out;
}

TuckerDecomposition hosvd(const Tensor& t, const RankRule& rule) {
    const std::vector<RankRule> rules(t.order(), rule);
    return hosvd(t, rules);
}

Tensor hosvd_reconstruct(const TuckerDecomposition& d) {
    if (d.factors.size() != d.core.order()) throw DimensionError("factor count does not match core order");
    Tensor out = d.core;
    for (std::size_t mode = 0; mode < d.factors.size(); ++mode) out = mode_product(out, d.factors[mode], mode);
    return out;
}

MergedTucker merge_spatial(const TuckerDecomposition& d) {
    const std::size_t last = d.factors.size() - 1;
    Tensor spatial = d.core;
    for (std::size_t mode = 0; mode < last; ++mode) spatial = mode_product(spatial, d.factors[mode], mode);
    return {unfold(spatial), d.factors[last]};
}

void save(const std::filesystem::path& dir, const TruncatedSVD& f) {
    std::filesystem::create_directories(dir);
    mft::write(dir / "modes.mft", matrix_to_tensor(f.modes));
    mft::write(dir / "temporal.mft", matrix_to_tensor(f.temporal));
    nlohmann::json j;
    j["kind"] = "svd";
    j["rank"] = f.rank();
    j["sigma"] = to_vector(f.sigma);
    j["spectrum"] = to_vector(f.spectrum);
    j["files"] = {{"modes", "modes.mft"}, {"temporal", "temporal.mft"}};
    write_manifest(dir, j);
}

void save(const std::filesystem::path& dir, const TuckerDecomposition& d) {
    std::filesystem::create_directories(dir);
    mft::write(dir / "core.mft", d.core);
    nlohmann::json j;
    j["kind"] = "tucker";
    j["order"] = d.factors.size();
    j["ranks"] = d.core.dims();
    nlohmann::json modes = nlohmann::json::array();
    for (std::size_t l = 0; l < d.factors.size(); ++l) {
        const std::string name = "factor_" + std::to_string(l) + ".mft";
        mft::write(dir / name, matrix_to_tensor(d.factors[l]));
        modes.push_back({{"mode", l},
                         {"role", l + 1 == d.factors.size() ? "temporal" : "spatial"},
                         {"dim", d.factors[l].rows()},
                         {"rank", d.factors[l].cols()},
                         {"file", name},
                         {"sigma", to_vector(d.sigma[l])}});
    }
    j["modes"] = modes;
    j["core"] = "core.mft";
    write_manifest(dir, j);
}

TruncatedSVD load_svd(const std::filesystem::path& dir) {
    const auto j = read_manifest(dir);
    if (j.value("kind", "") != "svd") throw IoError(dir.string() + " does not hold an SVD");
    TruncatedSVD f;
    f.modes = tensor_to_matrix(mft::read(dir / j["files"]["modes"].get<std::string>()));
    f.temporal = tensor_to_matrix(mft::read(dir / j["files"]["temporal"].get<std::string>()));
    f.sigma = from_vector(j["sigma"].get<std::vector<double>>());
    f.spectrum = from_vector(j["spectrum"].get<std::vector<double>>());
    return f;
}

TuckerDecomposition load_tucker(const std::filesystem::path& dir) {
    const auto j = read_manifest(dir);
    if (j.value("kind", "") != "tucker") throw IoError(dir.string() + " does not hold a Tucker decomposition");
    TuckerDecomposition d;
    d.core = mft::read(dir / j["core"].get<std::string>());
    for (const auto& m : j["modes"]) {
        d.factors.push_back(tensor_to_matrix(mft::read(dir / m["file"].get<std::string>())));
        d.sigma.push_back(from_vector(m["sigma"].get<std::vector<double>>()));
    }
    return d;
}

}  // namespace modalrepair
