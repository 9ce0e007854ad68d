#include "modalrepair/error_analysis.hpp"

#include "modalrepair/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>

namespace modalrepair {

namespace {

std::size_t spatial_axes_of_error(const Tensor& e) { return e.order() - 1; }

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double t = pos - static_cast<double>(lo);
    return (1.0 - t) * sorted[lo] + t * sorted[hi];
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double rrmse(std::span<const double> original, std::span<const double> approx) {
    if (original.size() != approx.size()) throw DimensionError("rrmse: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < original.size(); ++i) {
        const double d = original[i] - approx[i];
        num += d * d;
        den += original[i] * original[i];
    }
    if (!(den > 0.0)) throw NumericalError("rrmse undefined: original data is identically zero");
    return std::sqrt(num / den);
}

double rrmse(const Tensor& original, const Tensor& approx) {
    require_same_shape(original.dims(), approx.dims(), "rrmse");
    return rrmse(original.data(), approx.data());
}

double rrmse(const SnapshotMatrix& original, const SnapshotMatrix& approx) {
    if (original.rows() != approx.rows() || original.cols() != approx.cols())
        throw DimensionError("rrmse: matrix shapes differ");
    return rrmse(std::span(original.data(), static_cast<std::size_t>(original.size())),
                 std::span(approx.data(), static_cast<std::size_t>(approx.size())));
}

std::vector<Tensor> component_errors(const Tensor& original, const Tensor& recon) {
    require_snapshot_tensor(original);
    require_same_shape(original.dims(), recon.dims(), "component_errors");
    const std::size_t n_comp = original.components();
    Shape dims = original.order() == 2 ? original.dims() : Shape(original.dims().begin() + 1, original.dims().end());
    const std::size_t per = shape_product(dims);
    std::vector<Tensor> out;
    out.reserve(n_comp);
    for (std::size_t c = 0; c < n_comp; ++c) {
        Tensor e(dims);
        for (std::size_t i = 0; i < per; ++i) e[i] = original[c * per + i] - recon[c * per + i];
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<Tensor> normalize_errors(const std::vector<Tensor>& errors) {
    std::vector<Tensor> out;
    out.reserve(errors.size());
    for (const auto& e : errors) {
        double peak = 0.0;
        for (double v : e.data()) peak = std::max(peak, std::abs(v));
        Tensor n = e;
        if (peak > 0.0)
            for (double& v : n.data()) v /= peak;
        else
            std::fill(n.data().begin(), n.data().end(), 0.0);
        out.push_back(std::move(n));
    }
    return out;
}

double Pdf::integral() const {
    double s = 0.0;
    for (double d : densities) s += d * bin_width;
    return s;
}

Pdf error_pdf(std::span<const double> samples, const PdfOptions& opts) {
    if (samples.size() < 2) throw ArgumentError("error_pdf needs at least two samples");
    if (opts.bins < 2) throw ArgumentError("error_pdf needs at least two bins");
    for (double v : samples)
        if (!std::isfinite(v)) throw NumericalError("error_pdf: non-finite sample");

    const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *mn_it, hi = *mx_it;
    Pdf pdf;
    if (!(hi > lo)) {
        pdf.centers = {lo};
        pdf.densities = {1.0};
        pdf.bin_width = 1.0;
        return pdf;
    }

    const auto n = static_cast<double>(samples.size());
    const std::size_t bins = opts.bins;
    if (!opts.smooth) {
        pdf.bin_width = (hi - lo) / static_cast<double>(bins);
        std::vector<std::size_t> counts(bins, 0);
        for (double v : samples) {
            auto b = static_cast<std::size_t>((v - lo) / pdf.bin_width);
            counts[std::min(b, bins - 1)]++;
        }
        pdf.centers.resize(bins);
        pdf.densities.resize(bins);
        for (std::size_t b = 0; b < bins; ++b) {
            pdf.centers[b] = lo + (static_cast<double>(b) + 0.5) * pdf.bin_width;
            pdf.densities[b] = static_cast<double>(counts[b]) / (n * pdf.bin_width);
        }
        return pdf;
    }

    // Silverman's rule of thumb.
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / (n - 1.0));
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (!(spread > 0.0)) spread = sd;
    const double bandwidth = 0.9 * spread * std::pow(n, -0.2);

    const double a = lo - 3.0 * bandwidth, b = hi + 3.0 * bandwidth;
    pdf.bin_width = (b - a) / static_cast<double>(bins);
    pdf.centers.resize(bins);
    pdf.densities.assign(bins, 0.0);
    const double norm = 1.0 / (n * bandwidth * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t i = 0; i < bins; ++i) {
        const double x = a + (static_cast<double>(i) + 0.5) * pdf.bin_width;
        pdf.centers[i] = x;
        double acc = 0.0;
        for (double v : sorted) {
            const double z = (x - v) / bandwidth;
            if (std::abs(z) < 8.0) acc += std::exp(-0.5 * z * z);
        }
        pdf.densities[i] = acc * norm;
    }
    // Rescale so the discretized curve carries unit mass.
    const double mass = pdf.integral();
    if (mass > 0.0)
        for (double& d : pdf.densities) d /= mass;
    return pdf;
}

std::vector<WorstLocation> worst_snapshot(const std::vector<Tensor>& errors) {
    std::vector<WorstLocation> out;
    for (const auto& e : errors) {
        const std::size_t k_count = e.dims().back();
        const std::size_t per = e.size() / k_count;
        const bool three_d = spatial_axes_of_error(e) == 3;
        const std::size_t n_planes = three_d ? e.dim(2) : 1;
        WorstLocation w;
        double best = -1.0;
        for (std::size_t k = 0; k < k_count; ++k) {
            double peak = -1.0;
            std::size_t peak_s = 0;
            for (std::size_t s = 0; s < per; ++s) {
                const double a = std::abs(e[s * k_count + k]);
                if (a > peak) {
                    peak = a;
                    peak_s = s;
                }
            }
            if (peak > best) {
                best = peak;
                w.snapshot = k;
                w.max_abs = peak;
                if (three_d) w.plane = peak_s % n_planes;
            }
        }
        out.push_back(w);
    }
    return out;
}

ReconstructionReport analyze(const Tensor& original, const Tensor& recon, const AnalysisOptions& opts) {
    ReconstructionReport r;
    r.rrmse = rrmse(original, recon);
    r.component_error = component_errors(original, recon);
    r.normalized_error = normalize_errors(r.component_error);
    r.worst = worst_snapshot(r.component_error);
    for (const auto& e : r.component_error) {
        r.pdf.push_back(error_pdf(e.data(), opts.pdf));
        if (opts.per_snapshot_pdf) {
            const std::size_t k_count = e.dims().back();
            const std::size_t per = e.size() / k_count;
            std::vector<Pdf> snaps;
            std::vector<double> buf(per);
            for (std::size_t k = 0; k < k_count; ++k) {
                for (std::size_t s = 0; s < per; ++s) buf[s] = e[s * k_count + k];
                snaps.push_back(per >= 2 ? error_pdf(buf, opts.pdf) : Pdf{{buf[0]}, {1.0}, 1.0});
            }
            r.pdf_per_snapshot.push_back(std::move(snaps));
        }
    }
    return r;
}

nlohmann::json to_json(const ReconstructionReport& r) {
    nlohmann::json j;
    j["rrmse"] = r.rrmse;
    char pct[32];
    std::snprintf(pct, sizeof pct, "%.2f", 100.0 * r.rrmse);
    j["rrmse_percent"] = pct;
    nlohmann::json comps = nlohmann::json::array();
    for (std::size_t c = 0; c < r.component_error.size(); ++c) {
        const auto& e = r.component_error[c];
        double peak = 0.0, sq = 0.0;
        for (double v : e.data()) {
            peak = std::max(peak, std::abs(v));
            sq += v * v;
        }
        nlohmann::json cj;
        cj["component"] = c;
        cj["max_abs_error"] = peak;
        cj["rms_error"] = std::sqrt(sq / static_cast<double>(e.size()));
        cj["worst_snapshot"] = r.worst[c].snapshot;
        if (r.worst[c].plane) cj["worst_plane"] = *r.worst[c].plane;
        cj["pdf"] = {{"bin_width", r.pdf[c].bin_width},
                     {"centers", r.pdf[c].centers},
                     {"densities", r.pdf[c].densities},
                     {"integral", r.pdf[c].integral()}};
        comps.push_back(cj);
    }
    j["components"] = comps;
    return j;
}

Eigen::MatrixXd absolute_error_slice(const Tensor& error, std::size_t snapshot, std::size_t plane) {
    const std::size_t k_count = error.dims().back();
    if (snapshot >= k_count) throw DimensionError("snapshot index out of range");
    const std::size_t axes = spatial_axes_of_error(error);
    if (axes == 1) {
        Eigen::MatrixXd m(1, static_cast<Eigen::Index>(error.dim(0)));
        for (std::size_t i = 0; i < error.dim(0); ++i) m(0, static_cast<Eigen::Index>(i)) = std::abs(error[i * k_count + snapshot]);
        return m;
    }
    const std::size_t n0 = error.dim(0), n1 = error.dim(1);
    const std::size_t n2 = axes == 3 ? error.dim(2) : 1;
    if (plane >= n2) throw DimensionError("plane index out of range");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n0), static_cast<Eigen::Index>(n1));
    for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = 0; j < n1; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::abs(error[((i * n1 + j) * n2 + plane) * k_count + snapshot]);
    return m;
}

void write_pgm16(const std::filesystem::path& path, const Eigen::MatrixXd& values) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    const double peak = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
    os << "P5\n";
    os << "# linear map: gray = round(65535 * value / " << fmt_double(peak) << "), rows = first spatial axis\n";
    os << values.cols() << ' ' << values.rows() << "\n65535\n";
    for (Eigen::Index r = 0; r < values.rows(); ++r)
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            const double v = peak > 0.0 ? std::abs(values(r, c)) / peak : 0.0;
            const auto g = static_cast<std::uint16_t>(std::lround(65535.0 * std::clamp(v, 0.0, 1.0)));
            const char bytes[2] = {static_cast<char>(g >> 8), static_cast<char>(g & 0xff)};
            os.write(bytes, 2);
        }
    if (!os) throw IoError("failed writing " + path.string());
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& values) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) os << (c ? "," : "") << fmt_double(values(r, c));
        os << '\n';
    }
}

void write_pdf_csv(const std::filesystem::path& path, const std::vector<Pdf>& pdfs) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << "component,center,density\n";
    for (std::size_t c = 0; c < pdfs.size(); ++c)
        for (std::size_t i = 0; i < pdfs[c].centers.size(); ++i)
            os << c << ',' << fmt_double(pdfs[c].centers[i]) << ',' << fmt_double(pdfs[c].densities[i]) << '\n';
}

}  // namespace modalrepair
