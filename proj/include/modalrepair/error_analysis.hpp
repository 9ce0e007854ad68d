#pragma once

#include "modalrepair/tensor.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace modalrepair {

/// sqrt(sum_k |v_k - a_k|^2 / sum_k |v_k|^2) as a fraction.
double rrmse(std::span<const double> original, std::span<const double> approx);
double rrmse(const Tensor& original, const Tensor& approx);
double rrmse(const SnapshotMatrix& original, const SnapshotMatrix& approx);

/// Signed error original - recon, one tensor per component with the
/// component axis dropped (order-2 inputs give a single J x K error).
std::vector<Tensor> component_errors(const Tensor& original, const Tensor& recon);

/// Each component divided by its own max |error|; all-zero components stay zero.
std::vector<Tensor> normalize_errors(const std::vector<Tensor>& errors);

struct Pdf {
    std::vector<double> centers;
    std::vector<double> densities;
    double bin_width = 0.0;

    /// Sum of density * bin width.
    double integral() const;
};

struct PdfOptions {
    std::size_t bins = 101;
    /// Gaussian kernel estimate (Silverman bandwidth) instead of a histogram.
    bool smooth = false;
};

/// Density-normalized histogram over [min, max] of the samples. A constant
/// sample set gives a single unit-width bin of density 1 at that value.
Pdf error_pdf(std::span<const double> samples, const PdfOptions& opts = {});

struct WorstLocation {
    std::size_t snapshot = 0;
    std::optional<std::size_t> plane;  ///< index along the last spatial axis for 3-D data
    double max_abs = 0.0;
};

/// Per component: the snapshot whose largest |error| is highest (lowest index
/// on ties).
std::vector<WorstLocation> worst_snapshot(const std::vector<Tensor>& errors);

struct AnalysisOptions {
    PdfOptions pdf;
    bool per_snapshot_pdf = false;
};

struct ReconstructionReport {
    double rrmse = 0.0;
    std::vector<Tensor> component_error;
    std::vector<Tensor> normalized_error;
    std::vector<WorstLocation> worst;
    std::vector<Pdf> pdf;                            ///< per component, all entries
    std::vector<std::vector<Pdf>> pdf_per_snapshot;  ///< per component, per snapshot (optional)
};

ReconstructionReport analyze(const Tensor& original, const Tensor& recon, const AnalysisOptions& opts = {});

/// Summary fields (no error tensors).
nlohmann::json to_json(const ReconstructionReport& r);

/// |error| of one snapshot as a 2-D slice: for 3-D data the plane at
/// `plane` along the last spatial axis; 1-D data gives a single row.
Eigen::MatrixXd absolute_error_slice(const Tensor& error, std::size_t snapshot, std::size_t plane = 0);

/// 16-bit binary PGM (P5); gray = round(65535 * value / max), documented in a header comment.
void write_pgm16(const std::filesystem::path& path, const Eigen::MatrixXd& values);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& values);
void write_pdf_csv(const std::filesystem::path& path, const std::vector<Pdf>& pdfs);

}  // namespace modalrepair
