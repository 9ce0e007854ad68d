#include "helpers.hpp"

#include "modalrepair/error_analysis.hpp"
#include "modalrepair/errors.hpp"
#include "modalrepair/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <iterator>

using namespace modalrepair;

TEST(Rrmse, TrivialCases) {
    const auto t = testutil::random_tensor({1, 4, 3, 5}, 1);
    EXPECT_EQ(rrmse(t, t), 0.0);
    EXPECT_DOUBLE_EQ(rrmse(t, Tensor(t.dims())), 1.0);
    EXPECT_DOUBLE_EQ(rrmse(std::vector<double>{3, 4}, std::vector<double>{3, 0}), 0.8);
}

TEST(Rrmse, ZeroOriginalAndMismatch) {
    EXPECT_THROW(rrmse(Tensor({2, 2}), Tensor({2, 2}, 1.0)), NumericalError);
    EXPECT_THROW(rrmse(Tensor({2, 2}, 1.0), Tensor({2, 3}, 1.0)), DimensionError);
}

TEST(Rrmse, ScaleInvariant) {
    const auto a = testutil::random_tensor({2, 5, 4, 6}, 2);
    const auto b = testutil::random_tensor({2, 5, 4, 6}, 3);
    const double base = rrmse(a, b);
    for (double c : {-3.0, 1e-4, 250.0}) {
        Tensor ca = a, cb = b;
        for (auto& v : ca.data()) v *= c;
        for (auto& v : cb.data()) v *= c;
        EXPECT_NEAR(rrmse(ca, cb), base, 1e-12);
    }
}

TEST(Rrmse, MatrixOverloadAgrees) {
    const auto a = testutil::random_matrix(7, 4, 5);
    const auto b = testutil::random_matrix(7, 4, 6);
    EXPECT_DOUBLE_EQ(rrmse(a, b), rrmse(fold(a, {7, 4}), fold(b, {7, 4})));
}

TEST(ComponentErrors, IdenticalAndOffset) {
    const auto t = testutil::random_tensor({3, 4, 5, 2}, 7);
    for (const auto& e : component_errors(t, t))
        for (double v : e.data()) EXPECT_EQ(v, 0.0);
    Tensor shifted = t;
    for (auto& v : shifted.data()) v += 0.5;
    const auto errs = component_errors(t, shifted);
    ASSERT_EQ(errs.size(), 3u);
    EXPECT_EQ(errs[0].dims(), (Shape{4, 5, 2}));
    for (const auto& e : errs)
        for (double v : e.data()) EXPECT_NEAR(v, -0.5, 1e-15);
}

TEST(ComponentErrors, MatchesIndexLoop) {
    const auto a = testutil::random_tensor({2, 3, 4, 5}, 8);
    const auto b = testutil::random_tensor({2, 3, 4, 5}, 9);
    const auto errs = component_errors(a, b);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t k = 0; k < 5; ++k) {
                    const std::size_t full[] = {c, i, j, k}, part[] = {i, j, k};
                    EXPECT_EQ(errs[c].at(part), a.at(full) - b.at(full));
                }
    EXPECT_THROW(component_errors(a, Tensor({2, 3, 4, 6})), DimensionError);
}

TEST(ComponentErrors, MatrixGivesSingleError) {
    const auto a = testutil::random_tensor({6, 3}, 1);
    const auto errs = component_errors(a, Tensor({6, 3}));
    ASSERT_EQ(errs.size(), 1u);
    EXPECT_EQ(errs[0], a);
}

TEST(NormalizeErrors, Cases) {
    Tensor e({2, 2}, {1.0, -2.0, 0.5, 2.0});
    const auto n = normalize_errors({e, Tensor({2, 2})});
    EXPECT_EQ(n[0], Tensor({2, 2}, {0.5, -1.0, 0.25, 1.0}));
    for (double v : n[1].data()) EXPECT_EQ(v, 0.0);
}

TEST(NormalizeErrors, BoundedWithSameArgmax) {
    const auto e = testutil::random_tensor({5, 4, 3}, 10);
    const auto n = normalize_errors({e})[0];
    std::size_t raw_arg = 0, norm_arg = 0;
    double peak = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        EXPECT_LE(std::abs(n[i]), 1.0);
        EXPECT_EQ(std::signbit(n[i]), std::signbit(e[i]));
        if (std::abs(e[i]) > std::abs(e[raw_arg])) raw_arg = i;
        if (std::abs(n[i]) > std::abs(n[norm_arg])) norm_arg = i;
        peak = std::max(peak, std::abs(n[i]));
    }
    EXPECT_EQ(raw_arg, norm_arg);
    EXPECT_EQ(peak, 1.0);
}

TEST(ErrorPdf, StandardNormalPeak) {
    std::vector<double> s(200000);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = random::normal_at(17, i);
    for (bool smooth : {false, true}) {
        const auto pdf = error_pdf(s, {101, smooth});
        // Density at the bin nearest 0.
        std::size_t best = 0;
        for (std::size_t b = 0; b < pdf.centers.size(); ++b)
            if (std::abs(pdf.centers[b]) < std::abs(pdf.centers[best])) best = b;
        EXPECT_NEAR(pdf.densities[best], 0.3989, 0.05) << "smooth=" << smooth;
        EXPECT_NEAR(pdf.integral(), 1.0, 1e-6);
    }
}

TEST(ErrorPdf, UniformTenBins) {
    random::SplitMix rng(5);
    std::vector<double> s(100000);
    for (auto& v : s) v = rng.uniform();
    const auto pdf = error_pdf(s, {10, false});
    ASSERT_EQ(pdf.densities.size(), 10u);
    for (double d : pdf.densities) EXPECT_NEAR(d, 1.0, 0.05);
    EXPECT_NEAR(pdf.integral(), 1.0, 1e-6);
}

TEST(ErrorPdf, TwoSamplesTwoBins) {
    const auto pdf = error_pdf(std::vector<double>{-1.0, 1.0}, {2, false});
    EXPECT_DOUBLE_EQ(pdf.bin_width, 1.0);
    EXPECT_EQ(pdf.centers, (std::vector<double>{-0.5, 0.5}));
    EXPECT_EQ(pdf.densities, (std::vector<double>{0.5, 0.5}));
}

TEST(ErrorPdf, ConstantFieldIsSingleSpike) {
    const auto pdf = error_pdf(std::vector<double>(50, 0.25));
    ASSERT_EQ(pdf.centers.size(), 1u);
    EXPECT_EQ(pdf.centers[0], 0.25);
    EXPECT_DOUBLE_EQ(pdf.integral(), 1.0);
}

TEST(ErrorPdf, IntegratesToOneOnSkewedData) {
    random::SplitMix rng(6);
    std::vector<double> s(5000);
    for (auto& v : s) v = std::pow(rng.uniform(), 4.0) - 0.1;
    for (std::size_t bins : {2u, 7u, 101u, 500u})
        for (bool smooth : {false, true}) EXPECT_NEAR(error_pdf(s, {bins, smooth}).integral(), 1.0, 1e-6);
}

TEST(ErrorPdf, RejectsBadInput) {
    EXPECT_THROW(error_pdf(std::vector<double>{1.0}), ArgumentError);
    EXPECT_THROW(error_pdf(std::vector<double>{1.0, 2.0}, {1, false}), ArgumentError);
    EXPECT_THROW(error_pdf(std::vector<double>{1.0, kMissing}), NumericalError);
}

TEST(WorstSnapshot, SingleSnapshot) {
    const auto w = worst_snapshot({testutil::random_tensor({4, 3, 1}, 1)});
    EXPECT_EQ(w[0].snapshot, 0u);
    EXPECT_FALSE(w[0].plane.has_value());
}

TEST(WorstSnapshot, SpikeAndTies) {
    Tensor e({5, 4, 10}, 0.1);
    e[(2 * 4 + 1) * 10 + 7] = -9.0;
    EXPECT_EQ(worst_snapshot({e})[0].snapshot, 7u);
    EXPECT_EQ(worst_snapshot({e})[0].max_abs, 9.0);
    Tensor flat({5, 4, 10}, 1.0);
    EXPECT_EQ(worst_snapshot({flat})[0].snapshot, 0u);
}

TEST(WorstSnapshot, MatchesExhaustiveScan) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto e = testutil::random_tensor({6, 5, 9}, 100 + seed);
        std::size_t best_k = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < 9; ++k)
            for (std::size_t s = 0; s < 30; ++s)
                if (std::abs(e[s * 9 + k]) > best) {
                    best = std::abs(e[s * 9 + k]);
                    best_k = k;
                }
        EXPECT_EQ(worst_snapshot({e})[0].snapshot, best_k);
    }
}

TEST(WorstSnapshot, ReportsPlaneFor3D) {
    Tensor e({4, 3, 5, 6});
    e[((1 * 3 + 2) * 5 + 3) * 6 + 4] = 2.0;
    const auto w = worst_snapshot({e})[0];
    EXPECT_EQ(w.snapshot, 4u);
    ASSERT_TRUE(w.plane.has_value());
    EXPECT_EQ(*w.plane, 3u);
}

TEST(Analyze, ReportAndJson) {
    const auto a = testutil::random_tensor({2, 6, 5, 4}, 20);
    auto b = a;
    b[3] += 0.5;
    const auto r = analyze(a, b, {{21, false}, true});
    EXPECT_GT(r.rrmse, 0.0);
    ASSERT_EQ(r.pdf.size(), 2u);
    ASSERT_EQ(r.pdf_per_snapshot.size(), 2u);
    EXPECT_EQ(r.pdf_per_snapshot[0].size(), 4u);
    for (const auto& p : r.pdf) EXPECT_NEAR(p.integral(), 1.0, 1e-6);
    const auto j = to_json(r);
    EXPECT_EQ(j["components"].size(), 2u);
    EXPECT_EQ(j["components"][0]["worst_snapshot"], 3u);
    EXPECT_DOUBLE_EQ(j["components"][0]["max_abs_error"].get<double>(), 0.5);
}

TEST(Writers, PgmHeaderAndPixels) {
    testutil::TempDir dir("pgm");
    Eigen::MatrixXd m(2, 3);
    m << 0.0, 1.0, 2.0, 4.0, 3.0, 0.5;
    write_pgm16(dir / "a.pgm", m);
    std::ifstream is(dir / "a.pgm", std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(is)), {});
    ASSERT_EQ(bytes.rfind("P5\n#", 0), 0u);
    EXPECT_NE(bytes.find("\n3 2\n65535\n"), std::string::npos);
    const std::string px = bytes.substr(bytes.size() - 12);
    auto gray = [&](int i) {
        return (static_cast<unsigned char>(px[2 * i]) << 8) | static_cast<unsigned char>(px[2 * i + 1]);
    };
    EXPECT_EQ(gray(0), 0);
    EXPECT_EQ(gray(3), 65535);
    EXPECT_EQ(gray(2), 32768);  // round(65535 / 2)
}

TEST(Writers, SliceAndCsv) {
    Tensor e({3, 2, 2});
    e[(2 * 2 + 1) * 2 + 1] = -4.0;
    const auto s = absolute_error_slice(e, 1);
    ASSERT_EQ(s.rows(), 3);
    EXPECT_EQ(s(2, 1), 4.0);
    EXPECT_THROW(absolute_error_slice(e, 2), DimensionError);

    testutil::TempDir dir("csv");
    write_matrix_csv(dir / "m.csv", s);
    std::ifstream is(dir / "m.csv");
    const std::string text((std::istreambuf_iterator<char>(is)), {});
    EXPECT_EQ(text, "0,0\n0,0\n0,4\n");
}
