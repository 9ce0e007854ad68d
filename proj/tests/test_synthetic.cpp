#include "helpers.hpp"

#include "modalrepair/errors.hpp"
#include "modalrepair/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace modalrepair;
using namespace modalrepair::synthetic;

namespace {

Eigen::VectorXd spectrum(const Tensor& t) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(unfold(t)).singularValues();
}

WaveSpec cylinder(std::size_t n_modes) {
    WaveSpec s;
    s.generator = Generator::CylinderLike;
    s.grid = {33, 17};
    s.extents = {4.0, 2.0};
    s.snapshots = 60;
    s.wake_width = 0.5;
    for (std::size_t m = 0; m < n_modes; ++m) s.modes.push_back({1.0 / (m + 1.0), 3.0 + m, 1, 1, 2.0 + m, 0.3 * m, 0});
    return s;
}

}  // namespace

TEST(StandingWaves, CentreValue) {
    WaveSpec s;
    s.grid = {3, 3};
    s.modes = {{1.0, 1, 1, 1, 1.0, 0.0, 0}};
    const auto t = generate(s);
    ASSERT_EQ(t.dims(), (Shape{1, 3, 3, 1}));
    EXPECT_NEAR(t[1 * 3 + 1], 1.0, 1e-15);
    EXPECT_NEAR(t[0], 0.0, 1e-15);
}

TEST(StandingWaves, RankEqualsModeCount) {
    const auto spec = testutil::rank3_spec(24, 16, 40);
    const auto sv = spectrum(generate(spec));
    EXPECT_EQ(documented_rank(spec), 3u);
    EXPECT_GT(sv(2) / sv(0), 1e-3);
    EXPECT_LT(sv(3) / sv(0), 1e-12);
}

TEST(StandingWaves, ThreeDimensionalGrid) {
    WaveSpec s;
    s.grid = {6, 5, 4};
    s.snapshots = 10;
    s.modes = {{1.0, 1, 2, 1, 1.0, 0.0, 0}, {0.5, 2, 1, 1, 2.0, 0.0, 0}};
    const auto sv = spectrum(generate(s));
    EXPECT_LT(sv(2) / sv(0), 1e-12);
}

TEST(StandingWaves, SeedDeterminism) {
    auto s = testutil::rank3_spec(10, 8, 12);
    s.noise_sigma = 0.1;
    s.seed = 42;
    EXPECT_EQ(generate(s), generate(s));
    auto other = s;
    other.seed = 43;
    EXPECT_NE(generate(s), generate(other));
}

TEST(StandingWaves, NoiseVariance) {
    auto s = testutil::rank3_spec(40, 30, 100);
    const auto clean = generate(s);
    s.noise_sigma = 0.2;
    s.seed = 3;
    const auto noisy = generate(s);
    ASSERT_GE(clean.size(), 100000u);
    double mean = 0.0;
    for (std::size_t i = 0; i < clean.size(); ++i) mean += noisy[i] - clean[i];
    mean /= static_cast<double>(clean.size());
    double var = 0.0;
    for (std::size_t i = 0; i < clean.size(); ++i) var += std::pow(noisy[i] - clean[i] - mean, 2);
    var /= static_cast<double>(clean.size() - 1);
    EXPECT_NEAR(var, 0.04, 0.05 * 0.04);
}

TEST(CylinderLike, RankFormula) {
    for (std::size_t m = 0; m <= 2; ++m) {
        const auto s = cylinder(m);
        const auto sv = spectrum(generate(s));
        const std::size_t r = documented_rank(s);
        EXPECT_EQ(r, 1 + 2 * m);
        EXPECT_GT(sv(static_cast<Eigen::Index>(r) - 1) / sv(0), 1e-6);
        EXPECT_LT(sv(static_cast<Eigen::Index>(r)) / sv(0), 1e-10);
    }
}

TEST(CylinderLike, ZeroModesIsMeanFlow) {
    const auto t = generate(cylinder(0));
    for (double v : t.data()) EXPECT_EQ(v, 1.0);
}

TEST(CylinderLike, ZeroAmplitudeContributesNothing) {
    auto one = cylinder(1);
    auto with_silent = one;
    with_silent.modes.push_back({0.0, 7.0, 1, 1, 5.0, 0.0, 0});
    EXPECT_EQ(generate(one), generate(with_silent));
    EXPECT_EQ(documented_rank(with_silent), 3u);
}

TEST(CylinderLike, NoMeanFlowMakesRankTwo) {
    auto s = cylinder(1);
    s.mean_flow = 0.0;
    EXPECT_EQ(documented_rank(s), 2u);
    const auto sv = spectrum(generate(s));
    EXPECT_LT(sv(2) / sv(0), 1e-10);
}

TEST(SpecJson, RoundTrip) {
    auto s = cylinder(2);
    s.noise_sigma = 0.01;
    s.seed = 99;
    const auto back = spec_from_json(to_json(s));
    EXPECT_EQ(to_json(back), to_json(s));
    EXPECT_EQ(generate(back), generate(s));
}

TEST(SpecJson, ErrorsNameTheField) {
    auto expect_field = [](const nlohmann::json& j, const std::string& field) {
        try {
            spec_from_json(j);
            ADD_FAILURE() << "accepted " << j.dump();
        } catch (const ArgumentError& e) {
            EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
        }
    };
    expect_field({{"grid", {4, 4}}, {"snapshots", "ten"}, {"modes", {{{"k", 1}}}}}, "snapshots");
    expect_field({{"modes", {{{"k", 1}}}}}, "grid");
    expect_field({{"grid", {4, 4}}, {"generator", "vortex"}}, "generator");
    expect_field({{"grid", {4, 4}}, {"modes", nlohmann::json::array()}}, "modes");
    expect_field({{"grid", {4, 4}}, {"extents", {1.0}}, {"modes", {{{"k", 1}}}}}, "extents");
    expect_field({{"grid", {4, 4}}, {"modes", {{{"k", 1}}, {{"k", 1}}}}}, "modes");
}
