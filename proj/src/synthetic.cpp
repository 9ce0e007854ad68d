#include "modalrepair/synthetic.hpp"

#include "modalrepair/errors.hpp"
#include "modalrepair/random.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <tuple>

namespace modalrepair::synthetic {

namespace {

constexpr double kPi = std::numbers::pi;

Shape tensor_dims(const WaveSpec& spec) {
    Shape dims{spec.components};
    dims.insert(dims.end(), spec.grid.begin(), spec.grid.end());
    dims.push_back(spec.snapshots);
    return dims;
}

double coordinate(const WaveSpec& spec, std::size_t axis, std::size_t i) {
    const double extent = spec.extents.empty() ? 1.0 : spec.extents[axis];
    const std::size_t n = spec.grid[axis];
    return n > 1 ? extent * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
}

// Evaluates f(component, coords, t) over the whole grid, then adds noise.
template <typename F>
Tensor evaluate(const WaveSpec& spec, F&& f) {
    spec.validate();
    Tensor out(tensor_dims(spec));
    const std::size_t n_axes = spec.grid.size();
    const std::size_t n_space = shape_product(spec.grid);
    std::vector<std::size_t> idx(n_axes);
    std::array<double, 3> xyz{};
    for (std::size_t c = 0; c < spec.components; ++c)
        for (std::size_t s = 0; s < n_space; ++s) {
            std::size_t rem = s;
            for (std::size_t a = n_axes; a-- > 0;) {
                idx[a] = rem % spec.grid[a];
                rem /= spec.grid[a];
            }
            for (std::size_t a = 0; a < 3; ++a) xyz[a] = a < n_axes ? coordinate(spec, a, idx[a]) : 0.0;
            for (std::size_t k = 0; k < spec.snapshots; ++k) {
                const double t = static_cast<double>(k) * spec.dt;
                out[out.snapshot_index(c, s, k)] = f(c, xyz, t);
            }
        }
    if (spec.noise_sigma > 0.0)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += spec.noise_sigma * random::normal_at(spec.seed, i);
    return out;
}

template <typename T>
T field(const nlohmann::json& j, const char* name, T fallback) {
    if (!j.contains(name)) return fallback;
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("field '") + name + "': " + e.what());
    }
}

}  // namespace

void WaveSpec::validate() const {
    if (grid.empty() || grid.size() > 3) throw ArgumentError("field 'grid': needs 1 to 3 spatial axes");
    for (auto n : grid)
        if (n == 0) throw ArgumentError("field 'grid': axis lengths must be positive");
    if (!extents.empty() && extents.size() != grid.size())
        throw ArgumentError("field 'extents': needs one value per grid axis");
    for (double e : extents)
        if (!(e > 0.0)) throw ArgumentError("field 'extents': values must be positive");
    if (components == 0) throw ArgumentError("field 'components': must be >= 1");
    if (snapshots == 0) throw ArgumentError("field 'snapshots': must be >= 1");
    if (!(noise_sigma >= 0.0)) throw ArgumentError("field 'noise_sigma': must be >= 0");
    if (!(dt > 0.0)) throw ArgumentError("field 'dt': must be positive");
    if (generator == Generator::StandingWaves && modes.empty())
        throw ArgumentError("field 'modes': standing waves need at least one mode");
    if (generator == Generator::CylinderLike && !(wake_width > 0.0))
        throw ArgumentError("field 'wake_width': must be positive");
    std::set<std::tuple<std::size_t, double, double, double, double>> seen;
    for (const auto& m : modes) {
        if (m.component >= components) throw ArgumentError("field 'modes': component index out of range");
        if (!seen.insert({m.component, m.k, m.l, m.q, m.omega}).second)
            throw ArgumentError("field 'modes': wavenumber/frequency tuples must be distinct");
    }
}

Tensor generate_standing_waves(const WaveSpec& spec) {
    const std::size_t n_axes = spec.grid.size();
    return evaluate(spec, [&](std::size_t c, const std::array<double, 3>& x, double t) {
        double v = 0.0;
        for (const auto& m : spec.modes) {
            if (m.component != c) continue;
            double shape = std::sin(m.k * kPi * x[0]);
            if (n_axes > 1) shape *= std::sin(m.l * kPi * x[1]);
            if (n_axes > 2) shape *= std::sin(m.q * kPi * x[2]);
            v += m.amplitude * shape * std::cos(m.omega * t + m.phase);
        }
        return v;
    });
}

Tensor generate_cylinder_like(const WaveSpec& spec) {
    const double y_shift = spec.grid.size() > 1 ? 0.5 * (spec.extents.empty() ? 1.0 : spec.extents[1]) : 0.0;
    return evaluate(spec, [&](std::size_t c, const std::array<double, 3>& x, double t) {
        const double y = x[1] - y_shift;
        const double envelope = std::exp(-(y / spec.wake_width) * (y / spec.wake_width));
        double v = spec.mean_flow;
        for (const auto& m : spec.modes)
            if (m.component == c) v += m.amplitude * envelope * std::cos(m.k * x[0] - m.omega * t + m.phase);
        return v;
    });
}

Tensor generate(const WaveSpec& spec) {
    return spec.generator == Generator::StandingWaves ? generate_standing_waves(spec) : generate_cylinder_like(spec);
}

std::size_t documented_rank(const WaveSpec& spec) {
    std::size_t active = 0;
    for (const auto& m : spec.modes)
        if (m.amplitude != 0.0) ++active;
    if (spec.generator == Generator::StandingWaves) return active;
    return 2 * active + (spec.mean_flow != 0.0 ? 1 : 0);
}

nlohmann::json to_json(const WaveSpec& spec) {
    nlohmann::json j;
    j["generator"] = spec.generator == Generator::StandingWaves ? "standing" : "cylinder";
    j["grid"] = spec.grid;
    if (!spec.extents.empty()) j["extents"] = spec.extents;
    j["components"] = spec.components;
    j["snapshots"] = spec.snapshots;
    j["dt"] = spec.dt;
    j["noise_sigma"] = spec.noise_sigma;
    j["seed"] = spec.seed;
    if (spec.generator == Generator::CylinderLike) {
        j["mean_flow"] = spec.mean_flow;
        j["wake_width"] = spec.wake_width;
    }
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& m : spec.modes)
        modes.push_back({{"amplitude", m.amplitude},
                         {"k", m.k},
                         {"l", m.l},
                         {"q", m.q},
                         {"omega", m.omega},
                         {"phase", m.phase},
                         {"component", m.component}});
    j["modes"] = modes;
    return j;
}

WaveSpec spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ArgumentError("generator spec must be a JSON object");
    WaveSpec spec;
    const auto gen = field<std::string>(j, "generator", "standing");
    if (gen == "standing")
        spec.generator = Generator::StandingWaves;
    else if (gen == "cylinder")
        spec.generator = Generator::CylinderLike;
    else
        throw ArgumentError("field 'generator': expected 'standing' or 'cylinder', got '" + gen + "'");
    if (!j.contains("grid")) throw ArgumentError("field 'grid': missing");
    spec.grid = field<Shape>(j, "grid", {});
    spec.extents = field<std::vector<double>>(j, "extents", {});
    spec.components = field<std::size_t>(j, "components", 1);
    spec.snapshots = field<std::size_t>(j, "snapshots", 1);
    spec.dt = field<double>(j, "dt", 0.1);
    spec.noise_sigma = field<double>(j, "noise_sigma", 0.0);
    spec.seed = field<std::uint64_t>(j, "seed", 0);
    spec.mean_flow = field<double>(j, "mean_flow", 1.0);
    spec.wake_width = field<double>(j, "wake_width", 0.25);
    if (j.contains("modes")) {
        if (!j["modes"].is_array()) throw ArgumentError("field 'modes': expected an array");
        for (const auto& mj : j["modes"]) {
            WaveMode m;
            m.amplitude = field<double>(mj, "amplitude", 1.0);
            m.k = field<double>(mj, "k", 1.0);
            m.l = field<double>(mj, "l", 1.0);
            m.q = field<double>(mj, "q", 1.0);
            m.omega = field<double>(mj, "omega", 1.0);
            m.phase = field<double>(mj, "phase", 0.0);
            m.component = field<std::size_t>(mj, "component", 0);
            spec.modes.push_back(m);
        }
    }
    spec.validate();
    return spec;
}

}  // namespace modalrepair::synthetic
