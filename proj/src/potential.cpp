#include "doslab/potential.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "doslab/rng.hpp"

namespace doslab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double AngularTable::lookup(const std::array<double, 3>& unit) const {
    if (values.empty()) throw std::invalid_argument("homogeneous spec has empty angular table");
    if (dim == 2) {
        double theta = std::atan2(unit[1], unit[0]);
        if (theta < 0) theta += 2 * kPi;
        int m = static_cast<int>(values.size());
        int j = static_cast<int>(std::lround(theta / (2 * kPi) * m)) % m;
        return values[j];
    }
    if (dim == 3) {
        int n_lon = static_cast<int>(values.size()) / n_lat;
        if (n_lat < 2 || n_lon < 1 || static_cast<int>(values.size()) != n_lat * n_lon)
            throw std::invalid_argument("angular table does not cover S^2 (need n_lat >= 2 rows)");
        double theta = std::acos(std::clamp(unit[2], -1.0, 1.0));
        double phi = std::atan2(unit[1], unit[0]);
        if (phi < 0) phi += 2 * kPi;
        double ti = theta / kPi * (n_lat - 1);
        double pj = phi / (2 * kPi) * n_lon;
        int i0 = std::min(static_cast<int>(ti), n_lat - 2);
        int j0 = static_cast<int>(pj) % n_lon;
        int j1 = (j0 + 1) % n_lon;
        double ft = ti - i0, fp = pj - static_cast<int>(pj);
        double v00 = values[i0 * n_lon + j0], v01 = values[i0 * n_lon + j1];
        double v10 = values[(i0 + 1) * n_lon + j0], v11 = values[(i0 + 1) * n_lon + j1];
        return (1 - ft) * ((1 - fp) * v00 + fp * v01) + ft * ((1 - fp) * v10 + fp * v11);
    }
    throw std::invalid_argument("angular tables support d=2 or d=3");
}

double AngularTable::mean() const {
    if (values.empty()) return 0.0;
    if (dim == 2) {
        double s = 0.0;
        for (double v : values) s += v;
        return s / values.size();
    }
    // latitude rows weighted by sin(theta)
    int n_lon = static_cast<int>(values.size()) / n_lat;
    double s = 0.0, w = 0.0;
    for (int i = 0; i < n_lat; ++i) {
        double theta = kPi * i / (n_lat - 1);
        double wi = std::sin(theta);
        for (int j = 0; j < n_lon; ++j) {
            s += wi * values[i * n_lon + j];
            w += wi;
        }
    }
    return w > 0 ? s / w : 0.0;
}

namespace {

// Packs integer cell coordinates into one stream index (zigzag, 20 bits per
// axis) so the random kind is reproducible independent of evaluation order.
std::uint64_t pack_cell(const std::array<std::int64_t, 3>& c, int dim) {
    std::uint64_t packed = 0;
    for (int i = 0; i < dim; ++i) {
        std::int64_t v = c[i];
        std::uint64_t z = v >= 0 ? 2 * static_cast<std::uint64_t>(v)
                                 : 2 * static_cast<std::uint64_t>(-v) - 1;
        if (z >= (1ULL << 20)) throw std::invalid_argument("random cell index out of range");
        packed |= z << (20 * i);
    }
    return packed;
}

double eval_at(const PotentialSpec& spec, const std::array<double, 3>& x, int dim) {
    if (spec.kind == "zero") return 0.0;
    if (spec.kind == "constant") return spec.constant_value;
    if (spec.kind == "half_space") {
        int ax = spec.half_space_axis - 1;
        if (ax < 0 || ax >= dim) throw std::invalid_argument("half_space axis out of range");
        double c = x[ax] * spec.half_space_sign;
        return c >= 0.0 ? spec.half_space_level : 0.0;
    }
    if (spec.kind == "homogeneous") {
        double r2 = 0.0;
        for (int i = 0; i < dim; ++i) r2 += x[i] * x[i];
        if (r2 == 0.0) return spec.angular.mean();
        double r = std::sqrt(r2);
        std::array<double, 3> u{0, 0, 0};
        for (int i = 0; i < dim; ++i) u[i] = x[i] / r;
        return spec.angular.lookup(u);
    }
    if (spec.kind == "periodic") {
        if (static_cast<int>(spec.periodic_cell.size()) != dim ||
            static_cast<int>(spec.periodic_dims.size()) != dim)
            throw std::invalid_argument("periodic spec needs cell and dims of length d");
        std::int64_t idx = 0;
        for (int i = 0; i < dim; ++i) {
            double cell = spec.periodic_cell[i];
            double f = x[i] / cell - std::floor(x[i] / cell); // in [0,1)
            int m = spec.periodic_dims[i];
            int k = std::min(static_cast<int>(f * m), m - 1);
            idx = idx * m + k;
        }
        return spec.periodic_samples.at(idx);
    }
    if (spec.kind == "bump") {
        double r2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            double dxi = x[i] - spec.bump_center[i];
            r2 += dxi * dxi;
        }
        if (spec.bump_profile == "indicator")
            return r2 <= spec.bump_radius * spec.bump_radius ? spec.bump_amplitude : 0.0;
        return spec.bump_amplitude * std::exp(-r2 / (spec.bump_radius * spec.bump_radius));
    }
    if (spec.kind == "random") {
        std::array<std::int64_t, 3> c{0, 0, 0};
        for (int i = 0; i < dim; ++i)
            c[i] = static_cast<std::int64_t>(std::floor(x[i] / spec.random_cell));
        double u = uniform01_at(spec.random_seed, pack_cell(c, dim));
        return spec.random_amplitude * (2.0 * u - 1.0);
    }
    if (spec.kind == "sum") {
        double s = 0.0;
        for (const auto& t : spec.terms) s += eval_at(t, x, dim);
        return s;
    }
    throw std::invalid_argument("unknown potential kind '" + spec.kind + "'");
}

} // namespace

double evaluate_potential(const PotentialSpec& spec, const std::array<double, 3>& x, int dim) {
    return eval_at(spec, x, dim);
}

std::vector<double> sample_potential(const PotentialSpec& spec, const Grid& grid) {
    std::vector<double> v(grid.size());
    for (std::int64_t i = 0; i < grid.size(); ++i) v[i] = eval_at(spec, grid.point(i), grid.dim);
    return v;
}

std::optional<std::vector<std::vector<double>>>
separable_potential(const PotentialSpec& spec, const Grid& grid) {
    int n = grid.n_per_axis, d = grid.dim;
    std::vector<std::vector<double>> axes(d, std::vector<double>(n, 0.0));
    // Accumulates axis-aligned pieces; fails on any non-separable term.
    struct Walker {
        const Grid& g;
        std::vector<std::vector<double>>& axes;
        bool ok = true;
        void walk(const PotentialSpec& s) {
            if (!ok) return;
            if (s.kind == "zero") return;
            if (s.kind == "constant") {
                for (double& x : axes[0]) x += s.constant_value;
                return;
            }
            if (s.kind == "half_space") {
                int ax = s.half_space_axis - 1;
                if (ax < 0 || ax >= g.dim) { ok = false; return; }
                for (int k = 0; k < g.n_per_axis; ++k) {
                    double c = g.coord(k) * s.half_space_sign;
                    if (c >= 0.0) axes[ax][k] += s.half_space_level;
                }
                return;
            }
            if (s.kind == "sum") {
                for (const auto& t : s.terms) walk(t);
                return;
            }
            ok = false;
        }
    } w{grid, axes};
    w.walk(spec);
    if (!w.ok) return std::nullopt;
    return axes;
}

// ---- JSON ----

namespace {

using nlohmann::json;

json spec_to_json(const PotentialSpec& s) {
    json j;
    j["kind"] = s.kind;
    if (s.kind == "constant") j["value"] = s.constant_value;
    if (s.kind == "half_space") {
        j["level"] = s.half_space_level;
        j["axis"] = s.half_space_axis;
        j["sign"] = s.half_space_sign;
    }
    if (s.kind == "homogeneous") {
        j["angular"] = s.angular.values;
        j["dim"] = s.angular.dim;
        if (s.angular.dim == 3) j["n_lat"] = s.angular.n_lat;
    }
    if (s.kind == "periodic") {
        j["cell"] = s.periodic_cell;
        j["dims"] = s.periodic_dims;
        j["samples"] = s.periodic_samples;
    }
    if (s.kind == "bump") {
        j["amplitude"] = s.bump_amplitude;
        j["center"] = std::vector<double>(s.bump_center.begin(), s.bump_center.end());
        j["radius"] = s.bump_radius;
        j["profile"] = s.bump_profile;
    }
    if (s.kind == "random") {
        j["seed"] = s.random_seed;
        j["amplitude"] = s.random_amplitude;
        j["cell"] = s.random_cell;
    }
    if (s.kind == "sum") {
        json arr = json::array();
        for (const auto& t : s.terms) arr.push_back(spec_to_json(t));
        j["terms"] = arr;
    }
    return j;
}

PotentialSpec spec_from_json(const json& j) {
    PotentialSpec s;
    s.kind = j.at("kind").get<std::string>();
    if (s.kind == "constant") s.constant_value = j.at("value").get<double>();
    else if (s.kind == "half_space") {
        s.half_space_level = j.at("level").get<double>();
        s.half_space_axis = j.value("axis", 1);
        s.half_space_sign = j.value("sign", 1);
        if (s.half_space_sign != 1 && s.half_space_sign != -1)
            throw std::invalid_argument("half_space sign must be +1 or -1");
    } else if (s.kind == "homogeneous") {
        s.angular.values = j.at("angular").get<std::vector<double>>();
        s.angular.dim = j.value("dim", 2);
        s.angular.n_lat = j.value("n_lat", 0);
    } else if (s.kind == "periodic") {
        s.periodic_cell = j.at("cell").get<std::vector<double>>();
        s.periodic_dims = j.at("dims").get<std::vector<int>>();
        s.periodic_samples = j.at("samples").get<std::vector<double>>();
    } else if (s.kind == "bump") {
        s.bump_amplitude = j.at("amplitude").get<double>();
        auto c = j.at("center").get<std::vector<double>>();
        for (size_t i = 0; i < c.size() && i < 3; ++i) s.bump_center[i] = c[i];
        s.bump_radius = j.at("radius").get<double>();
        s.bump_profile = j.value("profile", "gaussian");
        if (s.bump_profile != "gaussian" && s.bump_profile != "indicator")
            throw std::invalid_argument("bump profile must be gaussian or indicator");
    } else if (s.kind == "random") {
        s.random_seed = j.at("seed").get<std::uint64_t>();
        s.random_amplitude = j.at("amplitude").get<double>();
        s.random_cell = j.at("cell").get<double>();
    } else if (s.kind == "sum") {
        for (const auto& t : j.at("terms")) s.terms.push_back(spec_from_json(t));
    } else if (s.kind != "zero") {
        throw std::invalid_argument("unknown potential kind '" + s.kind + "'");
    }
    return s;
}

} // namespace

std::string PotentialSpec::to_json() const { return spec_to_json(*this).dump(); }

PotentialSpec PotentialSpec::from_json(const std::string& text) {
    return spec_from_json(json::parse(text));
}

} // namespace doslab
