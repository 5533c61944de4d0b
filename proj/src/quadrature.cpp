#include "mixedvol/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mixedvol/rng.hpp"

namespace mixedvol {

namespace {
using json = nlohmann::ordered_json;

constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

std::string GridConfig::to_json() const {
    json j;
    j["mode"] = mode == GridMode::tensor ? "tensor" : "monte-carlo";
    j["R"] = radius;
    if (mode == GridMode::tensor)
        j["nodes_per_axis"] = nodes_per_axis;
    else
        j["samples"] = samples;
    j["seed"] = seed;
    return j.dump();
}

GridConfig GridConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    GridConfig cfg;
    const std::string mode = j.value("mode", "tensor");
    if (mode == "tensor")
        cfg.mode = GridMode::tensor;
    else if (mode == "monte-carlo" || mode == "mc")
        cfg.mode = GridMode::monte_carlo;
    else
        throw std::invalid_argument("grid config: unknown mode '" + mode + "'");
    cfg.radius = j.value("R", 40.0);
    cfg.nodes_per_axis = j.value("nodes_per_axis", 161);
    cfg.samples = j.value("samples", 200000);
    cfg.seed = j.value("seed", std::uint64_t{1});
    return cfg;
}

QuadratureGrid QuadratureGrid::tensor(int dim, double radius, int nodes_per_axis) {
    if (dim < 1) throw std::invalid_argument("tensor grid: dim >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("tensor grid: radius > 0");
    int m = nodes_per_axis;
    if (m < 3) m = 3;
    if (m % 2 == 0) ++m;  // composite Simpson needs an even interval count
    QuadratureGrid g;
    g.dim_ = dim;
    g.mode_ = GridMode::tensor;
    g.radius_ = radius;
    g.per_axis_ = m;
    const double h = 2.0 * radius / (m - 1);
    g.axis_nodes_.resize(m);
    g.axis_weights_.resize(m);
    for (int i = 0; i < m; ++i) {
        g.axis_nodes_[i] = -radius + h * i;
        double c = (i == 0 || i == m - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        g.axis_weights_[i] = c * h / 3.0;
    }
    g.size_ = 1;
    for (int d = 0; d < dim; ++d) g.size_ *= static_cast<std::size_t>(m);
    return g;
}

QuadratureGrid QuadratureGrid::monte_carlo(int dim, double sigma, int samples, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("mc grid: dim >= 1");
    if (samples < 1) throw std::invalid_argument("mc grid: samples >= 1");
    QuadratureGrid g;
    g.dim_ = dim;
    g.mode_ = GridMode::monte_carlo;
    g.radius_ = sigma;
    g.size_ = static_cast<std::size_t>(samples);
    g.mc_points_.resize(samples, dim);
    g.mc_weights_.resize(samples);
    Rng rng = Rng(seed).split(0xabcdef);
    const double lognorm = 0.5 * dim * std::log(kTwoPi * sigma * sigma);
    for (int i = 0; i < samples; ++i) {
        double q = 0.0;
        for (int d = 0; d < dim; ++d) {
            const double z = rng.normal();
            g.mc_points_(i, d) = sigma * z;
            q += z * z;
        }
        // importance weight: 1 / (N * pdf(x))
        g.mc_weights_(i) = std::exp(lognorm + 0.5 * q) / samples;
    }
    return g;
}

QuadratureGrid QuadratureGrid::from_config(int dim, const GridConfig& cfg) {
    if (cfg.mode == GridMode::tensor) return tensor(dim, cfg.radius, cfg.nodes_per_axis);
    // Gaussian importance scale: a third of the truncation radius keeps the
    // proposal heavy where the integrands concentrate.
    return monte_carlo(dim, cfg.radius / 3.0, cfg.samples, cfg.seed);
}

QuadNode QuadratureGrid::node(std::size_t i) const {
    QuadNode nd;
    if (mode_ == GridMode::tensor) {
        nd.x.resize(dim_);
        nd.weight = 1.0;
        std::size_t rest = i;
        bool shell = false;
        for (int d = 0; d < dim_; ++d) {
            const int k = static_cast<int>(rest % static_cast<std::size_t>(per_axis_));
            rest /= static_cast<std::size_t>(per_axis_);
            nd.x(d) = axis_nodes_[k];
            nd.weight *= axis_weights_[k];
            if (k <= 1 || k >= per_axis_ - 2) shell = true;
        }
        nd.outer_shell = shell;
    } else {
        nd.x = mc_points_.row(static_cast<int>(i)).transpose();
        nd.weight = mc_weights_(static_cast<int>(i));
        nd.outer_shell = false;
    }
    return nd;
}

}  // namespace mixedvol
