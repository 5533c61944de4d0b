#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixedvol/common.hpp"
#include "mixedvol/parallel.hpp"

namespace mixedvol {

enum class GridMode { tensor, monte_carlo };

/// Grid configuration as carried by CLI flags / JSON:
/// {mode, R, nodes_per_axis | samples, seed}.
struct GridConfig {
    GridMode mode = GridMode::tensor;
    double radius = 40.0;
    int nodes_per_axis = 161;  // composite Simpson wants an odd count
    int samples = 200000;      // Monte-Carlo mode
    std::uint64_t seed = 1;

    std::string to_json() const;
    static GridConfig from_json(const std::string& text);
};

struct QuadNode {
    Vec x;
    double weight = 0.0;
    bool outer_shell = false;  // within one step of the truncation boundary
};

/// Quadrature over a truncation box [-R, R]^n: either a tensor composite
/// Simpson grid (nodes generated on the fly; nothing is stored per node)
/// or Gaussian importance Monte-Carlo samples (stored, seeded).
class QuadratureGrid {
public:
    static QuadratureGrid tensor(int dim, double radius, int nodes_per_axis);
    static QuadratureGrid monte_carlo(int dim, double sigma, int samples, std::uint64_t seed);
    static QuadratureGrid from_config(int dim, const GridConfig& cfg);

    int dim() const { return dim_; }
    GridMode mode() const { return mode_; }
    double radius() const { return radius_; }
    std::size_t size() const { return size_; }

    QuadNode node(std::size_t i) const;

    /// Deterministic parallel integral of f over the grid.
    template <class F>
    double integrate(F&& f) const {
        return reduce_sum(size_, [&](std::size_t i) {
            const QuadNode nd = node(i);
            return f(nd.x) * nd.weight;
        });
    }

    /// Serial reference implementation (plain accumulation order).
    template <class F>
    double integrate_serial(F&& f) const {
        return reduce_sum_serial(size_, [&](std::size_t i) {
            const QuadNode nd = node(i);
            return f(nd.x) * nd.weight;
        });
    }

    /// Integral restricted to the outermost shell; used as a truncation
    /// error indicator for tensor grids.
    template <class F>
    double integrate_outer_shell(F&& f) const {
        return reduce_sum(size_, [&](std::size_t i) {
            const QuadNode nd = node(i);
            return nd.outer_shell ? f(nd.x) * nd.weight : 0.0;
        });
    }

private:
    QuadratureGrid() = default;

    int dim_ = 0;
    GridMode mode_ = GridMode::tensor;
    double radius_ = 0.0;
    std::size_t size_ = 0;

    // tensor mode
    std::vector<double> axis_nodes_;
    std::vector<double> axis_weights_;
    int per_axis_ = 0;

    // monte-carlo mode
    Mat mc_points_;
    Vec mc_weights_;
};

}  // namespace mixedvol
