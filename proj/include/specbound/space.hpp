#ifndef SPECBOUND_SPACE_HPP
#define SPECBOUND_SPACE_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace specbound {

/// Finite metric measure space: a point set with a metric matrix and
/// positive per-point masses.  Immutable after construction.
struct MetricMeasureSpace {
    int n = 0;
    Eigen::MatrixXd rho; // symmetric, zero diagonal, triangle inequality
    Eigen::VectorXd mu;  // strictly positive masses
    std::string provenance;

    double diameter() const { return rho.maxCoeff(); }
    double min_positive_distance() const;
    double total_measure() const { return mu.sum(); }

    /// Members of the closed ball {y : rho(x,y) <= r + 1e-12} and their
    /// total measure.  r = 0 yields {x}.
    std::pair<std::vector<int>, double> ball(int x, double r) const;

    /// Measure of the closed ball only (no member list built).
    double ball_measure(int x, double r) const;

    /// Checks metric axioms by triple enumeration.  Throws on violation;
    /// intended for n <= 512.
    void validate_metric() const;
};

using SpacePtr = std::shared_ptr<const MetricMeasureSpace>;

struct Edge {
    int u, v;
    double length;
};

/// Doubling diagnostics over a sampled radius grid.
struct DoublingProfile {
    double c_doubling = 1.0; // sup mu(B(x,2r))/mu(B(x,r))
    double d_exponent = 0.0; // least-squares exponent for mu(B(x,gr)) <= C(1+g)^D
    std::vector<double> radii_grid;
};

/// Builds the shortest-path metric space of a connected weighted graph.
/// Throws if the graph is disconnected or any length/mass is nonpositive.
MetricMeasureSpace build_space(int n, const std::vector<Edge>& edges,
                               const Eigen::VectorXd& masses,
                               std::string provenance = {});

/// Accepts an arbitrary validated metric matrix (spectral models that do
/// not come from a graph).
MetricMeasureSpace make_space_from_metric(const Eigen::MatrixXd& rho,
                                          const Eigen::VectorXd& mu,
                                          std::string provenance = {});

DoublingProfile doubling_profile(const MetricMeasureSpace& space,
                                 const std::vector<double>& radii);

/// Default geometric radius grid: `count` radii from the smallest positive
/// distance to the diameter.
std::vector<double> default_radii_grid(const MetricMeasureSpace& space,
                                       int count = 8);

// --- builtin model graphs -------------------------------------------------

MetricMeasureSpace make_cycle(int n, double edge_length = 1.0,
                              double mass = 1.0);
MetricMeasureSpace make_path(int n, double edge_length = 1.0,
                             double mass = 1.0);
MetricMeasureSpace make_grid(int rows, int cols, double edge_length = 1.0,
                             double mass = 1.0);
MetricMeasureSpace make_star(int leaves, double edge_length = 1.0,
                             double mass = 1.0);

// --- space definition file ------------------------------------------------
//
// Plain-text schema (lines, '#' comments allowed):
//   specbound-space v1
//   provenance <free text>
//   points <n>
//   <index> <mass>            (n lines)
//   edges <m>
//   <u> <v> <length>          (m lines)
// Values are written with 17 significant digits so load(save(s)) is
// bit-exact.

void save_space(const MetricMeasureSpace& space,
                const std::vector<Edge>& edges, const std::string& path);

std::pair<MetricMeasureSpace, std::vector<Edge>>
load_space(const std::string& path);

} // namespace specbound

#endif
