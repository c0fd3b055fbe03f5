#ifndef SPECBOUND_MODELS_HPP
#define SPECBOUND_MODELS_HPP

#include "specbound/bundle_op.hpp"
#include "specbound/cz_riesz.hpp"

namespace specbound {

/// Magnetic Schrodinger operator on a weighted graph: edge phases theta
/// (lattice-gauge discretization of the vector potential, theta_{yx} =
/// -theta_{xy}) plus a nonnegative scalar potential entering as V^2:
///   (L f)(x) = mu(x)^{-1} sum_{y~x} (f(x) - e^{i theta_{xy}} f(y)) + V(x)^2 f(x).
struct MagneticSchrodinger {
    SpacePtr space;
    std::vector<Edge> edges;
    std::vector<double> phases; // theta for u -> v, one per edge
    Eigen::VectorXd potential;  // V >= 0
    BundleOperator op;
};

MagneticSchrodinger build_magnetic(const SpacePtr& space,
                                   const std::vector<Edge>& edges,
                                   const std::vector<double>& phases,
                                   const Eigen::VectorXd& potential);

/// Entrywise heat-kernel domination |K_{exp(-t L_{Y,V})}| <=
/// K_{exp(-t L_{0,0})}; passes iff the exceedance is <= 1e-12 at every
/// entry and grid time.
CheckReport domination_check(const MagneticSchrodinger& ms,
                             const std::vector<double>& t_grid);

/// Weighted-energy growth along the heat flow: E(t) = sum |w_t|^2 e^{xi} mu
/// for an initial section supported in B(center, radius).  The fitted rate
/// sup_t (ln E(t) - ln E(0))/t is compared against the discrete bound
/// 2(cosh(kappa h_max) - 1)/h_max^2, and rescaling xi by 1/2 and 1/4 must
/// approach the continuum rate kappa^2/2 within 15%.
CheckReport energy_decay_check(const MagneticSchrodinger& ms,
                               const Eigen::VectorXd& xi, double kappa,
                               const std::vector<double>& t_grid, int center,
                               double radius);

/// Simplicial 2-complex with boundary maps d0 (vertex -> edge) and d1
/// (edge -> triangle) and Hodge Laplacians L0 = d0^T d0,
/// L1 = d0 d0^T + d1^T d1 (unit weights, counting measure).
struct HodgeComplex {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;     // oriented (u, v)
    std::vector<std::array<int, 3>> triangles;  // oriented (a, b, c)
    Eigen::MatrixXd d0, d1;
    Eigen::MatrixXd L0, L1;
};

HodgeComplex build_hodge(int n_vertices,
                         const std::vector<std::pair<int, int>>& edges,
                         const std::vector<std::array<int, 3>>& triangles);

/// Verifies (i) d0 L0 = L1 d0 as matrices, (ii) the square-root
/// commutation d0^T L1^{-1/2} = L0^{-1/2} d0^T on the complement of the
/// kernels (pseudo-inverse square roots), (iii) the p = 2 duality: the
/// largest singular values of d0 L0^{-1/2} and d0^T L1^{-1/2} agree.
CheckReport commutation_check(const HodgeComplex& hc);

/// Spectral model of the antipodal heat kernel on S^2:
/// K(t) = (4 pi)^{-1} sum_{l <= l_max} (2l+1)(-1)^l e^{-t l(l+1)}.
struct SphereModel {
    int l_max = 30;
    double operator()(double t) const; // compensated summation, t >= 0.1
    double tail_bound(double t) const; // geometric remainder past l_max
};
SphereModel sphere_spectral_model(int l_max);

} // namespace specbound

#endif
