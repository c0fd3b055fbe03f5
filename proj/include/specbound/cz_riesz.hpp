#ifndef SPECBOUND_CZ_RIESZ_HPP
#define SPECBOUND_CZ_RIESZ_HPP

#include "specbound/multiplier.hpp"

namespace specbound {

/// Hardy-Littlewood maximal function over the radii grid:
/// Mf(x) = max_r mu(B(x,r))^{-1} int_{B(x,r)} |f| dmu.  OpenMP path; see
/// ref::maximal_function for the serial reference.
Eigen::VectorXd maximal_function(const SpacePtr& space,
                                 const Eigen::VectorXd& f,
                                 const std::vector<double>& radii);

namespace ref {
Eigen::VectorXd maximal_function(const SpacePtr& space,
                                 const Eigen::VectorXd& f,
                                 const std::vector<double>& radii);
}

struct CZBall {
    int center;
    double radius;
    Eigen::VectorXd b; // bad part supported in the ball
};

/// Calderon-Zygmund decomposition f = g + sum_i b_i at level lambda.
/// g = f off Omega = {Mf > lambda}; the bad parts partition f over Omega
/// by greedy Vitali selection of Whitney balls.  No mean subtraction (the
/// atoms need not have vanishing integral).
struct CZDecomposition {
    double lambda = 0.0;
    Eigen::VectorXd g;
    std::vector<CZBall> balls;
    int overlap_sigma = 0;         // max multiplicity of the doubled balls
    double good_sup_constant = 0.0;     // ||g||_inf / lambda
    double ball_mass_constant = 0.0;    // max_i int|b_i| / (lambda mu(B_i))
    double total_measure_constant = 0.0; // sum mu(B_i) * lambda / ||f||_1
};

CZDecomposition cz_decompose(const SpacePtr& space, const Eigen::VectorXd& f,
                             double lambda);

/// Operator from sections over the space into a target index set whose
/// rows touch only points near their anchor (e.g. the graph gradient with
/// edge-midpoint anchors and locality radius half an edge).
struct LocalOperator {
    SpacePtr space;
    int l = 1;
    MatrixXc matrix;                 // targets x (n*l)
    std::vector<int> anchor;         // source point nearest each target
    Eigen::VectorXd target_measure;  // quadrature weights on the target set
    double locality_radius = 0.0;

    int targets() const { return static_cast<int>(matrix.rows()); }
    /// distance from target row t to source point y, including the slack.
    double dist(int t, int y) const {
        return space->rho(anchor[t], y) + locality_radius;
    }
};

/// Graph gradient d0 with sqrt(weight) scaling, so d0* d0 equals the graph
/// Laplacian and d0 L^{-1/2} is a partial isometry.
LocalOperator graph_gradient(const SpacePtr& space,
                             const std::vector<Edge>& edges);

/// Largest singular value of A L^{-alpha} restricted to (ker L)^-perp, by
/// power iteration (tolerance 1e-8) in the measure-weighted norms.
double riesz_l2_norm(const LocalOperator& A, const SpectralDecomposition& dec,
                     double alpha);

/// Empirical weak-(1,1) lower bound: max over probe atoms a_y = delta_y /
/// mu(y) and all levels of lambda * mu{ |T a_y| > lambda }, by exact scan
/// of the sorted value multiset.
double weak11_estimate(const MatrixXc& T, const SpacePtr& space,
                       const Eigen::VectorXd& target_measure,
                       const std::vector<int>& probes);

/// Empirical ||T||_{p->p} lower bound by a seeded nonlinear power
/// iteration (Boyd's method); returns the running maximum, so the value is
/// monotone in `iterations` and matches the largest singular value at p=2.
double lp_norm_estimate(const MatrixXc& T, const SpacePtr& space,
                        const Eigen::VectorXd& target_measure, double p,
                        unsigned seed, int iterations);

/// Theorem 3.2 proof diagnostic: builds the modified good function
/// G = g + sum_i Phi_{r_i}(sqrt L) b_i and verifies the §6 sub-estimates:
/// (i) near-support of each smoothed atom in the doubled ball plus the
/// wave cone slack, (ii) ||Phi_{r_i}(sqrt L) b_i||^2 <= C lambda ||b_i||_1,
/// (iii) ||G||^2 <= C lambda ||f||_1.
CheckReport good_function_diagnostic(const SpectralDecomposition& dec,
                                     const Eigen::VectorXd& f, double lambda,
                                     const PhiFamily& phi);

/// Annulus decay behind eq. (fin2): for each j the column L2 mass of
/// A L^{-alpha} (1 - Phi_r)(sqrt L) beyond distance 2^{j-1} r, weighted by
/// mu(B(y, 2^j r))^{1/2}; passes iff consecutive ratios are <= 0.75 for
/// j >= 3 and reports the summed series as the empirical constant.
CheckReport riesz_tail_bound_check(const LocalOperator& A,
                                   const SpectralDecomposition& dec,
                                   const PhiFamily& phi, double alpha,
                                   double r, int j_max);

} // namespace specbound

#endif
