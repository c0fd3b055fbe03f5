#ifndef SPECBOUND_BUNDLE_OP_HPP
#define SPECBOUND_BUNDLE_OP_HPP

#include <complex>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "specbound/report.hpp"
#include "specbound/space.hpp"

namespace specbound {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;

using ScalarFunction = std::function<double(double)>;

/// Hermitian positive operator on sections of a trivial rank-l bundle,
/// self-adjoint with respect to the mu-weighted inner product
/// <f,g> = sum_x (f(x),g(x)) mu(x).
struct BundleOperator {
    SpacePtr space;
    int l = 1;
    MatrixXc matrix; // (n*l) x (n*l), acting on stacked fiber coordinates
    std::optional<int> locality_hops;

    int dim() const { return space->n * l; }

    /// mu-weighted adjoint-symmetry residual, relative to the matrix scale.
    double self_adjointness_residual() const;
};

/// Eigensystem of a BundleOperator.  Eigenvectors are columns of `basis`,
/// mu-orthonormal, in ascending eigenvalue order with a deterministic
/// phase convention (first coefficient of magnitude > 1e-8 is real
/// positive).
struct SpectralDecomposition {
    SpacePtr space;
    int l = 1;
    Eigen::VectorXd eigenvalues;
    MatrixXc basis;
    int null_dim = 0;

    int dim() const { return space->n * l; }
    double spectral_radius() const {
        return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0;
    }
};

/// Measure-weighted kernel blocks: (Sf)(x) = sum_y K(x,y) f(y) mu(y).
/// Stored as the full (n*l)x(n*l) array of l-by-l blocks.
struct OperatorKernel {
    SpacePtr space;
    int l = 1;
    MatrixXc blocks;

    Eigen::Block<const MatrixXc> block(int x, int y) const {
        return blocks.block(x * l, y * l, l, l);
    }
    /// Operator norm of block (x,y) (largest singular value).
    double block_op_norm(int x, int y) const;
    /// Hilbert-Schmidt (Frobenius) norm of block (x,y).
    double block_hs_norm(int x, int y) const;
    double max_block_norm() const;
};

enum class BlockNorm { Operator, HilbertSchmidt };

SpectralDecomposition spectral_decompose(const BundleOperator& op);

/// F(L) = U diag(F(lambda)) U^{-1} in the mu-weighted sense.  Throws if F
/// is NaN at an eigenvalue.
MatrixXc apply_function(const SpectralDecomposition& dec,
                        const ScalarFunction& F);

OperatorKernel kernel_of(const MatrixXc& matrix, const SpacePtr& space, int l);

/// (sum_y |K(x,y)|^2 mu(y))^{1/2} in the selected block norm.
double row_l2_norm(const OperatorKernel& kernel, int x, BlockNorm norm);

/// Row norms for every x at once (OpenMP path; see ref:: for the serial
/// reference).
Eigen::VectorXd row_l2_norms_all(const OperatorKernel& kernel, BlockNorm norm);

namespace ref {
/// Serial reference for row_l2_norms_all.
Eigen::VectorXd row_l2_norms_all(const OperatorKernel& kernel, BlockNorm norm);
} // namespace ref

/// Checks ||K_{F1F2(L)}(x,.)|_HS||_{L2} <= ||F1||_inf ||K_{F2(L)}(x,.)|_HS||_{L2}.
CheckReport compose_bound_check(const ScalarFunction& F1,
                                const ScalarFunction& F2,
                                const SpectralDecomposition& dec);

/// Degree-k Chebyshev approximation of F(L) on the given spectral
/// interval.  Exactly local: for locality_hops = 1 the result vanishes
/// beyond `degree` hops.
MatrixXc chebyshev_apply(const BundleOperator& op, const ScalarFunction& F,
                         int degree, double interval_lo, double interval_hi);

/// Scalar graph Laplacian of a weighted graph as a BundleOperator:
/// (Lf)(x) = mu(x)^{-1} sum_{y~x} w_{xy} (f(x) - f(y)).
BundleOperator graph_laplacian(const SpacePtr& space,
                               const std::vector<Edge>& edges);

/// Cycle/path conveniences: builds the space and its unit-weight Laplacian.
std::pair<SpacePtr, BundleOperator> cycle_laplacian(int n);
std::pair<SpacePtr, BundleOperator> path_laplacian(int n);

// --- operator save/load ---------------------------------------------------
//
// Text format:
//   specbound-operator v1
//   n <n> l <l> convention mu-weighted
//   <n*l * n*l lines: re im>
// preceded by the space file content inline.

void save_operator(const BundleOperator& op, const std::vector<Edge>& edges,
                   const std::string& path);
BundleOperator load_operator(const std::string& path);

/// Kernel CSV export: x, y, |K|, |K|_HS (row-major order).
std::string kernel_to_csv(const OperatorKernel& kernel);

} // namespace specbound

#endif
