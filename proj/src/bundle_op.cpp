#include "specbound/bundle_op.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace specbound {

namespace {

Eigen::VectorXd weight_vector(const MetricMeasureSpace& space, int l) {
    Eigen::VectorXd w(space.n * l);
    for (int x = 0; x < space.n; ++x)
        for (int i = 0; i < l; ++i) w(x * l + i) = space.mu(x);
    return w;
}

} // namespace

double BundleOperator::self_adjointness_residual() const {
    Eigen::VectorXd w = weight_vector(*space, l);
    // mu-self-adjointness: W M = M^* W.
    MatrixXc lhs = w.asDiagonal() * matrix;
    MatrixXc rhs = matrix.adjoint() * w.asDiagonal();
    double scale = lhs.norm();
    return scale > 0 ? (lhs - rhs).norm() / scale : 0.0;
}

double OperatorKernel::block_op_norm(int x, int y) const {
    if (l == 1) return std::abs(blocks(x, y));
    Eigen::JacobiSVD<MatrixXc> svd(block(x, y));
    return svd.singularValues()(0);
}

double OperatorKernel::block_hs_norm(int x, int y) const {
    return block(x, y).norm();
}

double OperatorKernel::max_block_norm() const {
    const int n = space->n;
    double best = 0.0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            best = std::max(best, block_op_norm(x, y));
    return best;
}

SpectralDecomposition spectral_decompose(const BundleOperator& op) {
    if (op.self_adjointness_residual() > 1e-10 * 10)
        throw std::runtime_error(
            "spectral_decompose: operator not mu-self-adjoint");

    const int dim = op.dim();
    Eigen::VectorXd w = weight_vector(*op.space, op.l);
    Eigen::VectorXd ws = w.array().sqrt();
    Eigen::VectorXd wsi = ws.array().inverse();

    // Symmetrize: S = W^{1/2} M W^{-1/2} is Hermitian in the flat product.
    MatrixXc sym = ws.asDiagonal() * op.matrix * wsi.asDiagonal();
    sym = Complex(0.5, 0) * (sym + MatrixXc(sym.adjoint()));

    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(sym);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral_decompose: eigensolver failed");

    Eigen::VectorXd vals = solver.eigenvalues();
    double radius = std::max(std::abs(vals(0)), std::abs(vals(dim - 1)));
    double bound = 1e-10 * std::max(radius, 1.0);
    if (vals(0) < -bound)
        throw std::runtime_error("spectral_decompose: operator not positive "
                                 "(eigenvalue " +
                                 std::to_string(vals(0)) + ")");
    for (int i = 0; i < dim; ++i)
        if (vals(i) < 0.0) vals(i) = 0.0; // discretization noise

    MatrixXc basis = wsi.asDiagonal() * solver.eigenvectors();

    // Deterministic phase: first coefficient with |.| > 1e-8 real positive.
    for (int k = 0; k < dim; ++k) {
        for (int i = 0; i < dim; ++i) {
            Complex c = basis(i, k);
            if (std::abs(c) > 1e-8) {
                basis.col(k) *= std::conj(c) / std::abs(c);
                break;
            }
        }
    }

    SpectralDecomposition dec;
    dec.space = op.space;
    dec.l = op.l;
    dec.eigenvalues = vals;
    dec.basis = basis;
    double null_cut = 1e-10 * std::max(radius, 1.0);
    dec.null_dim = 0;
    while (dec.null_dim < dim && vals(dec.null_dim) <= null_cut) ++dec.null_dim;
    return dec;
}

MatrixXc apply_function(const SpectralDecomposition& dec,
                        const ScalarFunction& F) {
    const int dim = dec.dim();
    Eigen::VectorXd fvals(dim);
    for (int i = 0; i < dim; ++i) {
        double v = F(dec.eigenvalues(i));
        if (std::isnan(v))
            throw std::runtime_error("apply_function: F undefined at eigenvalue " +
                                     std::to_string(dec.eigenvalues(i)));
        fvals(i) = v;
    }
    Eigen::VectorXd w = weight_vector(*dec.space, dec.l);
    // U F(Lambda) U^* W: the mu-weighted spectral reconstruction.
    return dec.basis * fvals.asDiagonal() * dec.basis.adjoint() *
           w.asDiagonal();
}

OperatorKernel kernel_of(const MatrixXc& matrix, const SpacePtr& space,
                         int l) {
    if (matrix.rows() != space->n * l || matrix.cols() != space->n * l)
        throw std::invalid_argument("kernel_of: dimension mismatch");
    OperatorKernel kernel;
    kernel.space = space;
    kernel.l = l;
    kernel.blocks = matrix;
    for (int y = 0; y < space->n; ++y)
        kernel.blocks.middleCols(y * l, l) /= space->mu(y);
    return kernel;
}

double row_l2_norm(const OperatorKernel& kernel, int x, BlockNorm norm) {
    const int n = kernel.space->n;
    double sum = 0.0;
    for (int y = 0; y < n; ++y) {
        double b = norm == BlockNorm::Operator ? kernel.block_op_norm(x, y)
                                               : kernel.block_hs_norm(x, y);
        sum += b * b * kernel.space->mu(y);
    }
    return std::sqrt(sum);
}

Eigen::VectorXd row_l2_norms_all(const OperatorKernel& kernel,
                                 BlockNorm norm) {
    const int n = kernel.space->n;
    Eigen::VectorXd out(n);
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x) out(x) = row_l2_norm(kernel, x, norm);
    return out;
}

namespace ref {

Eigen::VectorXd row_l2_norms_all(const OperatorKernel& kernel,
                                 BlockNorm norm) {
    const int n = kernel.space->n;
    Eigen::VectorXd out(n);
    for (int x = 0; x < n; ++x) out(x) = row_l2_norm(kernel, x, norm);
    return out;
}

} // namespace ref

CheckReport compose_bound_check(const ScalarFunction& F1,
                                const ScalarFunction& F2,
                                const SpectralDecomposition& dec) {
    CheckReport report;
    report.check_name = "compose_bound";
    double f1_sup = 0.0;
    for (int i = 0; i < dec.eigenvalues.size(); ++i)
        f1_sup = std::max(f1_sup, std::abs(F1(dec.eigenvalues(i))));

    auto k12 = kernel_of(apply_function(dec, [&](double x) {
                             return F1(x) * F2(x);
                         }),
                         dec.space, dec.l);
    auto k2 = kernel_of(apply_function(dec, F2), dec.space, dec.l);
    Eigen::VectorXd lhs = row_l2_norms_all(k12, BlockNorm::HilbertSchmidt);
    Eigen::VectorXd rhs = row_l2_norms_all(k2, BlockNorm::HilbertSchmidt);

    double max_ratio = 0.0;
    report.table_header = {"x", "lhs", "rhs"};
    for (int x = 0; x < dec.space->n; ++x) {
        double denom = f1_sup * rhs(x);
        if (denom > 0.0) max_ratio = std::max(max_ratio, lhs(x) / denom);
        report.table.push_back({double(x), lhs(x), rhs(x)});
    }
    report.observed_constant = max_ratio;
    report.threshold = 1.0 + 1e-9;
    report.pass = max_ratio <= report.threshold;
    report.details["f1_sup"] = f1_sup;
    return report;
}

MatrixXc chebyshev_apply(const BundleOperator& op, const ScalarFunction& F,
                         int degree, double a, double b) {
    if (degree < 0) throw std::invalid_argument("chebyshev_apply: degree < 0");
    if (!(b > a)) throw std::invalid_argument("chebyshev_apply: bad interval");

    {
        // The interval must cover the spectrum; desk scale, dense check.
        auto dec = spectral_decompose(op);
        double lo = dec.eigenvalues(0), hi = dec.spectral_radius();
        if (lo < a - 1e-9 || hi > b + 1e-9)
            throw std::runtime_error(
                "chebyshev_apply: spectral interval excludes an eigenvalue");
    }

    // Chebyshev coefficients of F on [a,b] via the node sum.
    const int m = degree + 1;
    std::vector<double> coeff(m, 0.0);
    for (int k = 0; k < m; ++k) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            double theta = M_PI * (j + 0.5) / m;
            double x = std::cos(theta);
            double lambda = 0.5 * (b - a) * x + 0.5 * (a + b);
            acc += F(lambda) * std::cos(k * theta);
        }
        coeff[k] = 2.0 * acc / m;
    }
    coeff[0] *= 0.5;

    const int dim = op.dim();
    MatrixXc scaled = (2.0 / (b - a)) * op.matrix;
    scaled.diagonal().array() -= (a + b) / (b - a);

    MatrixXc t_prev = MatrixXc::Identity(dim, dim);
    MatrixXc result = coeff[0] * t_prev;
    if (degree == 0) return result;
    MatrixXc t_curr = scaled;
    result += coeff[1] * t_curr;
    for (int k = 2; k <= degree; ++k) {
        MatrixXc t_next = 2.0 * (scaled * t_curr) - t_prev;
        result += coeff[k] * t_next;
        t_prev.swap(t_curr);
        t_curr.swap(t_next);
    }
    return result;
}

BundleOperator graph_laplacian(const SpacePtr& space,
                               const std::vector<Edge>& edges) {
    const int n = space->n;
    MatrixXc m = MatrixXc::Zero(n, n);
    for (const auto& e : edges) {
        double w = 1.0; // unit conductance per edge; lengths carry the metric
        m(e.u, e.u) += w;
        m(e.v, e.v) += w;
        m(e.u, e.v) -= w;
        m(e.v, e.u) -= w;
    }
    for (int x = 0; x < n; ++x) m.row(x) /= space->mu(x);
    BundleOperator op;
    op.space = space;
    op.l = 1;
    op.matrix = std::move(m);
    op.locality_hops = 1;
    return op;
}

std::pair<SpacePtr, BundleOperator> cycle_laplacian(int n) {
    auto space = std::make_shared<MetricMeasureSpace>(make_cycle(n));
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    return {space, graph_laplacian(space, edges)};
}

std::pair<SpacePtr, BundleOperator> path_laplacian(int n) {
    auto space = std::make_shared<MetricMeasureSpace>(make_path(n));
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return {space, graph_laplacian(space, edges)};
}

void save_operator(const BundleOperator& op, const std::vector<Edge>& edges,
                   const std::string& path) {
    save_space(*op.space, edges, path + ".space");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_operator: cannot open " + path);
    out << "specbound-operator v1\n";
    out << "n " << op.space->n << " l " << op.l << " convention mu-weighted\n";
    char buf[128];
    const int dim = op.dim();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g", op.matrix(i, j).real(),
                          op.matrix(i, j).imag());
            out << buf << "\n";
        }
}

BundleOperator load_operator(const std::string& path) {
    auto [space, edges] = load_space(path + ".space");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_operator: cannot open " + path);
    std::string line;
    std::getline(in, line);
    if (line != "specbound-operator v1")
        throw std::runtime_error("load_operator: bad header");
    std::getline(in, line);
    int n = 0, l = 0;
    {
        std::istringstream ss(line);
        std::string kw1, kw2, kw3, conv;
        ss >> kw1 >> n >> kw2 >> l >> kw3 >> conv;
        if (kw1 != "n" || kw2 != "l" || conv != "mu-weighted")
            throw std::runtime_error("load_operator: bad dimension header");
    }
    if (n != space.n) throw std::runtime_error("load_operator: space mismatch");
    BundleOperator op;
    op.space = std::make_shared<MetricMeasureSpace>(std::move(space));
    op.l = l;
    op.matrix.resize(n * l, n * l);
    for (int i = 0; i < n * l; ++i)
        for (int j = 0; j < n * l; ++j) {
            double re, im;
            in >> re >> im;
            op.matrix(i, j) = Complex(re, im);
        }
    if (!in) throw std::runtime_error("load_operator: truncated matrix");
    return op;
}

std::string kernel_to_csv(const OperatorKernel& kernel) {
    std::string out = "x,y,op_norm,hs_norm\n";
    char buf[96];
    for (int x = 0; x < kernel.space->n; ++x)
        for (int y = 0; y < kernel.space->n; ++y) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", x, y,
                          kernel.block_op_norm(x, y),
                          kernel.block_hs_norm(x, y));
            out += buf;
        }
    return out;
}

} // namespace specbound
