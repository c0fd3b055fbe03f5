#include "specbound/space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace specbound {

namespace {
constexpr double kMembershipTol = 1e-12;
}

double MetricMeasureSpace::min_positive_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (rho(i, j) > 0.0) best = std::min(best, rho(i, j));
    return std::isfinite(best) ? best : 0.0;
}

std::pair<std::vector<int>, double> MetricMeasureSpace::ball(int x,
                                                            double r) const {
    if (r < 0.0) throw std::invalid_argument("ball: negative radius");
    std::vector<int> members;
    double measure = 0.0;
    for (int y = 0; y < n; ++y) {
        if (rho(x, y) <= r + kMembershipTol) {
            members.push_back(y);
            measure += mu(y);
        }
    }
    return {std::move(members), measure};
}

double MetricMeasureSpace::ball_measure(int x, double r) const {
    double measure = 0.0;
    for (int y = 0; y < n; ++y)
        if (rho(x, y) <= r + kMembershipTol) measure += mu(y);
    return measure;
}

void MetricMeasureSpace::validate_metric() const {
    for (int i = 0; i < n; ++i) {
        if (rho(i, i) != 0.0)
            throw std::runtime_error("metric: nonzero diagonal at " +
                                     std::to_string(i));
        if (mu(i) <= 0.0)
            throw std::runtime_error("measure: nonpositive mass at " +
                                     std::to_string(i));
        for (int j = i + 1; j < n; ++j) {
            if (rho(i, j) != rho(j, i))
                throw std::runtime_error("metric: asymmetry");
            if (rho(i, j) < 0.0) throw std::runtime_error("metric: negative");
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (rho(i, j) > rho(i, k) + rho(k, j) + 1e-12)
                    throw std::runtime_error("metric: triangle inequality");
}

MetricMeasureSpace build_space(int n, const std::vector<Edge>& edges,
                               const Eigen::VectorXd& masses,
                               std::string provenance) {
    if (n <= 0) throw std::invalid_argument("build_space: n must be positive");
    if (masses.size() != n)
        throw std::invalid_argument("build_space: mass count mismatch");
    for (int i = 0; i < n; ++i)
        if (masses(i) <= 0.0)
            throw std::invalid_argument("build_space: nonpositive mass");

    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw std::invalid_argument("build_space: edge endpoint out of range");
        if (e.length <= 0.0)
            throw std::invalid_argument("build_space: nonpositive edge length");
        adj[e.u].emplace_back(e.v, e.length);
        adj[e.v].emplace_back(e.u, e.length);
    }

    MetricMeasureSpace space;
    space.n = n;
    space.mu = masses;
    space.provenance = std::move(provenance);
    space.rho.resize(n, n);

    const double inf = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(dynamic)
    for (int src = 0; src < n; ++src) {
        std::vector<double> dist(n, inf);
        dist[src] = 0.0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.emplace(0.0, src);
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[u]) continue;
            for (auto [v, w] : adj[u]) {
                if (d + w < dist[v]) {
                    dist[v] = d + w;
                    pq.emplace(dist[v], v);
                }
            }
        }
        for (int j = 0; j < n; ++j) space.rho(src, j) = dist[j];
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!std::isfinite(space.rho(i, j)))
                throw std::runtime_error(
                    "build_space: disconnected graph, metric undefined");
    return space;
}

MetricMeasureSpace make_space_from_metric(const Eigen::MatrixXd& rho,
                                          const Eigen::VectorXd& mu,
                                          std::string provenance) {
    MetricMeasureSpace space;
    space.n = static_cast<int>(rho.rows());
    space.rho = rho;
    space.mu = mu;
    space.provenance = std::move(provenance);
    if (space.n <= 512) space.validate_metric();
    return space;
}

DoublingProfile doubling_profile(const MetricMeasureSpace& space,
                                 const std::vector<double>& radii) {
    if (radii.empty())
        throw std::invalid_argument("doubling_profile: empty radius grid");
    DoublingProfile profile;
    profile.radii_grid = radii;

    double worst = 1.0;
#pragma omp parallel for reduction(max : worst)
    for (int x = 0; x < space.n; ++x) {
        for (double r : radii) {
            double small = space.ball_measure(x, r);
            double big = space.ball_measure(x, 2.0 * r);
            worst = std::max(worst, big / small);
        }
    }
    profile.c_doubling = worst;

    // Log-log fit of the worst-case growth ratio mu(B(x,gr))/mu(B(x,r))
    // against (1+g) over a dilation grid.
    std::vector<double> lx, ly;
    for (double g : {1.0, 2.0, 4.0, 8.0}) {
        double ratio = 1.0;
        for (int x = 0; x < space.n; ++x)
            for (double r : radii)
                ratio = std::max(ratio, space.ball_measure(x, g * r) /
                                            space.ball_measure(x, r));
        lx.push_back(std::log(1.0 + g));
        ly.push_back(std::log(ratio));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double m = lx.size();
    double denom = m * sxx - sx * sx;
    profile.d_exponent =
        denom > 0 ? std::max(0.0, (m * sxy - sx * sy) / denom) : 0.0;
    return profile;
}

std::vector<double> default_radii_grid(const MetricMeasureSpace& space,
                                       int count) {
    double lo = space.min_positive_distance();
    double hi = space.diameter();
    if (lo <= 0.0 || hi <= 0.0) return {1.0};
    if (count < 2 || lo >= hi) return {lo};
    std::vector<double> radii(count);
    for (int i = 0; i < count; ++i)
        radii[i] = lo * std::pow(hi / lo, double(i) / (count - 1));
    return radii;
}

MetricMeasureSpace make_cycle(int n, double edge_length, double mass) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, edge_length});
    if (n == 1) edges.clear();
    return build_space(n, edges, Eigen::VectorXd::Constant(n, mass),
                       "cycle C_" + std::to_string(n));
}

MetricMeasureSpace make_path(int n, double edge_length, double mass) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, edge_length});
    return build_space(n, edges, Eigen::VectorXd::Constant(n, mass),
                       "path P_" + std::to_string(n));
}

MetricMeasureSpace make_grid(int rows, int cols, double edge_length,
                             double mass) {
    auto id = [cols](int r, int c) { return r * cols + c; };
    std::vector<Edge> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), edge_length});
            if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), edge_length});
        }
    int n = rows * cols;
    return build_space(n, edges, Eigen::VectorXd::Constant(n, mass),
                       "grid " + std::to_string(rows) + "x" +
                           std::to_string(cols));
}

MetricMeasureSpace make_star(int leaves, double edge_length, double mass) {
    std::vector<Edge> edges;
    for (int i = 1; i <= leaves; ++i) edges.push_back({0, i, edge_length});
    int n = leaves + 1;
    return build_space(n, edges, Eigen::VectorXd::Constant(n, mass),
                       "star with " + std::to_string(leaves) + " leaves");
}

void save_space(const MetricMeasureSpace& space,
                const std::vector<Edge>& edges, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_space: cannot open " + path);
    out << "specbound-space v1\n";
    out << "provenance " << space.provenance << "\n";
    out << "points " << space.n << "\n";
    char buf[64];
    for (int i = 0; i < space.n; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", space.mu(i));
        out << i << " " << buf << "\n";
    }
    out << "edges " << edges.size() << "\n";
    for (const auto& e : edges) {
        std::snprintf(buf, sizeof buf, "%.17g", e.length);
        out << e.u << " " << e.v << " " << buf << "\n";
    }
}

std::pair<MetricMeasureSpace, std::vector<Edge>>
load_space(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_space: cannot open " + path);
    std::string line;
    auto next_line = [&](std::string& dst) {
        while (std::getline(in, dst))
            if (!dst.empty() && dst[0] != '#') return true;
        return false;
    };
    if (!next_line(line) || line != "specbound-space v1")
        throw std::runtime_error("load_space: bad header");
    if (!next_line(line) || line.rfind("provenance", 0) != 0)
        throw std::runtime_error("load_space: missing provenance");
    std::string provenance =
        line.size() > 11 ? line.substr(11) : std::string{};

    if (!next_line(line)) throw std::runtime_error("load_space: truncated");
    int n = 0;
    {
        std::istringstream ss(line);
        std::string kw;
        ss >> kw >> n;
        if (kw != "points" || n <= 0)
            throw std::runtime_error("load_space: bad points header");
    }
    Eigen::VectorXd mu(n);
    for (int i = 0; i < n; ++i) {
        if (!next_line(line)) throw std::runtime_error("load_space: truncated");
        std::istringstream ss(line);
        int idx;
        double mass;
        ss >> idx >> mass;
        if (idx != i) throw std::runtime_error("load_space: point order");
        mu(i) = mass;
    }
    if (!next_line(line)) throw std::runtime_error("load_space: truncated");
    size_t m = 0;
    {
        std::istringstream ss(line);
        std::string kw;
        ss >> kw >> m;
        if (kw != "edges") throw std::runtime_error("load_space: bad edges header");
    }
    std::vector<Edge> edges(m);
    for (size_t i = 0; i < m; ++i) {
        if (!next_line(line)) throw std::runtime_error("load_space: truncated");
        std::istringstream ss(line);
        ss >> edges[i].u >> edges[i].v >> edges[i].length;
    }
    auto space = build_space(n, edges, mu, provenance);
    return {std::move(space), std::move(edges)};
}

} // namespace specbound
