#include "specbound/gaussian.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace specbound {

namespace {

constexpr double kPi = 3.14159265358979323846;

double block_abs(const MatrixXc& mat, const SpacePtr& space, int l, int x,
                 int y) {
    OperatorKernel k = kernel_of(mat, space, l);
    return k.block_op_norm(x, y);
}

} // namespace

CheckReport truncation_identity_check(const SpectralDecomposition& dec,
                                      const std::vector<HeatTriple>& triples) {
    CheckReport rep;
    rep.check_name = "truncation_identity";
    rep.table_header = {"x", "y", "t", "s", "split_residual",
                        "wave_remainder", "tail_bound"};
    const auto& space = dec.space;
    double worst = 0.0;
    bool all_pass = true;
    for (const auto& tr : triples) {
        double rho = space->rho(tr.x, tr.y);
        if (tr.t >= rho * rho || rho <= 0.0) {
            std::ostringstream msg;
            msg << "truncation_identity_check: triple (" << tr.x << ", "
                << tr.y << ", t = " << tr.t << ") outside the Theorem 3.1 "
                << "regime t < rho^2 (rho = " << rho << ")";
            throw std::invalid_argument(msg.str());
        }
        double s = rho / std::sqrt(tr.t);
        Gl2Family fam = build_gl2_family(s);
        double hx = fam.T / (fam.x_grid.size() - 1.0);
        auto fhat = [&](double u) {
            return 2.0 * filon_cos(fam.F_s, 0.0, hx, u);
        };
        auto rhat = [&](double u) {
            return 2.0 * filon_cos(fam.R_s, 0.0, hx, u);
        };
        MatrixXc heat = apply_function(
            dec, [&](double lam) { return std::exp(-tr.t * lam); });
        MatrixXc trunc = apply_function(dec, [&](double lam) {
            return fhat(std::sqrt(std::max(0.0, tr.t * lam)));
        });
        MatrixXc remainder = apply_function(dec, [&](double lam) {
            return rhat(std::sqrt(std::max(0.0, tr.t * lam)));
        });
        // The split identity exp(-t lam) = Fhat_s + Rhat_s (both transforms
        // computed by quadrature from the x-side); its residual is pure
        // quadrature error and is the certified quantity.
        double resid =
            (heat - trunc - remainder).cwiseAbs().maxCoeff();
        // Wave-carried part of the kernel at (x, y): the remainder alone,
        // compared against the finite-propagation tail bound below.
        double diff = block_abs(heat - trunc, space, dec.l, tr.x, tr.y);

        // Measured wave tail: the remainder is carried by cos(u sqrt(t L))
        // for u <= s - 1/(2s) (support of R_s), i.e. physical times
        // u*sqrt(t) < rho, where finite propagation makes the propagator
        // kernel at (x, y) nearly vanish.
        double u_max = (s - 0.5 / s) * std::sqrt(tr.t);
        double eps_fs = 0.0;
        const int nu = 64;
        for (int i = 0; i <= nu; ++i) {
            double u = u_max * i / nu;
            MatrixXc wave = apply_function(dec, [&](double lam) {
                return std::cos(u * std::sqrt(std::max(0.0, lam)));
            });
            eps_fs = std::max(eps_fs, block_abs(wave, space, dec.l, tr.x, tr.y));
        }
        // |K_{R}(x,y)| <= eps_fs * (1/pi) ||R_s||_1, and the transform sup
        // ||Rhat_s||_inf is logged alongside.
        double r_l1 = 0.0;
        for (int i = 0; i < fam.R_s.size(); ++i)
            r_l1 += ((i == 0 || i + 1 == fam.R_s.size()) ? 0.5 : 1.0) *
                    std::abs(fam.R_s(i)) * hx;
        r_l1 *= 2.0; // even extension
        double rhat_sup = 0.0;
        for (int k = 0; k < fam.lambda_grid.size(); ++k) {
            double lam = fam.lambda_grid(k);
            rhat_sup = std::max(
                rhat_sup, std::abs(std::exp(-lam * lam) - fam.F_hat(k)));
        }
        double bound = eps_fs * std::max(rhat_sup, r_l1 / kPi);
        if (resid > 1e-8) all_pass = false;
        if (diff > std::max(1e-8, bound)) all_pass = false;
        worst = std::max(worst, resid);
        rep.table.push_back({static_cast<double>(tr.x),
                             static_cast<double>(tr.y), tr.t, s, resid, diff,
                             bound});
        rep.grid.push_back({{"x", tr.x}, {"y", tr.y}, {"t", tr.t}});
    }
    rep.observed_constant = worst;
    rep.threshold = 1e-8;
    rep.pass = all_pass;
    return rep;
}

CheckReport gl2_bound_check(const SpectralDecomposition& dec,
                            const OnDiagProfile& profile,
                            const std::vector<HeatTriple>& triples, int N,
                            Gl2Variant variant) {
    CheckReport rep;
    rep.check_name = variant == Gl2Variant::ZW1 ? "gl2_bound_zw1"
                                                : "gl2_bound_zw2";
    rep.table_header = {"x", "y", "t", "rho", "observed_CN"};
    const auto& space = dec.space;
    auto V_at = [&](int x, double tau) {
        if (variant == Gl2Variant::ZW1) return profile.at(x, tau);
        // volume column: same interpolation, other matrix
        const auto& tg = profile.t_grid;
        if (tau <= tg.front()) return profile.volume_column(x, 0);
        if (tau >= tg.back())
            return profile.volume_column(x, tg.size() - 1);
        auto it = std::upper_bound(tg.begin(), tg.end(), tau);
        int i = static_cast<int>(it - tg.begin()) - 1;
        double w = (tau - tg[i]) / (tg[i + 1] - tg[i]);
        return profile.volume_column(x, i) * (1.0 - w) +
               profile.volume_column(x, i + 1) * w;
    };
    double worst = 0.0;
    for (const auto& tr : triples) {
        double rho = space->rho(tr.x, tr.y);
        if (tr.t >= rho * rho || rho <= 0.0) {
            std::ostringstream msg;
            msg << "gl2_bound_check: triple (" << tr.x << ", " << tr.y
                << ", t = " << tr.t << ") outside the regime t < rho^2";
            throw std::invalid_argument(msg.str());
        }
        MatrixXc heat = apply_function(
            dec, [&](double lam) { return std::exp(-tr.t * lam); });
        double kval = block_abs(heat, space, dec.l, tr.x, tr.y);
        double tau = tr.t / rho;
        double vx = V_at(tr.x, tau), vy = V_at(tr.y, tau);
        double cn = kval * (rho / std::sqrt(tr.t)) *
                    std::exp(rho * rho / (4.0 * tr.t)) / (vx * vy);
        worst = std::max(worst, cn);
        rep.table.push_back({static_cast<double>(tr.x),
                             static_cast<double>(tr.y), tr.t, rho, cn});
        rep.grid.push_back({{"x", tr.x}, {"y", tr.y}, {"t", tr.t}});
    }
    rep.observed_constant = worst;
    rep.threshold = std::numeric_limits<double>::infinity();
    rep.pass = std::isfinite(worst);
    rep.details["N"] = N;
    return rep;
}

CheckReport molchanov_sphere_check(int l_max,
                                   const std::vector<double>& t_grid) {
    if (l_max < 30)
        throw std::invalid_argument("molchanov_sphere_check: need l_max >= 30");
    for (double t : t_grid)
        if (t < 0.1 || t > 0.5) {
            std::ostringstream msg;
            msg << "molchanov_sphere_check: t = " << t
                << " outside [0.1, 0.5]; below 0.1 the alternating series "
                << "cancels past double precision";
            throw std::invalid_argument(msg.str());
        }
    CheckReport rep;
    rep.check_name = "molchanov_sphere";
    rep.table_header = {"t", "ln_K", "fitted"};
    auto K_of = [&](double t) {
        // Kahan-compensated alternating Legendre series.
        double sum = 0.0, comp = 0.0;
        for (int l = 0; l <= l_max; ++l) {
            double term = (2.0 * l + 1.0) *
                          ((l % 2) ? -1.0 : 1.0) *
                          std::exp(-t * l * (l + 1.0));
            double y = term - comp;
            double tt = sum + y;
            comp = (tt - sum) - y;
            sum = tt;
        }
        return sum / (4.0 * kPi);
    };
    std::vector<double> xs, ys;
    for (double t : t_grid) {
        double K = K_of(t);
        xs.push_back(1.0 / t);
        ys.push_back(std::log(K * t / (1.0 + kPi / std::sqrt(t))));
        rep.grid.push_back(t);
    }
    int n = static_cast<int>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    for (int i = 0; i < n; ++i)
        rep.table.push_back({t_grid[i], std::log(K_of(t_grid[i])),
                             slope * xs[i] + intercept});
    double target = -kPi * kPi / 4.0;
    rep.observed_constant = slope;
    rep.threshold = 0.05;
    rep.pass = std::abs(slope - target) <= 0.05 * std::abs(target);
    rep.details["target"] = target;
    rep.details["intercept"] = intercept;
    rep.details["l_max"] = l_max;
    return rep;
}

} // namespace specbound
