#include "pnlayer/spectrum.hpp"

#include "pnlayer/kernel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace pnlayer {

LinearizedOperator::LinearizedOperator(const EnergyContext& ctx, const RealField& u_star, bool base_converged)
    : ctx_(ctx), base_(u_star), multiplier_(ctx.grid), base_converged_(base_converged) {
    if (!(u_star.grid() == ctx.grid)) throw InvalidArgument("profile grid does not match the context");
    const double s = 1.0 / (2.0 * ctx.G);
    for (std::size_t n = 0; n < u_star.size(); ++n) multiplier_[n] = s * ctx.potential.second(u_star[n]);
    edge_ = ctx.potential.well_curvature() * s;
}

LinearizedOperator LinearizedOperator::bare(const EnergyContext& ctx) {
    LinearizedOperator L;
    L.ctx_ = ctx;
    L.base_ = ctx.eta;
    L.multiplier_ = RealField(ctx.grid);
    L.edge_ = 0.0;
    return L;
}

RealField LinearizedOperator::apply(const RealField& phi) const {
    RealField out = apply_symbol_table(phi, ctx_.sigma);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += multiplier_[n] * phi[n];
    return out;
}

double LinearizedOperator::lower_bound_estimate() const {
    double m = 0.0;
    for (double v : multiplier_.values()) m = std::min(m, v);
    return m;
}

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double a, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// Preconditioned CG for (L - s) x = b; L - s must be positive definite.
struct ShiftedSolver {
    const LinearizedOperator& L;
    double shift;
    std::vector<double> precond;
    const SpectrumConfig& cfg;

    Vec apply_shifted(const Vec& x) const {
        RealField f(L.grid(), x);
        RealField y = L.apply(f);
        Vec out(y.values().begin(), y.values().end());
        axpy(-shift, x, out);
        return out;
    }

    Vec apply_precond(const Vec& r) const {
        RealField f = apply_symbol_table(RealField(L.grid(), r), precond);
        return {f.values().begin(), f.values().end()};
    }

    Vec solve(const Vec& b) const {
        Vec x(b.size(), 0.0);
        Vec r = b;
        Vec z = apply_precond(r);
        Vec p = z;
        double rz = dot(r, z);
        const double bnorm = std::sqrt(dot(b, b));
        if (bnorm == 0.0) return x;
        for (int it = 0; it < cfg.cg_max_iterations; ++it) {
            const Vec Ap = apply_shifted(p);
            const double pAp = dot(p, Ap);
            if (!(pAp > 0.0)) {
                throw NumericalError(
                    "shift-invert solve broke down (L - shift is not positive definite); restart with a more "
                    "negative shift or check that the profile is a converged minimizer");
            }
            const double a = rz / pAp;
            axpy(a, p, x);
            axpy(-a, Ap, r);
            if (std::sqrt(dot(r, r)) <= cfg.cg_tol * bnorm) return x;
            z = apply_precond(r);
            const double rz_next = dot(r, z);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
        }
        throw NumericalError("shift-invert solve did not converge; restart with a larger cg_max_iterations");
    }
};

// Two passes of classical Gram-Schmidt against `basis`, then normalize.
bool orthonormalize(Vec& v, const std::vector<Vec>& basis) {
    const double before = std::sqrt(dot(v, v));
    if (before == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) axpy(-dot(b, v), b, v);
    }
    const double after = std::sqrt(dot(v, v));
    if (after < 1e-10 * before) return false;
    for (double& x : v) x /= after;
    return true;
}

// d/dx u through the periodic part u - x/X, which is smooth at a solution
// (u - eta inherits the C^2 joins of eta at +-1).
RealField translation_mode(const RealField& u) {
    const auto& g = u.grid();
    RealField d = derivative_x(u - ReferenceProfile::sample(g) + ReferenceProfile::periodic_part(g));
    for (std::size_t n = 0; n < d.size(); ++n) d[n] += 1.0 / g.half_length();
    return d;
}

void finish_report(SpectrumReport& r, const LinearizedOperator& L) {
    r.edge_estimate = L.edge_estimate();
    r.lower_bound_estimate = L.lower_bound_estimate();
    r.base_converged = L.base_converged();
    r.gap = r.eigenvalues.size() >= 2 ? r.eigenvalues[1] - r.eigenvalues[0] : 0.0;
    if (!r.eigenvectors.empty()) {
        const RealField mode = translation_mode(L.base());
        const double nm = l2_norm(mode);
        const double ng = l2_norm(r.eigenvectors[0]);
        r.overlap = (nm > 0.0 && ng > 0.0) ? std::min(1.0, std::abs(inner(r.eigenvectors[0], mode)) / (nm * ng)) : 0.0;
    }
}

}  // namespace

SpectrumReport lowest_eigenpairs(const LinearizedOperator& L, const SpectrumConfig& cfg) {
    const auto& g = L.grid();
    if (cfg.k < 1 || cfg.k > 10) throw InvalidArgument("eigenpair count must lie in 1..10");
    if (g.size() > (std::size_t{1} << 18)) throw InvalidArgument("iterative eigen-solve limited to 2^18 points");
    const int k = cfg.k;
    const int block = std::max(3, k + 2);
    if (cfg.max_basis < 3 * block) throw InvalidArgument("max_basis too small for the block size");

    const double edge = L.edge_estimate();
    const double shift = std::isnan(cfg.shift) ? (edge > 0.0 ? -0.1 * edge : -0.05) : cfg.shift;
    ShiftedSolver solver{L, shift, {}, cfg};
    solver.precond.resize(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) solver.precond[n] = 1.0 / (L.context().sigma[n] + edge - shift);

    const auto n = g.size();
    auto applyL = [&](const Vec& x) {
        RealField y = L.apply(RealField(g, x));
        return Vec(y.values().begin(), y.values().end());
    };

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal;
    std::vector<Vec> B;
    std::vector<Vec> LB;
    std::vector<Vec> last;
    for (int j = 0; j < block; ++j) {
        Vec v(n);
        for (double& x : v) x = normal(rng);
        if (orthonormalize(v, B)) {
            LB.push_back(applyL(v));
            B.push_back(v);
            last.push_back(B.back());
        }
    }

    SpectrumReport report;
    report.method = "block shift-invert Krylov";
    report.shift = shift;
    Eigen::VectorXd theta;
    Eigen::MatrixXd Y;
    auto ritz = [&] {
        const auto m = static_cast<Eigen::Index>(B.size());
        Eigen::MatrixXd H(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j <= i; ++j) {
                const double h = 0.5 * (dot(B[static_cast<std::size_t>(i)], LB[static_cast<std::size_t>(j)]) +
                                        dot(B[static_cast<std::size_t>(j)], LB[static_cast<std::size_t>(i)]));
                H(i, j) = h;
                H(j, i) = h;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        theta = es.eigenvalues();
        Y = es.eigenvectors();
    };
    auto combine = [&](const std::vector<Vec>& src, int col) {
        Vec x(n, 0.0);
        for (std::size_t i = 0; i < src.size(); ++i) axpy(Y(static_cast<Eigen::Index>(i), col), src[i], x);
        return x;
    };

    for (int restart = 0; restart <= cfg.max_restarts; ++restart) {
        report.restarts = restart;
        while (static_cast<int>(B.size()) + block <= cfg.max_basis) {
            std::vector<Vec> next;
            for (const auto& v : last) {
                Vec w = solver.solve(v);
                ++report.solves;
                if (orthonormalize(w, B)) {
                    LB.push_back(applyL(w));
                    B.push_back(w);
                    next.push_back(B.back());
                }
            }
            if (next.empty()) break;  // invariant subspace
            last = std::move(next);
            ritz();
            if (static_cast<int>(B.size()) < k) continue;
            std::vector<double> res(static_cast<std::size_t>(k));
            bool done = true;
            for (int i = 0; i < k; ++i) {
                Vec x = combine(B, i);
                Vec r = combine(LB, i);
                axpy(-theta(i), x, r);
                res[static_cast<std::size_t>(i)] = std::sqrt(dot(r, r) / dot(x, x));
                done = done && res[static_cast<std::size_t>(i)] <= cfg.residual_tol;
            }
            if (done) {
                for (int i = 0; i < k; ++i) {
                    report.eigenvalues.push_back(theta(i));
                    report.eigenvectors.emplace_back(g, combine(B, i));
                }
                report.residuals = std::move(res);
                finish_report(report, L);
                return report;
            }
        }
        ritz();
        // Thick restart: keep the lowest `block` Ritz vectors.
        std::vector<Vec> nb;
        std::vector<Vec> nlb;
        for (int i = 0; i < block && i < static_cast<int>(B.size()); ++i) {
            nb.push_back(combine(B, i));
            nlb.push_back(combine(LB, i));
        }
        B = std::move(nb);
        LB = std::move(nlb);
        last = B;
    }
    throw NumericalError("eigen-iteration did not converge; restart with larger max_basis or max_restarts");
}

SpectrumReport lowest_eigenpairs_dense(const LinearizedOperator& L, int k) {
    const auto& g = L.grid();
    const auto n = g.size();
    if (n > kDenseLimit) throw InvalidArgument("dense eigen-solve limited to 4096 points");
    if (k < 1 || static_cast<std::size_t>(k) > n) throw InvalidArgument("invalid eigenpair count");
    const auto kernel = extract_kernel(L.context().symbol, g);
    const double cv = g.cell_volume();
    const std::array<int, 3> dims{g.nx(), g.dim() > 1 ? g.ny()[0] : 1, g.dim() > 2 ? g.ny()[1] : 1};
    std::vector<std::array<int, 3>> idx(n);
    for (std::size_t w = 0; w < n; ++w) idx[w] = g.unflatten(w);

    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd A(N, N);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::array<int, 3> d{};
            for (std::size_t a = 0; a < 3; ++a) d[a] = ((idx[i][a] - idx[j][a]) % dims[a] + dims[a]) % dims[a];
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cv * kernel.values[g.flatten(d[0], d[1], d[2])];
        }
        A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += L.multiplier()[i];
    }
    A = 0.5 * (A + A.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigen-solve failed");

    SpectrumReport r;
    r.method = "dense";
    for (int i = 0; i < k; ++i) {
        r.eigenvalues.push_back(es.eigenvalues()(i));
        const auto col = es.eigenvectors().col(i);
        r.eigenvectors.emplace_back(g, std::vector<double>(col.data(), col.data() + N));
        const RealField Lx = L.apply(r.eigenvectors.back());
        RealField res = Lx - r.eigenvalues.back() * r.eigenvectors.back();
        r.residuals.push_back(l2_norm(res) / l2_norm(r.eigenvectors.back()));
    }
    finish_report(r, L);
    return r;
}

SimplicityResult kernel_simplicity_check(const SpectrumReport& report, double tol_zero) {
    if (report.eigenvalues.size() < 3) throw InvalidArgument("simplicity check needs at least three eigenvalues");
    if (!(tol_zero > 0.0)) throw InvalidArgument("tol_zero must be positive");
    SimplicityResult s;
    s.tol_zero = tol_zero;
    bool have_next = false;
    for (double l : report.eigenvalues) {
        if (std::abs(l) < tol_zero) {
            ++s.zero_count;
        } else if (!have_next) {
            s.next = l;
            have_next = true;
        }
    }
    s.simple = s.zero_count == 1 && have_next && s.next >= 10.0 * tol_zero &&
               report.edge_estimate >= 10.0 * tol_zero;
    return s;
}

MaximalPrincipleVerdict maximal_principle_probe(const RealField& f, const SymbolSpec& symbol) {
    const RealField Lf = apply_operator(f, symbol);
    const auto vals = f.values();
    const auto imax = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    const auto imin = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    MaximalPrincipleVerdict v;
    v.at_max = Lf[imax];
    v.at_min = Lf[imin];
    v.scale = Lf.max_abs() > 0.0 ? Lf.max_abs() : 1.0;
    v.pass = v.at_max >= -1e-10 * v.scale && v.at_min <= 1e-10 * v.scale;
    return v;
}

}  // namespace pnlayer
