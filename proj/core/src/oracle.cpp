#include "dilation/certificate.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

namespace dilation {

namespace {

// cost[i][p][g]: residual contribution of index i with projection p and phase g
using CostTable = std::vector<std::array<std::vector<double>, 2>>;

struct Choice {
    double objective = std::numeric_limits<double>::infinity();
    unsigned mask = 0;
    std::vector<int> phase;
};

// Minimises max_i cost[i][p_i][g_i] (plus a mask penalty) over all masks and
// phase tuples whose indices sum to 0 mod grid. Strict improvement only, so
// the first optimum in enumeration order wins.
Choice best_choice(const CostTable& cost, int grid, const std::vector<double>& mask_penalty) {
    const int n = static_cast<int>(cost.size());
    Choice best;
    std::vector<int> g(n, 0);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const double base = mask_penalty[mask];
        if (base >= best.objective) continue;
        // depth-first over the first n-1 phases, last phase determined
        std::vector<double> running(n + 1, base);
        std::vector<int> partial(n + 1, 0);
        int level = 0;
        g.assign(n, -1);
        while (level >= 0) {
            if (level == n - 1) {
                const int last = ((grid - partial[level]) % grid + grid) % grid;
                const double v = std::max(running[level], cost[level][(mask >> level) & 1u][last]);
                if (v < best.objective) {
                    best.objective = v;
                    best.mask = mask;
                    best.phase.assign(g.begin(), g.end());
                    best.phase[level] = last;
                }
                --level;
                continue;
            }
            ++g[level];
            if (g[level] >= grid) {
                g[level] = -1;
                --level;
                continue;
            }
            const double v = std::max(running[level], cost[level][(mask >> level) & 1u][g[level]]);
            if (v >= best.objective) continue;
            running[level + 1] = v;
            partial[level + 1] = (partial[level] + g[level]) % grid;
            ++level;
            if (level < n - 1) g[level] = -1;
        }
    }
    return best;
}

cplx grid_phase(int g, int grid) { return std::polar(1.0, 2.0 * std::numbers::pi * g / grid); }

bool is_diagonal(const CMatrix& a, double tol) {
    CMatrix off = a;
    off.diagonal().setZero();
    return off.norm() <= tol;
}

OracleCandidate finish(const ContractionTuple& tuple, const DefectData& defects, Certificate cert,
                       double objective, Mode mode, const Tolerances& tol) {
    OracleCandidate c;
    c.objective = objective;
    c.report = check_conditions(tuple, defects, cert, mode, tol);
    c.certificate = std::move(cert);
    c.found = c.report.pass;
    return c;
}

std::vector<double> mask_penalties(int n, bool full) {
    std::vector<double> pen(1u << n, 0.0);
    if (!full) return pen;
    for (unsigned mask = 0; mask < (1u << n); ++mask) pen[mask] = std::abs(std::popcount(mask) - 1.0);
    return pen;
}

}  // namespace

OracleResult certificate_oracle_search(const ContractionTuple& tuple, const DefectData& defects, int grid,
                                       const Tolerances& tol) {
    if (grid < 1) throw Error(ErrorCode::BadParams, "oracle grid must be positive");
    const int n = static_cast<int>(tuple.n());
    const Index d = tuple.dim();
    const Index r = defects.rank();
    const double space = std::pow(2.0, n) * std::pow(static_cast<double>(grid), n - 1);
    if (n > 16 || space > 5e7) throw Error(ErrorCode::Unsupported, "oracle search space too large");

    OracleResult out;
    if (r == 0) {
        Certificate empty = make_certificate(std::vector<CMatrix>(n, CMatrix(0, 0)),
                                             std::vector<CMatrix>(n, CMatrix(0, 0)));
        out.full = finish(tuple, defects, empty, 0.0, Mode::Full, tol);
        out.relaxed = finish(tuple, defects, empty, 0.0, Mode::Relaxed, tol);
        return out;
    }

    if (r == 1) {
        const CMatrix onto = defects.dt.onto();
        const CMatrix& bvec = defects.dt.basis;
        const double lam2 = defects.dt.spectrum(0) * defects.dt.spectrum(0);
        CostTable cost(n);
        for (int i = 0; i < n; ++i) {
            const CMatrix& ti = tuple.factors[i];
            const CMatrix lhs = onto * ti;
            const CMatrix shifted = onto * tuple.product;
            for (int p = 0; p < 2; ++p) {
                const double r4 = op_norm(lam2 * p * bvec * bvec.adjoint() - defect_square(ti));
                cost[i][p].resize(grid);
                for (int g = 0; g < grid; ++g) {
                    const cplx ub = std::conj(grid_phase(g, grid));
                    const CMatrix rhs = (1.0 - p) * ub * onto + static_cast<double>(p) * ub * shifted;
                    cost[i][p][g] = std::max(op_norm(lhs - rhs), r4);
                }
            }
        }
        for (Mode mode : {Mode::Full, Mode::Relaxed}) {
            Choice ch = best_choice(cost, grid, mask_penalties(n, mode == Mode::Full));
            std::vector<CMatrix> u, p;
            for (int i = 0; i < n; ++i) {
                u.push_back(CMatrix::Constant(1, 1, grid_phase(ch.phase[i], grid)));
                p.push_back(CMatrix::Constant(1, 1, cplx(static_cast<double>((ch.mask >> i) & 1u), 0.0)));
            }
            auto cand = finish(tuple, defects, make_certificate(u, p), ch.objective, mode, tol);
            (mode == Mode::Full ? out.full : out.relaxed) = std::move(cand);
        }
        return out;
    }

    bool diagonal = (r == d);
    for (const auto& f : tuple.factors) diagonal = diagonal && is_diagonal(f, tol.check_tol);
    if (!diagonal)
        throw Error(ErrorCode::Unsupported,
                    "oracle search needs defect rank <= 1 or simultaneously diagonal factors with full defect");

    // coordinates decouple: search each one separately, objective is the worst coordinate
    for (Mode mode : {Mode::Full, Mode::Relaxed}) {
        std::vector<CMatrix> u(n, CMatrix::Zero(d, d)), p(n, CMatrix::Zero(d, d));
        double objective = 0.0;
        const auto pen = mask_penalties(n, mode == Mode::Full);
        for (Index c = 0; c < d; ++c) {
            const cplx t = tuple.product(c, c);
            const double dc = std::sqrt(std::max(0.0, 1.0 - std::norm(t)));
            CostTable cost(n);
            for (int i = 0; i < n; ++i) {
                const cplx a = tuple.factors[i](c, c);
                for (int pp = 0; pp < 2; ++pp) {
                    const double r4 = std::abs(dc * dc * pp - (1.0 - std::norm(a)));
                    cost[i][pp].resize(grid);
                    for (int g = 0; g < grid; ++g) {
                        const cplx ub = std::conj(grid_phase(g, grid));
                        const double r1 = std::abs(dc * a - (1.0 - pp) * ub * dc - static_cast<double>(pp) * ub * dc * t);
                        cost[i][pp][g] = std::max(r1, r4);
                    }
                }
            }
            Choice ch = best_choice(cost, grid, pen);
            objective = std::max(objective, ch.objective);
            for (int i = 0; i < n; ++i) {
                u[i](c, c) = grid_phase(ch.phase[i], grid);
                p[i](c, c) = static_cast<double>((ch.mask >> i) & 1u);
            }
        }
        auto cand = finish(tuple, defects, compress_certificate(u, p, defects.dt.basis), objective, mode, tol);
        (mode == Mode::Full ? out.full : out.relaxed) = std::move(cand);
    }
    return out;
}

}  // namespace dilation
