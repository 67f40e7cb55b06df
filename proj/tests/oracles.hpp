#pragma once

// Brute-force reference computations used to derive expected values in the
// unit tests. Nothing here calls into the library's solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

// Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<Vec> solve_square(Mat a, Vec b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        if (std::abs(a[p][c]) < 1e-12) return std::nullopt;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

// Polytope {x : rows_le * x <= rhs_le, rows_eq * x = rhs_eq, x >= 0}.
struct Polytope {
    Mat le;
    Vec le_rhs;
    Mat eq;
    Vec eq_rhs;
    std::size_t dim = 0;

    bool contains(const Vec& x, double tol = 1e-9) const {
        for (double v : x)
            if (v < -tol) return false;
        for (std::size_t i = 0; i < le.size(); ++i) {
            double s = 0;
            for (std::size_t j = 0; j < dim; ++j) s += le[i][j] * x[j];
            if (s > le_rhs[i] + tol) return false;
        }
        for (std::size_t i = 0; i < eq.size(); ++i) {
            double s = 0;
            for (std::size_t j = 0; j < dim; ++j) s += eq[i][j] * x[j];
            if (std::abs(s - eq_rhs[i]) > tol) return false;
        }
        return true;
    }

    // Every vertex: choose `dim` tight constraints among inequality rows and
    // nonnegativity (equalities always tight), solve, keep feasible points.
    std::vector<Vec> vertices() const {
        Mat rows;
        Vec rhs;
        for (std::size_t i = 0; i < le.size(); ++i) {
            rows.push_back(le[i]);
            rhs.push_back(le_rhs[i]);
        }
        for (std::size_t j = 0; j < dim; ++j) {
            Vec e(dim, 0.0);
            e[j] = 1.0;
            rows.push_back(e);
            rhs.push_back(0.0);
        }
        const std::size_t need = dim - std::min(dim, eq.size());
        std::vector<Vec> out;
        std::vector<std::size_t> pick(need);
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t k) {
            if (k == need) {
                Mat a(eq);
                Vec b(eq_rhs);
                for (std::size_t r : pick) {
                    a.push_back(rows[r]);
                    b.push_back(rhs[r]);
                }
                if (a.size() != dim) return;
                if (auto x = solve_square(a, b); x && contains(*x)) out.push_back(*x);
                return;
            }
            for (std::size_t r = start; r < rows.size(); ++r) {
                pick[k] = r;
                rec(r + 1, k + 1);
            }
        };
        rec(0, 0);
        return out;
    }
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// AVaR by its dual: fill the density cap 1/(1-alpha) from the largest value down.
inline double avar_greedy(double alpha, const Vec& p, const Vec& z) {
    std::vector<std::size_t> order(z.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return z[a] > z[b]; });
    if (alpha >= 1.0) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i : order)
            if (p[i] > 0) m = std::max(m, z[i]);
        return m;
    }
    double left = 1.0, v = 0.0;
    for (std::size_t i : order) {
        const double q = std::min(left, p[i] / (1.0 - alpha));
        v += q * z[i];
        left -= q;
        if (left <= 0) break;
    }
    return v;
}

// AVaR by direct minimization over a dense tau grid refined at the data.
inline double avar_tau_grid(double alpha, const Vec& p, const Vec& z) {
    auto obj = [&](double tau) {
        double s = 0;
        for (std::size_t i = 0; i < z.size(); ++i) s += p[i] * std::max(z[i] - tau, 0.0);
        return tau + s / (1.0 - alpha);
    };
    double best = std::numeric_limits<double>::infinity();
    for (double t : z) best = std::min(best, obj(t));
    const double lo = *std::min_element(z.begin(), z.end()), hi = *std::max_element(z.begin(), z.end());
    for (int k = 0; k <= 2000; ++k) best = std::min(best, obj(lo + (hi - lo) * k / 2000.0));
    return best;
}

// W1 on the real line: integral of |F - G|.
inline double w1_line(const Vec& x, const Vec& p, const Vec& q) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    double fp = 0, fq = 0, w = 0;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        fp += p[order[k]];
        fq += q[order[k]];
        w += std::abs(fp - fq) * (x[order[k + 1]] - x[order[k]]);
    }
    return w;
}

}  // namespace oracle
