#include "elastica/interpolate.hpp"

#include <cmath>
#include <optional>
#include <numbers>

#include "elastica/calculus.hpp"

namespace elastica {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXd solve_tridiagonal(Eigen::VectorXd lower,
                                  Eigen::VectorXd diag,
                                  Eigen::VectorXd upper,
                                  Eigen::VectorXd rhs) {
    const Index n = diag.size();
    for (Index i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    Eigen::VectorXd x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (Index i = n - 2; i >= 0; --i)
        x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

}  // namespace

Eigen::VectorXd solve_cyclic_tridiagonal(const Eigen::VectorXd& lower,
                                         const Eigen::VectorXd& diag,
                                         const Eigen::VectorXd& upper,
                                         const Eigen::VectorXd& rhs) {
    const Index n = diag.size();
    if (n < 3) throw Error("solve_cyclic_tridiagonal: system too small");
    // Sherman-Morrison: A = T + u v^T with the corner entries
    // A(0, n-1) = lower[0] and A(n-1, 0) = upper[n-1] carried by
    // u = gamma e0 + upper[n-1] e_{n-1}, v = e0 + (lower[0]/gamma) e_{n-1}.
    const double gamma = -diag[0];
    Eigen::VectorXd d = diag;
    d[0] -= gamma;
    d[n - 1] -= lower[0] * upper[n - 1] / gamma;
    Eigen::VectorXd low = lower, up = upper;
    low[0] = 0.0;
    up[n - 1] = 0.0;

    const Eigen::VectorXd y = solve_tridiagonal(low, d, up, rhs);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    u[0] = gamma;
    u[n - 1] = upper[n - 1];
    const Eigen::VectorXd z = solve_tridiagonal(low, d, up, u);
    const double vy = y[0] + lower[0] / gamma * y[n - 1];
    const double vz = z[0] + lower[0] / gamma * z[n - 1];
    return y - vy / (1.0 + vz) * z;
}

PeriodicSpline::PeriodicSpline(Eigen::VectorXd grid, Eigen::MatrixXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    const Index n = grid_.size();
    if (values_.cols() != n)
        throw GridMismatch("PeriodicSpline: grid/values mismatch");
    if (n < 4) throw Error("PeriodicSpline: needs at least 4 nodes");

    Eigen::VectorXd h(n);  // h[j] = gap from node j to node j+1 (cyclic)
    for (Index j = 0; j + 1 < n; ++j) h[j] = grid_[j + 1] - grid_[j];
    h[n - 1] = kTwoPi - grid_[n - 1] + grid_[0];

    Eigen::VectorXd lower(n), diag(n), upper(n);
    for (Index j = 0; j < n; ++j) {
        const double hm = h[(j + n - 1) % n];
        const double hp = h[j];
        lower[j] = hm / 6.0;
        diag[j] = (hm + hp) / 3.0;
        upper[j] = hp / 6.0;
    }
    moments_.resize(values_.rows(), n);
    for (Index r = 0; r < values_.rows(); ++r) {
        Eigen::VectorXd rhs(n);
        for (Index j = 0; j < n; ++j) {
            const Index jm = (j + n - 1) % n;
            const Index jp = (j + 1) % n;
            const double hm = h[jm];
            const double hp = h[j];
            rhs[j] = (values_(r, jp) - values_(r, j)) / hp -
                     (values_(r, j) - values_(r, jm)) / hm;
        }
        moments_.row(r) =
            solve_cyclic_tridiagonal(lower, diag, upper, rhs).transpose();
    }
}

Eigen::VectorXd PeriodicSpline::operator()(double x) const {
    const Index n = grid_.size();
    double xr = std::fmod(x - grid_[0], kTwoPi);
    if (xr < 0.0) xr += kTwoPi;
    xr += grid_[0];
    // cell index: last j with grid_[j] <= xr (cyclic tail cell otherwise)
    const auto it =
        std::upper_bound(grid_.data(), grid_.data() + n, xr);
    const Index j = std::max<Index>(0, it - grid_.data() - 1);
    const Index jp = (j + 1) % n;
    const double hj =
        (j + 1 < n) ? grid_[j + 1] - grid_[j] : kTwoPi - grid_[n - 1] + grid_[0];
    const double a = (j + 1 < n ? grid_[j + 1] : grid_[0] + kTwoPi) - xr;
    const double b = xr - grid_[j];
    Eigen::VectorXd out(values_.rows());
    for (Index r = 0; r < values_.rows(); ++r) {
        const double mj = moments_(r, j);
        const double mjp = moments_(r, jp);
        out[r] = mj * a * a * a / (6.0 * hj) + mjp * b * b * b / (6.0 * hj) +
                 (values_(r, j) / hj - mj * hj / 6.0) * a +
                 (values_(r, jp) / hj - mjp * hj / 6.0) * b;
    }
    return out;
}

Eigen::VectorXd PeriodicSpline::derivative(double x) const {
    const Index n = grid_.size();
    double xr = std::fmod(x - grid_[0], kTwoPi);
    if (xr < 0.0) xr += kTwoPi;
    xr += grid_[0];
    const auto it =
        std::upper_bound(grid_.data(), grid_.data() + n, xr);
    const Index j = std::max<Index>(0, it - grid_.data() - 1);
    const Index jp = (j + 1) % n;
    const double hj =
        (j + 1 < n) ? grid_[j + 1] - grid_[j] : kTwoPi - grid_[n - 1] + grid_[0];
    const double a = (j + 1 < n ? grid_[j + 1] : grid_[0] + kTwoPi) - xr;
    const double b = xr - grid_[j];
    Eigen::VectorXd out(values_.rows());
    for (Index r = 0; r < values_.rows(); ++r) {
        const double mj = moments_(r, j);
        const double mjp = moments_(r, jp);
        out[r] = -mj * a * a / (2.0 * hj) + mjp * b * b / (2.0 * hj) +
                 (values_(r, jp) - values_(r, j)) / hj -
                 (mjp - mj) * hj / 6.0;
    }
    return out;
}

Eigen::MatrixXd PeriodicSpline::operator()(const Eigen::VectorXd& xs) const {
    Eigen::MatrixXd out(values_.rows(), xs.size());
    for (Index j = 0; j < xs.size(); ++j) out.col(j) = (*this)(xs[j]);
    return out;
}

NaturalSpline::NaturalSpline(Eigen::VectorXd grid, Eigen::MatrixXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    const Index n = grid_.size();
    if (values_.cols() != n)
        throw GridMismatch("NaturalSpline: grid/values mismatch");
    if (n < 4) throw Error("NaturalSpline: needs at least 4 nodes");
    moments_ = Eigen::MatrixXd::Zero(values_.rows(), n);
    Eigen::VectorXd lower(n - 2), diag(n - 2), upper(n - 2);
    for (Index j = 1; j + 1 < n; ++j) {
        const double hm = grid_[j] - grid_[j - 1];
        const double hp = grid_[j + 1] - grid_[j];
        lower[j - 1] = hm / 6.0;
        diag[j - 1] = (hm + hp) / 3.0;
        upper[j - 1] = hp / 6.0;
    }
    for (Index r = 0; r < values_.rows(); ++r) {
        Eigen::VectorXd rhs(n - 2);
        for (Index j = 1; j + 1 < n; ++j) {
            const double hm = grid_[j] - grid_[j - 1];
            const double hp = grid_[j + 1] - grid_[j];
            rhs[j - 1] = (values_(r, j + 1) - values_(r, j)) / hp -
                         (values_(r, j) - values_(r, j - 1)) / hm;
        }
        Eigen::VectorXd low = lower, dg = diag, up = upper;
        moments_.row(r).segment(1, n - 2) =
            solve_tridiagonal(low, dg, up, rhs).transpose();
    }
}

Eigen::VectorXd NaturalSpline::operator()(double x) const {
    const Index n = grid_.size();
    const double xr = std::clamp(x, grid_[0], grid_[n - 1]);
    const auto it =
        std::upper_bound(grid_.data(), grid_.data() + n, xr);
    const Index j =
        std::clamp<Index>(it - grid_.data() - 1, 0, n - 2);
    const double hj = grid_[j + 1] - grid_[j];
    const double a = grid_[j + 1] - xr;
    const double b = xr - grid_[j];
    Eigen::VectorXd out(values_.rows());
    for (Index r = 0; r < values_.rows(); ++r) {
        const double mj = moments_(r, j);
        const double mjp = moments_(r, j + 1);
        out[r] = mj * a * a * a / (6.0 * hj) + mjp * b * b * b / (6.0 * hj) +
                 (values_(r, j) / hj - mj * hj / 6.0) * a +
                 (values_(r, j + 1) / hj - mjp * hj / 6.0) * b;
    }
    return out;
}

Eigen::MatrixXd NaturalSpline::operator()(const Eigen::VectorXd& xs) const {
    Eigen::MatrixXd out(values_.rows(), xs.size());
    for (Index j = 0; j < xs.size(); ++j) out.col(j) = (*this)(xs[j]);
    return out;
}

namespace {

Eigen::Matrix2Xd linear_resample(const DiscreteCurve& c,
                                 const Eigen::VectorXd& new_grid) {
    const Index n = c.size();
    Eigen::Matrix2Xd out(2, new_grid.size());
    for (Index j = 0; j < new_grid.size(); ++j) {
        double x = new_grid[j];
        if (c.closed()) {
            x = std::fmod(x - c.grid[0], kTwoPi);
            if (x < 0.0) x += kTwoPi;
            x += c.grid[0];
        } else {
            x = std::clamp(x, c.grid[0], c.grid[n - 1]);
        }
        const auto it =
            std::upper_bound(c.grid.data(), c.grid.data() + n, x);
        Index i = std::clamp<Index>(it - c.grid.data() - 1, 0,
                                    c.closed() ? n - 1 : n - 2);
        const Index ip = (i + 1) % n;
        const double gap = (i + 1 < n)
                               ? c.grid[i + 1] - c.grid[i]
                               : kTwoPi - c.grid[n - 1] + c.grid[0];
        const double t = (x - c.grid[i]) / gap;
        out.col(j) = (1.0 - t) * c.points.col(i) + t * c.points.col(ip);
    }
    return out;
}

}  // namespace

DiscreteCurve resample_curve(const DiscreteCurve& c,
                             const Eigen::VectorXd& new_grid, bool linear) {
    Eigen::Matrix2Xd pts;
    if (linear) {
        pts = linear_resample(c, new_grid);
    } else if (c.closed()) {
        pts = PeriodicSpline(c.grid, c.points)(new_grid);
    } else {
        pts = NaturalSpline(c.grid, c.points)(new_grid);
    }
    return make_curve(std::move(pts), new_grid, c.topology);
}

DiscreteCurve arclength_resample(const DiscreteCurve& c, Index n) {
    if (n == 0) n = c.size();
    // cumulative arc length over a dense refinement of the polygon
    const int oversample = 16;
    const Index nn = c.size();
    const Index segments = c.closed() ? nn : nn - 1;
    std::vector<double> params, lengths;
    params.reserve(segments * oversample + 1);
    lengths.reserve(segments * oversample + 1);

    const bool closed = c.closed();
    std::optional<PeriodicSpline> ps;
    std::optional<NaturalSpline> ns;
    if (closed)
        ps.emplace(c.grid, Eigen::MatrixXd(c.points));
    else
        ns.emplace(c.grid, Eigen::MatrixXd(c.points));
    auto eval = [&](double t) { return closed ? (*ps)(t) : (*ns)(t); };

    double total = 0.0;
    params.push_back(c.grid[0]);
    lengths.push_back(0.0);
    Eigen::VectorXd prev = eval(c.grid[0]);
    for (Index s = 0; s < segments; ++s) {
        const double t0 = c.grid[s];
        const double t1 =
            (s + 1 < nn) ? c.grid[s + 1] : c.grid[0] + kTwoPi;
        for (int k = 1; k <= oversample; ++k) {
            const double t = t0 + (t1 - t0) * k / oversample;
            const Eigen::VectorXd here = eval(t);
            total += (here - prev).norm();
            params.push_back(t);
            lengths.push_back(total);
            prev = here;
        }
    }

    // invert the length function at equally spaced targets
    Eigen::VectorXd new_grid = uniform_grid(n, c.topology);
    Eigen::Matrix2Xd pts(2, n);
    Index cursor = 0;
    for (Index j = 0; j < n; ++j) {
        const double target = closed
                                  ? total * static_cast<double>(j) /
                                        static_cast<double>(n)
                                  : total * static_cast<double>(j) /
                                        static_cast<double>(n - 1);
        while (cursor + 1 < static_cast<Index>(lengths.size()) &&
               lengths[cursor + 1] < target)
            ++cursor;
        const double l0 = lengths[cursor];
        const double l1 = lengths[std::min<Index>(
            cursor + 1, lengths.size() - 1)];
        const double t0 = params[cursor];
        const double t1 =
            params[std::min<Index>(cursor + 1, params.size() - 1)];
        const double frac = (l1 > l0) ? (target - l0) / (l1 - l0) : 0.0;
        pts.col(j) = eval(t0 + frac * (t1 - t0));
    }
    return make_curve(std::move(pts), new_grid, c.topology);
}

}  // namespace elastica
