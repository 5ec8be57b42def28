#pragma once

// Math substrate: periodic quadrature with breakpoint handling, dense
// Hermitian eigenvalues (Eigen-backed), matrix norms, scalar minimization,
// seeded Monte Carlo estimation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dephdisc::numerics {

inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Errors

/// Quadrature ran out of subdivision budget; carries the best estimate found
/// and the unresolved residual.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(std::string what, double best_estimate, double residual)
        : std::runtime_error(std::move(what)),
          best_estimate_(best_estimate),
          residual_(residual) {}

    double best_estimate() const { return best_estimate_; }
    double residual() const { return residual_; }

private:
    double best_estimate_;
    double residual_;
};

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureSpec {
    double abs_tol = 1e-10;
    int max_subdivisions = 4000;
    std::vector<double> breakpoints;  // known non-smooth points in [-pi, pi]

    void validate() const {
        if (!(abs_tol > 0.0)) throw ValidationError("QuadratureSpec: abs_tol must be > 0");
        for (double b : breakpoints) {
            if (!(b >= -kPi && b <= kPi))
                throw ValidationError("QuadratureSpec: breakpoint outside [-pi, pi]");
        }
        if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
            throw ValidationError("QuadratureSpec: breakpoints must be sorted");
    }
};

namespace detail {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on P_n.
inline GaussRule make_gauss_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

inline const GaussRule& panel_rule() {
    static const GaussRule rule = make_gauss_rule(24);
    return rule;
}

template <typename F>
double gauss_panel(F&& f, double a, double b) {
    const GaussRule& rule = panel_rule();
    const double scale = 0.5 * (b - a);
    const double shift = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(scale * rule.nodes[i] + shift);
    return scale * sum;
}

}  // namespace detail

/// Integrate f over [-pi, pi]. Breakpoints in the spec split the domain so
/// each piece is smooth; pieces are then refined by bisecting panels until
/// the whole-vs-halves Gauss-Legendre discrepancy meets the tolerance.
/// Throws ConvergenceError when the subdivision budget runs out.
template <typename F>
double integrate_periodic(F&& f, const QuadratureSpec& spec = {}) {
    spec.validate();

    std::vector<double> edges;
    edges.push_back(-kPi);
    for (double b : spec.breakpoints) {
        if (b > edges.back() + 1e-15 && b < kPi - 1e-15) edges.push_back(b);
    }
    edges.push_back(kPi);

    struct Panel {
        double a, b, whole;
    };
    std::vector<Panel> stack;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        stack.push_back({edges[i], edges[i + 1], detail::gauss_panel(f, edges[i], edges[i + 1])});

    double total = 0.0;
    double residual = 0.0;
    int used = static_cast<int>(stack.size());
    const double tol_per_width = spec.abs_tol / (2.0 * kPi);

    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double m = 0.5 * (p.a + p.b);
        const double left = detail::gauss_panel(f, p.a, m);
        const double right = detail::gauss_panel(f, m, p.b);
        const double err = std::abs(left + right - p.whole);
        if (err <= tol_per_width * (p.b - p.a) || (p.b - p.a) < 1e-14) {
            total += left + right;
            residual += err;
            continue;
        }
        if (used + 2 > spec.max_subdivisions) {
            double best = total + left + right;
            for (const Panel& q : stack) best += q.whole;
            throw ConvergenceError("integrate_periodic: subdivision budget exhausted", best,
                                   residual + err);
        }
        used += 2;
        stack.push_back({p.a, m, left});
        stack.push_back({m, p.b, right});
    }
    return total;
}

/// Locate the sign changes of a smooth g on [-pi, pi]: scan on a uniform
/// grid, then bisect each bracketed change down to ~1e-15 width. Grid points
/// where g is exactly zero are returned as-is.
template <typename F>
std::vector<double> isolate_sign_changes(F&& g, int scan_points = 4096) {
    std::vector<double> roots;
    double x_prev = -kPi;
    double g_prev = g(x_prev);
    for (int i = 1; i <= scan_points; ++i) {
        const double x = -kPi + 2.0 * kPi * i / scan_points;
        const double gx = g(x);
        if (g_prev == 0.0) {
            roots.push_back(x_prev);
        } else if (gx != 0.0 && std::signbit(gx) != std::signbit(g_prev)) {
            double lo = x_prev, hi = x, glo = g_prev;
            for (int it = 0; it < 80 && (hi - lo) > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(mid);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(gm) == std::signbit(glo)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        x_prev = x;
        g_prev = gx;
    }
    return roots;
}

/// Integral of |g| over [-pi, pi] for smooth g: isolate the sign changes,
/// insert them as breakpoints, and integrate piecewise.
template <typename F>
double integrate_abs_periodic(F&& g, const QuadratureSpec& spec = {}, int scan_points = 4096) {
    QuadratureSpec with_roots = spec;
    auto roots = isolate_sign_changes(g, scan_points);
    with_roots.breakpoints.insert(with_roots.breakpoints.end(), roots.begin(), roots.end());
    std::sort(with_roots.breakpoints.begin(), with_roots.breakpoints.end());
    return integrate_periodic([&](double x) { return std::abs(g(x)); }, with_roots);
}

// ---------------------------------------------------------------------------
// Hermitian linear algebra

inline void ensure_hermitian(const Eigen::MatrixXcd& a, double rel_tol = 1e-10) {
    if (a.rows() != a.cols()) throw ValidationError("matrix is not square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (dev > rel_tol * scale)
        throw ValidationError("matrix is not Hermitian within tolerance (max deviation " +
                              std::to_string(dev) + ")");
}

/// Ascending real eigenvalues of a Hermitian matrix.
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a) {
    ensure_hermitian(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eigenvalues: eigensolver failed");
    return solver.eigenvalues();
}

inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw ValidationError("matrix is not square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("symmetric_eigenvalues: eigensolver failed");
    return solver.eigenvalues();
}

/// Trace norm of a Hermitian matrix: sum of |eigenvalues|.
inline double trace_norm(const Eigen::MatrixXcd& a) {
    return hermitian_eigenvalues(a).cwiseAbs().sum();
}

inline double trace_norm_symmetric(const Eigen::MatrixXd& a) {
    return symmetric_eigenvalues(a).cwiseAbs().sum();
}

inline double frobenius_norm(const Eigen::MatrixXcd& a) { return a.norm(); }

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& b) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                              a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> kron_power(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a, int n) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = a;
    for (int i = 1; i < n; ++i) out = kron<Scalar>(out, a);
    return out;
}

// ---------------------------------------------------------------------------
// Scalar minimization

struct ScalarMinimum {
    double argmin;
    double min;
};

/// Minimize g on [a, b]: scan a 1000-point grid, then golden-section refine
/// around the best grid point. Always returns the best value found.
template <typename F>
ScalarMinimum minimize_scalar(F&& g, double a, double b, double tol = 1e-10) {
    if (!(a < b)) throw ValidationError("minimize_scalar: need a < b");
    constexpr int kGrid = 1000;
    double best_x = a, best_v = g(a);
    for (int i = 1; i <= kGrid; ++i) {
        const double x = a + (b - a) * i / kGrid;
        const double v = g(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    double lo = std::max(a, best_x - (b - a) / kGrid);
    double hi = std::min(b, best_x + (b - a) / kGrid);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = g(x2);
        }
        if (f1 < best_v) {
            best_v = f1;
            best_x = x1;
        }
        if (f2 < best_v) {
            best_v = f2;
            best_x = x2;
        }
    }
    return {best_x, best_v};
}

// ---------------------------------------------------------------------------
// Seeded randomness

using Rng = std::mt19937_64;

/// Child-seed derivation: one 64-bit seed per top-level task, sub-tasks mix
/// in their index so parallel execution order cannot change the streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits of the generator.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on explicit uniform bits (keeps draws
/// bit-stable across standard library implementations).
inline double standard_normal(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 == 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Plain Monte Carlo mean of h over draws from `sampler`. `sampler(rng)`
/// produces a point, `h(point)` a finite real. std_error is sample-std/sqrt(N).
template <typename Sampler, typename H>
McEstimate mc_expectation(Sampler&& sampler, H&& h, std::int64_t samples, std::uint64_t seed) {
    if (samples < 100) throw ValidationError("mc_expectation: need samples >= 100");
    Rng rng(seed);
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const double v = h(sampler(rng));
        if (!std::isfinite(v))
            throw std::runtime_error("mc_expectation: non-finite integrand value at draw " +
                                     std::to_string(i));
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    McEstimate est;
    est.value = mean;
    est.std_error =
        samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples))
                    : 0.0;
    est.samples = samples;
    est.seed = seed;
    return est;
}

}  // namespace dephdisc::numerics
