#pragma once

// Test-side oracles, independent of the library's computation paths: direct
// wrap-sums, dense trapezoid rules, dense grid scans, and explicit tensor
// constructions. Golden values frozen in the tests were produced by these.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracles {

inline constexpr double kPi = std::numbers::pi;

/// Wrapped normal density by direct wrap-sum with terms |k| <= wraps.
inline double wrap_sum_pdf(double gamma, double theta, int wraps = 10) {
    double sum = 0.0;
    for (int k = -wraps; k <= wraps; ++k) {
        const double u = theta + 2.0 * kPi * k;
        sum += std::exp(-u * u / (2.0 * gamma));
    }
    return sum / std::sqrt(2.0 * kPi * gamma);
}

/// Fourier-series evaluation of the same density.
inline double fourier_pdf(double gamma, double theta, int terms = 400) {
    double sum = 1.0;
    for (int k = 1; k <= terms; ++k)
        sum += 2.0 * std::exp(-0.5 * gamma * k * k) * std::cos(k * theta);
    return sum / (2.0 * kPi);
}

/// Uniform trapezoid rule over [-pi, pi].
template <typename F>
double trapezoid(F&& f, long points) {
    const double h = 2.0 * kPi / points;
    double sum = 0.5 * (f(-kPi) + f(kPi));
    for (long i = 1; i < points; ++i) sum += f(-kPi + h * i);
    return h * sum;
}

/// The integral of |q1 p_{g1} - q2 p_{g2}| by a 10^6-point trapezoid sum with
/// wrap terms |k| <= 10 (the frozen-value oracle for the exact optimum).
inline double abs_diff_integral(double gamma1, double gamma2, double q1, double q2,
                                long points = 1000000) {
    return trapezoid(
        [&](double th) {
            return std::abs(q1 * wrap_sum_pdf(gamma1, th) - q2 * wrap_sum_pdf(gamma2, th));
        },
        points);
}

/// 2-D trapezoid for the two-shot product-difference integral.
inline double abs_diff_integral_2d(double gamma1, double gamma2, double q1, double q2,
                                   long points = 1500) {
    const double h = 2.0 * kPi / points;
    std::vector<double> p1(points + 1), p2(points + 1), w(points + 1, 1.0);
    for (long i = 0; i <= points; ++i) {
        const double th = -kPi + h * i;
        p1[i] = wrap_sum_pdf(gamma1, th);
        p2[i] = wrap_sum_pdf(gamma2, th);
    }
    w.front() = w.back() = 0.5;
    double total = 0.0;
    for (long i = 0; i <= points; ++i) {
        double row = 0.0;
        for (long j = 0; j <= points; ++j)
            row += w[j] * std::abs(q1 * p1[i] * p1[j] - q2 * p2[i] * p2[j]);
        total += w[i] * row;
    }
    return total * h * h;
}

/// Rotation average of rho through the channel by the periodic trapezoid rule
/// (spectrally accurate for these smooth integrands); independent of the
/// library quadrature and of the Hadamard fast path.
inline Eigen::MatrixXcd rotation_average(double gamma, const Eigen::MatrixXcd& rho,
                                         long points = 4096) {
    const long dim = rho.rows();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    const double h = 2.0 * kPi / points;
    for (long i = 0; i < points; ++i) {  // periodic: endpoints coincide
        const double th = -kPi + h * i;
        const double p = wrap_sum_pdf(gamma, th);
        Eigen::VectorXcd u(dim);
        for (long k = 0; k < dim; ++k) u(k) = std::exp(std::complex<double>(0.0, k * th));
        out += p * (u.asDiagonal().toDenseMatrix().adjoint() * rho * u.asDiagonal());
    }
    return out * h;
}

/// Dense grid minimum of a scalar function on [a, b].
template <typename F>
std::pair<double, double> grid_min(F&& f, double a, double b, int points = 100001) {
    double best_x = a, best_v = f(a);
    for (int i = 1; i < points; ++i) {
        const double x = a + (b - a) * i / (points - 1);
        const double v = f(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return {best_x, best_v};
}

/// Chernoff quantity by dense grid scan with explicit 2x2 spectral powers.
inline double chernoff_grid(const Eigen::Matrix2d& rho, const Eigen::Matrix2d& sigma, double q1,
                            double q2, int points = 20001) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> e1(rho), e2(sigma);
    auto power = [](const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>& es, double s) {
        Eigen::Vector2d w = es.eigenvalues();
        for (int i = 0; i < 2; ++i) w(i) = std::pow(std::max(w(i), 1e-14), s);
        return Eigen::Matrix2d(es.eigenvectors() * w.asDiagonal() *
                               es.eigenvectors().transpose());
    };
    double best = 1e300;
    for (int i = 0; i < points; ++i) {
        const double s = static_cast<double>(i) / (points - 1);
        const double v =
            std::pow(q1, s) * std::pow(q2, 1.0 - s) * (power(e1, s) * power(e2, 1.0 - s)).trace();
        best = std::min(best, v);
    }
    return best;
}

/// Closed-form qubit-bound scan (the theorem's candidate maximization),
/// written directly from the formulas.
inline std::pair<double, int> qubit_bound_scan(double gamma1, double gamma2, double q1, double q2,
                                               double energy, int m_cap = 64) {
    double best = -1.0;
    int best_m = 1;
    const int hi = energy >= 0.5 ? std::max(1, static_cast<int>(std::floor(2.0 * energy))) : m_cap;
    for (int m = 1; m <= hi; ++m) {
        double v = std::abs(q1 * std::exp(-0.5 * gamma1 * m * m) -
                            q2 * std::exp(-0.5 * gamma2 * m * m));
        if (energy < 0.5) v *= 2.0 * std::sqrt((energy / m) * (1.0 - energy / m));
        if (v > best) {
            best = v;
            best_m = m;
        }
    }
    return {best, best_m};
}

}  // namespace oracles
