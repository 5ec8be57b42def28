#pragma once

// The bosonic dephasing channel at finite Fock truncation: wrapped-normal
// symbol, its analytic Fourier coefficients, finite Toeplitz sections, and
// channel application as a Hadamard (entry-wise) product. A rotation-average
// form computed by quadrature serves as an independent oracle.

#include "dephdisc/numerics.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dephdisc::dephasing {

using numerics::kPi;

/// Wrapped normal density on [-pi, pi] with variance parameter gamma.
/// Fourier coefficients are exp(-gamma k^2 / 2).
struct WrappedNormalSymbol {
    double gamma = 0.0;

    void validate() const {
        if (!(gamma >= 0.0)) throw numerics::ValidationError("WrappedNormalSymbol: gamma must be >= 0");
    }
};

/// Density value p_gamma(theta). Two series are used, each fast in its own
/// regime: the Gaussian wrap-sum for gamma < 1 and the Fourier cosine series
/// for gamma >= 1. gamma = 0 is a point mass and is rejected; callers branch
/// to the identity channel instead.
inline double wrapped_pdf(const WrappedNormalSymbol& symbol, double theta) {
    symbol.validate();
    const double gamma = symbol.gamma;
    if (gamma == 0.0)
        throw std::domain_error("wrapped_pdf: gamma = 0 is a delta distribution; "
                                "use the identity channel branch");
    if (gamma < 1.0) {
        constexpr double kLogInvEps = 36.85;  // ln(1e16)
        const int wraps = static_cast<int>(
            std::ceil((std::abs(theta) + std::sqrt(2.0 * gamma * kLogInvEps)) / (2.0 * kPi)));
        double sum = 0.0;
        for (int k = -wraps; k <= wraps; ++k) {
            const double u = theta + 2.0 * kPi * k;
            sum += std::exp(-u * u / (2.0 * gamma));
        }
        return sum / std::sqrt(2.0 * kPi * gamma);
    }
    double sum = 1.0;
    for (int k = 1;; ++k) {
        const double c = std::exp(-0.5 * gamma * k * k);
        if (c < 1e-16) break;
        sum += 2.0 * c * std::cos(k * theta);
    }
    return sum / (2.0 * kPi);
}

/// Closed-form Fourier coefficient exp(-gamma k^2 / 2) of p_gamma, i.e. the
/// Hadamard multiplier the channel applies to the |m><n| coherence with
/// k = m - n.
inline double fourier_coefficient(const WrappedNormalSymbol& symbol, long k) {
    symbol.validate();
    return std::exp(-0.5 * symbol.gamma * static_cast<double>(k) * static_cast<double>(k));
}

/// Finite section of a symmetric Toeplitz operator, stored by diagonal.
struct ToeplitzBlock {
    int dim = 0;
    std::vector<double> coefficients;  // t_k for k = 0..dim-1, t_{-k} = t_k

    double entry(int m, int n) const { return coefficients[static_cast<std::size_t>(std::abs(m - n))]; }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd t(dim, dim);
        for (int m = 0; m < dim; ++m)
            for (int n = 0; n < dim; ++n) t(m, n) = entry(m, n);
        return t;
    }
};

inline ToeplitzBlock toeplitz_block(const std::function<double(int)>& coeff_fn, int dim) {
    if (dim < 1) throw numerics::ValidationError("toeplitz_block: dim must be >= 1");
    ToeplitzBlock block;
    block.dim = dim;
    block.coefficients.resize(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) block.coefficients[static_cast<std::size_t>(k)] = coeff_fn(k);
    return block;
}

struct DephasingChannel {
    WrappedNormalSymbol symbol;
};

inline DephasingChannel make_channel(double gamma) { return DephasingChannel{{gamma}}; }

namespace detail {

/// Hadamard multiplier matrix for one mode: entries exp(-gamma (m-n)^2 / 2).
inline Eigen::MatrixXd damping_matrix(double gamma, int dim) {
    Eigen::MatrixXd d(dim, dim);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n)
            d(m, n) = std::exp(-0.5 * gamma * static_cast<double>(m - n) * static_cast<double>(m - n));
    return d;
}

}  // namespace detail

/// Channel action on a truncated Fock-basis matrix: rho_{mn} picks up the
/// factor exp(-gamma (m-n)^2 / 2). Diagonals (populations) are untouched, so
/// the trace is preserved exactly.
inline Eigen::MatrixXcd apply_channel(const DephasingChannel& channel, const Eigen::MatrixXcd& rho) {
    channel.symbol.validate();
    const int dim = static_cast<int>(rho.rows());
    if (channel.symbol.gamma == 0.0) return rho;
    return rho.cwiseProduct(detail::damping_matrix(channel.symbol.gamma, dim).cast<std::complex<double>>());
}

/// Rotation-average form of the channel, evaluated by quadrature:
/// integral of p_gamma(theta) U(theta)^dag rho U(theta) with U(theta) diagonal
/// e^{ik theta}. Independent of the Hadamard fast path; agreement within 1e-8
/// is a library contract.
inline Eigen::MatrixXcd apply_channel_rotation_oracle(const DephasingChannel& channel,
                                                      const Eigen::MatrixXcd& rho,
                                                      const numerics::QuadratureSpec& spec = {}) {
    channel.symbol.validate();
    if (channel.symbol.gamma == 0.0) return rho;
    const int dim = static_cast<int>(rho.rows());
    Eigen::MatrixXcd out(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            // (U^dag rho U)_{mn} = e^{-i(m-n)theta} rho_{mn}
            const int k = m - n;
            const std::complex<double> rmn = rho(m, n);
            const double re = numerics::integrate_periodic(
                [&](double th) { return wrapped_pdf(channel.symbol, th) *
                                        (rmn * std::exp(std::complex<double>(0.0, -k * th))).real(); },
                spec);
            const double im = numerics::integrate_periodic(
                [&](double th) { return wrapped_pdf(channel.symbol, th) *
                                        (rmn * std::exp(std::complex<double>(0.0, -k * th))).imag(); },
                spec);
            out(m, n) = {re, im};
        }
    }
    return out;
}

/// n-mode tensor power N^{\otimes n} on a product Fock basis with per-mode
/// dimension mode_dim. Flat index digits follow the Kronecker convention
/// (first mode most significant).
inline Eigen::MatrixXcd apply_tensor_channel(const DephasingChannel& channel,
                                             const Eigen::MatrixXcd& rho, int modes, int mode_dim) {
    channel.symbol.validate();
    if (modes < 1 || mode_dim < 1)
        throw numerics::ValidationError("apply_tensor_channel: modes and mode_dim must be >= 1");
    long expected = 1;
    for (int j = 0; j < modes; ++j) expected *= mode_dim;
    if (rho.rows() != expected || rho.cols() != expected)
        throw numerics::ValidationError("apply_tensor_channel: matrix size does not match mode_dim^modes");
    if (channel.symbol.gamma == 0.0) return rho;

    const double g = channel.symbol.gamma;
    Eigen::MatrixXcd out = rho;
    std::vector<int> rd(static_cast<std::size_t>(modes)), cd(static_cast<std::size_t>(modes));
    for (long r = 0; r < expected; ++r) {
        long x = r;
        for (int j = modes - 1; j >= 0; --j) {
            rd[static_cast<std::size_t>(j)] = static_cast<int>(x % mode_dim);
            x /= mode_dim;
        }
        for (long c = 0; c < expected; ++c) {
            long y = c;
            double s = 0.0;
            for (int j = modes - 1; j >= 0; --j) {
                cd[static_cast<std::size_t>(j)] = static_cast<int>(y % mode_dim);
                y /= mode_dim;
            }
            for (int j = 0; j < modes; ++j) {
                const double k = rd[static_cast<std::size_t>(j)] - cd[static_cast<std::size_t>(j)];
                s += k * k;
            }
            out(r, c) *= std::exp(-0.5 * g * s);
        }
    }
    return out;
}

/// Channel on one mode of a bipartite system (id on the other): only the
/// target mode's coherence difference enters the damping factor.
inline Eigen::MatrixXcd apply_channel_second_mode(const DephasingChannel& channel,
                                                  const Eigen::MatrixXcd& rho, int dim_a, int dim_b) {
    channel.symbol.validate();
    if (rho.rows() != static_cast<long>(dim_a) * dim_b)
        throw numerics::ValidationError("apply_channel_second_mode: size mismatch");
    if (channel.symbol.gamma == 0.0) return rho;
    const double g = channel.symbol.gamma;
    Eigen::MatrixXcd out = rho;
    for (long r = 0; r < rho.rows(); ++r) {
        const int rb = static_cast<int>(r % dim_b);
        for (long c = 0; c < rho.cols(); ++c) {
            const int cb = static_cast<int>(c % dim_b);
            const double k = rb - cb;
            out(r, c) *= std::exp(-0.5 * g * k * k);
        }
    }
    return out;
}

}  // namespace dephdisc::dephasing
