#pragma once

// Shared machinery for the n-fold product-difference integrals
//   I_n = \int_{[-pi,pi]^n} | q1 prod_k p_{g1}(t_k) - q2 prod_k p_{g2}(t_k) | dt
// evaluated three ways: nested root-isolated quadrature (n <= 3), a mixture
// Monte Carlo estimator (any n), and, for n = 1, the plain periodic rule.

#include "dephdisc/dephasing.hpp"
#include "dephdisc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dephdisc::product_integrals {

using dephasing::WrappedNormalSymbol;
using numerics::kPi;

/// Both densities pre-evaluated on a fixed uniform scan grid, so the sign
/// structure of a p1 - b p2 can be read off without fresh evaluations.
class DiffSymbolScan {
public:
    DiffSymbolScan(WrappedNormalSymbol s1, WrappedNormalSymbol s2, int scan_points = 4096)
        : s1_(s1), s2_(s2), scan_points_(scan_points) {
        grid_.resize(scan_points_ + 1);
        p1v_.resize(scan_points_ + 1);
        p2v_.resize(scan_points_ + 1);
        for (int i = 0; i <= scan_points_; ++i) {
            grid_[i] = -kPi + 2.0 * kPi * i / scan_points_;
            p1v_[i] = dephasing::wrapped_pdf(s1_, grid_[i]);
            p2v_[i] = dephasing::wrapped_pdf(s2_, grid_[i]);
        }
    }

    double p1(double theta) const { return dephasing::wrapped_pdf(s1_, theta); }
    double p2(double theta) const { return dephasing::wrapped_pdf(s2_, theta); }
    const WrappedNormalSymbol& symbol1() const { return s1_; }
    const WrappedNormalSymbol& symbol2() const { return s2_; }

    /// Integral of |a p1 - b p2| over [-pi, pi] for weights a, b >= 0.
    /// Uses the identity  int |h| = (a - b) - 2 int_{h<0} h , so quadrature
    /// only runs over the sign-isolated negative segments.
    double integrate_abs_weighted(double a, double b, double tol = 1e-9) const {
        if (a == 0.0 && b == 0.0) return 0.0;
        if (a == 0.0) return b;
        if (b == 0.0) return a;

        auto h = [&](double th) { return a * p1(th) - b * p2(th); };

        // Sign-change brackets from the precomputed scan.
        std::vector<double> cuts;
        cuts.push_back(-kPi);
        double prev = a * p1v_[0] - b * p2v_[0];
        for (int i = 1; i <= scan_points_; ++i) {
            const double cur = a * p1v_[i] - b * p2v_[i];
            if ((prev < 0.0) != (cur < 0.0)) {
                double lo = grid_[i - 1], hi = grid_[i];
                double hlo = prev;
                for (int it = 0; it < 60 && (hi - lo) > 1e-15; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double hm = h(mid);
                    if ((hm < 0.0) == (hlo < 0.0)) {
                        lo = mid;
                        hlo = hm;
                    } else {
                        hi = mid;
                    }
                }
                cuts.push_back(0.5 * (lo + hi));
            }
            prev = cur;
        }
        cuts.push_back(kPi);

        if (cuts.size() == 2) return std::abs(a - b);  // one-signed: exact

        double negative_part = 0.0;  // integral of h over {h < 0}
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
            if (h(mid) < 0.0)
                negative_part += adaptive_gauss(h, cuts[s], cuts[s + 1], tol / (cuts.size() - 1));
        }
        return (a - b) - 2.0 * negative_part;
    }

private:
    template <typename F>
    static double adaptive_gauss(F&& f, double lo, double hi, double tol) {
        struct Panel {
            double a, b, whole;
        };
        std::vector<Panel> stack{{lo, hi, numerics::detail::gauss_panel(f, lo, hi)}};
        double total = 0.0;
        int budget = 400;
        while (!stack.empty()) {
            Panel p = stack.back();
            stack.pop_back();
            const double m = 0.5 * (p.a + p.b);
            const double left = numerics::detail::gauss_panel(f, p.a, m);
            const double right = numerics::detail::gauss_panel(f, m, p.b);
            if (std::abs(left + right - p.whole) <= tol * std::max(1e-3, (p.b - p.a) / (hi - lo)) ||
                (p.b - p.a) < 1e-13 || budget <= 0) {
                total += left + right;
                continue;
            }
            budget -= 2;
            stack.push_back({p.a, m, left});
            stack.push_back({m, p.b, right});
        }
        return total;
    }

    WrappedNormalSymbol s1_, s2_;
    int scan_points_;
    std::vector<double> grid_, p1v_, p2v_;
};

struct ProductIntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Nested quadrature for I_n, n <= 3. n = 1 is the root-isolated rule; n = 2
/// adds an adaptive outer pass; n = 3 an outer tensor grid evaluated at two
/// resolutions whose difference is reported as the error estimate.
inline ProductIntegralResult integrate_product_difference(const DiffSymbolScan& scan, double q1,
                                                          double q2, int n,
                                                          double inner_tol = 1e-9) {
    if (n < 1) throw numerics::ValidationError("integrate_product_difference: n must be >= 1");
    if (n > 3)
        throw numerics::ValidationError(
            "integrate_product_difference: tensor quadrature supports n <= 3 (use the MC estimator)");

    if (n == 1) {
        return {scan.integrate_abs_weighted(q1, q2, inner_tol), inner_tol};
    }
    if (n == 2) {
        const numerics::QuadratureSpec outer{1e-7, 4000, {}};
        const double v = numerics::integrate_periodic(
            [&](double t1) {
                return scan.integrate_abs_weighted(q1 * scan.p1(t1), q2 * scan.p2(t1), inner_tol);
            },
            outer);
        return {v, outer.abs_tol + 10.0 * inner_tol};
    }

    auto grid_value = [&](int panels, int order) {
        const numerics::detail::GaussRule rule = numerics::detail::make_gauss_rule(order);
        const double h = 2.0 * kPi / panels;
        std::vector<double> nodes, weights, pv1, pv2;
        for (int p = 0; p < panels; ++p) {
            const double a = -kPi + p * h;
            for (int i = 0; i < order; ++i) {
                const double x = a + 0.5 * h * (rule.nodes[i] + 1.0);
                nodes.push_back(x);
                weights.push_back(0.5 * h * rule.weights[i]);
                pv1.push_back(scan.p1(x));
                pv2.push_back(scan.p2(x));
            }
        }
        double total = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                const double inner = scan.integrate_abs_weighted(q1 * pv1[i] * pv1[j],
                                                                 q2 * pv2[i] * pv2[j], 1e-8);
                total += weights[i] * weights[j] * inner;
            }
        }
        return total;
    };
    const double coarse = grid_value(10, 10);
    const double fine = grid_value(16, 10);
    return {fine, std::abs(fine - coarse)};
}

// ---------------------------------------------------------------------------
// Mixture Monte Carlo estimator

/// Inverse-CDF sampler for the wrapped normal, tabulated on a 2^14-point
/// uniform grid using the analytic CDF
///   C(t) = (t + pi)/(2 pi) + (1/pi) sum_k e^{-g k^2/2} sin(k t)/k.
class WrappedNormalSampler {
public:
    explicit WrappedNormalSampler(WrappedNormalSymbol symbol, int table_points = 1 << 14)
        : symbol_(symbol) {
        symbol_.validate();
        if (symbol_.gamma <= 0.0)
            throw std::domain_error("WrappedNormalSampler: gamma must be > 0");
        grid_.resize(table_points + 1);
        cdf_.resize(table_points + 1);
        for (int i = 0; i <= table_points; ++i) {
            const double t = -kPi + 2.0 * kPi * i / table_points;
            grid_[i] = t;
            double s = 0.0;
            for (int k = 1;; ++k) {
                const double c = std::exp(-0.5 * symbol_.gamma * k * k);
                if (c < 1e-18) break;
                s += c * std::sin(k * t) / k;
            }
            cdf_[i] = (t + kPi) / (2.0 * kPi) + s / kPi;
        }
        cdf_.front() = 0.0;
        cdf_.back() = 1.0;
    }

    double draw(numerics::Rng& rng) const {
        const double u = numerics::uniform01(rng);
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const std::size_t hi = std::min<std::size_t>(cdf_.size() - 1,
                                                     static_cast<std::size_t>(it - cdf_.begin()));
        const std::size_t lo = hi == 0 ? 0 : hi - 1;
        const double span = cdf_[hi] - cdf_[lo];
        const double frac = span > 0.0 ? (u - cdf_[lo]) / span : 0.0;
        return grid_[lo] + frac * (grid_[hi] - grid_[lo]);
    }

private:
    WrappedNormalSymbol symbol_;
    std::vector<double> grid_, cdf_;
};

/// Monte Carlo estimate of I_n: draw theta from the (already normalized)
/// mixture q1 prod p1 + q2 prod p2, then average
///   |f - g| / (f + g) = tanh(|ln f - ln g| / 2),
/// a bounded integrand, evaluated in log space so long products cannot
/// underflow. Samples are processed in fixed-size chunks with child seeds so
/// a chunk-parallel run merges to bit-identical results.
inline numerics::McEstimate mc_product_difference(const WrappedNormalSymbol& s1,
                                                  const WrappedNormalSymbol& s2, double q1, double q2,
                                                  int n, std::int64_t samples, std::uint64_t seed) {
    if (n < 1) throw numerics::ValidationError("mc_product_difference: n must be >= 1");
    if (samples < 100) throw numerics::ValidationError("mc_product_difference: samples >= 100");
    const WrappedNormalSampler sampler1(s1);
    const WrappedNormalSampler sampler2(s2);
    const double log_q1 = std::log(q1 > 0.0 ? q1 : 1e-300);
    const double log_q2 = std::log(q2 > 0.0 ? q2 : 1e-300);

    constexpr std::int64_t kChunk = 65536;
    double mean = 0.0, m2 = 0.0;
    std::int64_t count = 0;
    std::uint64_t chunk_index = 0;
    while (count < samples) {
        const std::int64_t todo = std::min(kChunk, samples - count);
        numerics::Rng rng(numerics::derive_seed(seed, chunk_index++));
        double c_mean = 0.0, c_m2 = 0.0;
        for (std::int64_t i = 0; i < todo; ++i) {
            const bool first = numerics::uniform01(rng) < q1;
            double l1 = log_q1, l2 = log_q2;
            for (int k = 0; k < n; ++k) {
                const double t = first ? sampler1.draw(rng) : sampler2.draw(rng);
                l1 += std::log(dephasing::wrapped_pdf(s1, t));
                l2 += std::log(dephasing::wrapped_pdf(s2, t));
            }
            const double v = std::tanh(0.5 * std::abs(l1 - l2));
            const double delta = v - c_mean;
            c_mean += delta / static_cast<double>(i + 1);
            c_m2 += delta * (v - c_mean);
        }
        // Chan's parallel merge of (mean, M2, n) statistics.
        const double gap = c_mean - mean;
        const std::int64_t total = count + todo;
        m2 += c_m2 + gap * gap * static_cast<double>(count) * static_cast<double>(todo) /
                         static_cast<double>(total);
        mean += gap * static_cast<double>(todo) / static_cast<double>(total);
        count = total;
    }

    numerics::McEstimate est;
    est.value = mean;
    est.std_error = count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1) /
                                          static_cast<double>(count))
                              : 0.0;
    est.samples = count;
    est.seed = seed;
    return est;
}

}  // namespace dephdisc::product_integrals
