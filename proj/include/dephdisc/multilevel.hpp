#pragma once

// Multilevel Toeplitz machinery: block-recursive construction from
// multi-index Fourier coefficients, the tensor-power-difference coefficient
// rule, and the averaged spectral functional whose large-M limit is the
// multidimensional symbol integral.

#include "dephdisc/numerics.hpp"
#include "dephdisc/product_integrals.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace dephdisc::multilevel {

inline constexpr long kMaxMatrixSize = 4096;  // dense-eigen desk-scale cap

/// Coefficients f_{k1..kn} of an n-level symbol, all levels sharing size M.
/// Level 1 is the fastest-varying index in the flattened matrix.
struct MultiIndexCoefficients {
    int levels = 1;
    int size = 1;  // per-level section size M
    std::function<double(const std::vector<int>&)> coeff;
};

struct MultilevelToeplitz {
    int levels = 1;
    int size = 1;
    Eigen::MatrixXd mat;  // size^levels, symmetric
};

/// Entry rule: [T]_{rc} = f(|i1-j1|, ..., |in-jn|) with r = sum_l i_l M^(l-1)
/// (level 1 fastest).
inline MultilevelToeplitz build_multilevel(const MultiIndexCoefficients& coeffs) {
    if (coeffs.levels < 1 || coeffs.size < 1)
        throw numerics::ValidationError("build_multilevel: levels and size must be >= 1");
    long total = 1;
    for (int l = 0; l < coeffs.levels; ++l) {
        total *= coeffs.size;
        if (total > kMaxMatrixSize)
            throw numerics::ValidationError("build_multilevel: M^n exceeds the size cap " +
                                            std::to_string(kMaxMatrixSize));
    }
    MultilevelToeplitz out;
    out.levels = coeffs.levels;
    out.size = coeffs.size;
    out.mat.resize(total, total);
    std::vector<int> ks(static_cast<std::size_t>(coeffs.levels));
    for (long r = 0; r < total; ++r) {
        for (long c = r; c < total; ++c) {
            long x = r, y = c;
            for (int l = 0; l < coeffs.levels; ++l) {
                ks[static_cast<std::size_t>(l)] =
                    std::abs(static_cast<int>(x % coeffs.size) - static_cast<int>(y % coeffs.size));
                x /= coeffs.size;
                y /= coeffs.size;
            }
            const double v = coeffs.coeff(ks);
            out.mat(r, c) = v;
            out.mat(c, r) = v;
        }
    }
    return out;
}

/// Coefficients generating T(t1)^{x n} - T(t2)^{x n}:
/// f_{k1..kn} = t1_{k1}...t1_{kn} - t2_{k1}...t2_{kn}.
inline MultiIndexCoefficients tensor_diff_coeffs(std::function<double(int)> t1,
                                                 std::function<double(int)> t2, int levels,
                                                 int size) {
    MultiIndexCoefficients coeffs;
    coeffs.levels = levels;
    coeffs.size = size;
    coeffs.coeff = [t1 = std::move(t1), t2 = std::move(t2)](const std::vector<int>& ks) {
        double a = 1.0, b = 1.0;
        for (int k : ks) {
            a *= t1(k);
            b *= t2(k);
        }
        return a - b;
    };
    return coeffs;
}

/// Weighted variant q1 T(t1)^{x n} - q2 T(t2)^{x n}.
inline MultiIndexCoefficients weighted_tensor_diff_coeffs(std::function<double(int)> t1,
                                                          std::function<double(int)> t2, double q1,
                                                          double q2, int levels, int size) {
    MultiIndexCoefficients coeffs;
    coeffs.levels = levels;
    coeffs.size = size;
    coeffs.coeff = [t1 = std::move(t1), t2 = std::move(t2), q1, q2](const std::vector<int>& ks) {
        double a = 1.0, b = 1.0;
        for (int k : ks) {
            a *= t1(k);
            b *= t2(k);
        }
        return q1 * a - q2 * b;
    };
    return coeffs;
}

/// Averaged spectral functional (1/M^n) sum_j F(lambda_j).
inline double szego_functional(const MultilevelToeplitz& toeplitz,
                               const std::function<double(double)>& f) {
    const Eigen::VectorXd ev = numerics::symmetric_eigenvalues(toeplitz.mat);
    double sum = 0.0;
    for (long j = 0; j < ev.size(); ++j) sum += f(ev(j));
    return sum / static_cast<double>(ev.size());
}

/// Large-M limit of the |.|-functional for the weighted dephasing-difference
/// symbol: the n-dimensional integral of |q1 prod p1 - q2 prod p2| (tensor
/// quadrature for n <= 3, mixture MC beyond).
inline double szego_limit(const dephasing::WrappedNormalSymbol& s1,
                          const dephasing::WrappedNormalSymbol& s2, double q1, double q2, int n,
                          std::int64_t mc_samples = 2000000, std::uint64_t seed = 1) {
    if (n <= 3) {
        const product_integrals::DiffSymbolScan scan(s1, s2);
        return product_integrals::integrate_product_difference(scan, q1, q2, n).value;
    }
    return product_integrals::mc_product_difference(s1, s2, q1, q2, n, mc_samples, seed).value;
}

}  // namespace dephdisc::multilevel
