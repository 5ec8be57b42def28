#pragma once

// Closed-form and semi-closed discrimination quantities: the exact
// unconstrained optimum, the finite Szego sections converging to it, the
// energy-constrained qubit / projector / Frobenius lower bounds, the
// multi-shot exact value and bounds, the error-probability exponent, and the
// Chernoff quantity for rank-2 probes.

#include "dephdisc/discrimination.hpp"
#include "dephdisc/product_integrals.hpp"
#include "dephdisc/states.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace dephdisc::bounds {

using discrimination::DiscriminationProblem;
using states::EnergyBudget;
using states::QubitProbe;
using states::floor_2e;

enum class BoundKind {
    exact_unconstrained,
    qubit,
    projector,
    frobenius,
    multishot_exact,
    multishot_bound,
    perr_upper,
    chernoff,
};

inline const char* to_string(BoundKind kind) {
    switch (kind) {
        case BoundKind::exact_unconstrained: return "exact_unconstrained";
        case BoundKind::qubit: return "qubit";
        case BoundKind::projector: return "projector";
        case BoundKind::frobenius: return "frobenius";
        case BoundKind::multishot_exact: return "multishot_exact";
        case BoundKind::multishot_bound: return "multishot_bound";
        case BoundKind::perr_upper: return "perr_upper";
        case BoundKind::chernoff: return "chernoff";
    }
    return "unknown";
}

/// One computed bound/exact quantity plus the metadata needed to reproduce
/// and audit it.
struct BoundReport {
    BoundKind kind = BoundKind::exact_unconstrained;
    double value = 0.0;
    std::optional<int> argmax_m;
    std::optional<double> alpha;
    std::optional<double> estimator_error;
    std::optional<double> s_star;      // Chernoff minimizer
    std::optional<double> chernoff_q;  // Chernoff quantity Q at s_star
    bool regularized = false;          // eigenvalue floor applied (Chernoff)
    DiscriminationProblem problem;
    std::optional<double> energy;
    std::optional<int> shots;
};

struct ShotCount {
    int n = 1;

    void validate() const {
        if (n < 1) throw numerics::ValidationError("ShotCount: n must be >= 1");
    }
};

namespace detail {

inline void require_positive_rates(const DiscriminationProblem& problem) {
    if (!(problem.gamma1 > 0.0 && problem.gamma2 > 0.0))
        throw std::domain_error("bound requires gamma1, gamma2 > 0 (gamma = 0 is the identity channel)");
}

inline product_integrals::DiffSymbolScan make_scan(const DiscriminationProblem& problem) {
    return product_integrals::DiffSymbolScan({problem.gamma1}, {problem.gamma2});
}

/// |q1 e^{-m^2 g1/2} - q2 e^{-m^2 g2/2}| as a function of the probe level m.
inline double qubit_term(const DiscriminationProblem& problem, int m) {
    return std::abs(problem.diff_coefficient(m));
}

/// Closest integer to the interior extremum of the qubit term, when the
/// square-root argument is positive and finite; nullopt otherwise.
inline std::optional<int> qubit_extremum(const DiscriminationProblem& problem) {
    if (problem.q1 <= 0.0 || problem.q2 <= 0.0) return std::nullopt;
    const double num = std::log(problem.q1 * problem.gamma1) - std::log(problem.q2 * problem.gamma2);
    const double den = problem.gamma1 - problem.gamma2;
    if (den == 0.0) return std::nullopt;
    const double arg = 2.0 * num / den;
    if (!(arg > 0.0) || !std::isfinite(arg)) return std::nullopt;
    return static_cast<int>(std::lround(std::sqrt(arg)));
}

}  // namespace detail

/// Exact unconstrained optimum of ||Delta(rho)||_1:
/// integral over [-pi, pi] of |q1 p_{g1} - q2 p_{g2}|, by root-isolated
/// quadrature.
inline BoundReport exact_unconstrained(const DiscriminationProblem& problem, double abs_tol = 1e-9) {
    problem.validate();
    detail::require_positive_rates(problem);
    BoundReport report;
    report.kind = BoundKind::exact_unconstrained;
    report.problem = problem;
    report.value = detail::make_scan(problem).integrate_abs_weighted(problem.q1, problem.q2, abs_tol);
    report.estimator_error = abs_tol;
    return report;
}

/// (1/M) || P_M T(q1 p1 - q2 p2) P_M ||_1 : the achievable value of the flat
/// Toeplitz probe on M levels. Converges to exact_unconstrained as M grows.
inline double szego_section_value(const DiscriminationProblem& problem, int section) {
    problem.validate();
    if (section < 1) throw numerics::ValidationError("szego_section_value: M must be >= 1");
    const dephasing::ToeplitzBlock block = dephasing::toeplitz_block(
        [&](int k) { return problem.diff_coefficient(k); }, section);
    return numerics::trace_norm_symmetric(block.dense()) / section;
}

/// Qubit-probe lower bound. For E >= 1/2 every level m in [1, floor(2E)] is
/// scanned (a superset of the border/extremum candidate list, still a valid
/// bound); for E < 1/2 the off-diagonal weight 2 sqrt((E/m)(1 - E/m)) joins
/// the scan, capped at max(ceil(m_ext) + 2, 16).
inline BoundReport qubit_bound(const DiscriminationProblem& problem, const EnergyBudget& budget) {
    problem.validate();
    budget.validate();
    detail::require_positive_rates(problem);
    if (!(budget.E > 0.0)) throw std::domain_error("qubit_bound: requires E > 0");

    BoundReport report;
    report.kind = BoundKind::qubit;
    report.problem = problem;
    report.energy = budget.E;

    int m_hi;
    if (budget.E >= 0.5) {
        m_hi = std::max(1, floor_2e(budget.E));
    } else {
        const auto m_ext = detail::qubit_extremum(problem);
        m_hi = std::max(m_ext ? *m_ext + 2 : 0, 16);
    }
    double best = -1.0;
    int best_m = 1;
    for (int m = 1; m <= m_hi; ++m) {
        double score = detail::qubit_term(problem, m);
        if (budget.E < 0.5) {
            const double frac = budget.E / m;
            score *= 2.0 * std::sqrt(frac * (1.0 - frac));
        }
        if (score > best) {
            best = score;
            best_m = m;
        }
    }
    report.value = best;
    report.argmax_m = best_m;
    return report;
}

/// Flat-probe (projector) lower bound for E >= 1/2:
/// (1/(floor(2E)+1)) || P (q1 T1 - q2 T2) P ||_1 over floor(2E)+1 levels.
inline BoundReport projector_bound(const DiscriminationProblem& problem, const EnergyBudget& budget) {
    problem.validate();
    budget.validate();
    if (!(budget.E >= 0.5))
        throw std::domain_error("projector_bound: requires E >= 1/2 (use qubit_bound below that)");
    BoundReport report;
    report.kind = BoundKind::projector;
    report.problem = problem;
    report.energy = budget.E;
    report.value = szego_section_value(problem, floor_2e(budget.E) + 1);
    return report;
}

/// Frobenius relaxation of the projector bound, from the matrix-entry sum
/// over the full (floor(2E)+1)^2 section.
inline BoundReport frobenius_bound(const DiscriminationProblem& problem, const EnergyBudget& budget) {
    problem.validate();
    budget.validate();
    if (!(budget.E >= 0.5))
        throw std::domain_error("frobenius_bound: requires E >= 1/2 (use qubit_bound below that)");
    const int section = floor_2e(budget.E) + 1;
    double sum = 0.0;
    for (int k = 0; k < section; ++k) {
        const double d = problem.diff_coefficient(k);
        const double count = k == 0 ? section : 2.0 * (section - k);
        sum += count * d * d;
    }
    BoundReport report;
    report.kind = BoundKind::frobenius;
    report.problem = problem;
    report.energy = budget.E;
    report.value = std::sqrt(sum) / section;
    return report;
}

/// The literal second line printed for the Frobenius corollary, exposed for
/// comparison: it drops the k = 0 term and counts off-diagonals with weight
/// (floor(2E) - k) instead of 2(floor(2E) + 1 - k), so it differs from the
/// entry-sum value above.
inline double frobenius_second_line_value(const DiscriminationProblem& problem,
                                          const EnergyBudget& budget) {
    problem.validate();
    budget.validate();
    if (!(budget.E >= 0.5)) throw std::domain_error("frobenius_second_line_value: requires E >= 1/2");
    const int m_flat = floor_2e(budget.E);
    double sum = 0.0;
    for (int k = 1; k <= m_flat; ++k) {
        const double d = problem.diff_coefficient(k);
        sum += static_cast<double>(m_flat - k) * d * d;
    }
    return std::sqrt(sum) / (m_flat + 1);
}

enum class MultishotMethod { tensor_quadrature, mc_mixture };

/// Exact n-shot optimum (no energy constraint): the n-fold integral of
/// |q1 prod p1 - q2 prod p2|. Tensor quadrature up to n = 3; the mixture MC
/// estimator for any n, reporting its standard error.
inline BoundReport multishot_exact(const DiscriminationProblem& problem, const ShotCount& shots,
                                   MultishotMethod method = MultishotMethod::tensor_quadrature,
                                   std::int64_t samples = 1000000, std::uint64_t seed = 1) {
    problem.validate();
    shots.validate();
    detail::require_positive_rates(problem);
    BoundReport report;
    report.kind = BoundKind::multishot_exact;
    report.problem = problem;
    report.shots = shots.n;
    if (method == MultishotMethod::tensor_quadrature) {
        if (shots.n > 3)
            throw numerics::ValidationError(
                "multishot_exact: tensor quadrature budget is n <= 3; use mc_mixture");
        const auto result = product_integrals::integrate_product_difference(
            detail::make_scan(problem), problem.q1, problem.q2, shots.n);
        report.value = result.value;
        report.estimator_error = result.error_estimate;
    } else {
        const auto est = product_integrals::mc_product_difference(
            {problem.gamma1}, {problem.gamma2}, problem.q1, problem.q2, shots.n, samples, seed);
        report.value = est.value;
        report.estimator_error = est.std_error;
    }
    return report;
}

namespace detail {

/// alpha entering the n-shot bound: the squared one-shot quantity computed
/// with equal weights inside (as in the proof), while the prefactor keeps the
/// true priors. Returns {alpha, argmax_m or nullopt}.
inline std::pair<double, std::optional<int>> multishot_alpha(const DiscriminationProblem& problem,
                                                             const EnergyBudget& budget) {
    const DiscriminationProblem equal{problem.gamma1, problem.gamma2, 0.5, 0.5};
    if (budget.E >= 0.5) {
        const int section = floor_2e(budget.E) + 1;
        // section of T(p1) - T(p2) equals twice the equal-weight difference
        const double norm = 2.0 * szego_section_value(equal, section);
        double alpha = 0.25 * norm * norm;
        return {std::min(alpha, 1.0), std::nullopt};
    }
    const auto m_ext = qubit_extremum(equal);
    const int m_hi = std::max(m_ext ? *m_ext + 2 : 0, 16);
    double best = -1.0;
    int best_m = 1;
    for (int m = 1; m <= m_hi; ++m) {
        const double frac = budget.E / m;
        const double score = std::sqrt(frac * (1.0 - frac)) * 2.0 * qubit_term(equal, m);
        if (score > best) {
            best = score;
            best_m = m;
        }
    }
    return {std::min(best * best, 1.0), best_m};
}

}  // namespace detail

/// n-shot lower bound on the optimum: 1 - 2 sqrt(q1 q2) (1 - alpha)^{n/2},
/// with alpha from the energy-constrained one-shot quantity at equal weights.
inline BoundReport multishot_bound(const DiscriminationProblem& problem, const EnergyBudget& budget,
                                   const ShotCount& shots) {
    problem.validate();
    budget.validate();
    shots.validate();
    if (!(budget.E > 0.0)) throw std::domain_error("multishot_bound: requires E > 0");
    const auto [alpha, argmax] = detail::multishot_alpha(problem, budget);
    BoundReport report;
    report.kind = BoundKind::multishot_bound;
    report.problem = problem;
    report.energy = budget.E;
    report.shots = shots.n;
    report.alpha = alpha;
    report.argmax_m = argmax;
    report.value =
        1.0 - 2.0 * std::sqrt(problem.q1 * problem.q2) * std::pow(1.0 - alpha, 0.5 * shots.n);
    return report;
}

/// Error-probability upper bound (1/2)(1 - alpha)^{n/2}; its logarithm is
/// linear in n with slope ln sqrt(1 - alpha).
inline BoundReport perr_upper(const DiscriminationProblem& problem, const EnergyBudget& budget,
                              const ShotCount& shots) {
    problem.validate();
    budget.validate();
    shots.validate();
    if (!(budget.E > 0.0)) throw std::domain_error("perr_upper: requires E > 0");
    const auto [alpha, argmax] = detail::multishot_alpha(problem, budget);
    BoundReport report;
    report.kind = BoundKind::perr_upper;
    report.problem = problem;
    report.energy = budget.E;
    report.shots = shots.n;
    report.alpha = alpha;
    report.argmax_m = argmax;
    report.value = 0.5 * std::pow(1.0 - alpha, 0.5 * shots.n);
    return report;
}

/// Chernoff-style upper bound (1/2) exp(n ln Q) for a rank-2 probe on
/// span{|0>, |m>}. Both channel outputs live in that 2-dim subspace, so
/// Q = inf_s q1^s q2^{1-s} Tr(N1(rho)^s N2(rho)^{1-s}) reduces to 2x2
/// eigendecompositions plus a scalar minimization.
inline BoundReport chernoff_rank2(const DiscriminationProblem& problem, const QubitProbe& probe,
                                  const ShotCount& shots) {
    problem.validate();
    probe.validate();
    shots.validate();

    const double r0 = 1.0 - probe.r_m;
    const double off = std::sqrt(r0 * probe.r_m);
    const double mm = static_cast<double>(probe.m) * probe.m;
    BoundReport report;
    report.kind = BoundKind::chernoff;
    report.problem = problem;
    report.shots = shots.n;
    report.argmax_m = probe.m;

    Eigen::Matrix2d out1, out2;
    out1 << r0, off * std::exp(-0.5 * problem.gamma1 * mm), off * std::exp(-0.5 * problem.gamma1 * mm),
        probe.r_m;
    out2 << r0, off * std::exp(-0.5 * problem.gamma2 * mm), off * std::exp(-0.5 * problem.gamma2 * mm),
        probe.r_m;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es1(out1), es2(out2);
    Eigen::Vector2d w1 = es1.eigenvalues(), w2 = es2.eigenvalues();
    for (int i = 0; i < 2; ++i) {
        if (w1(i) < 1e-14) {
            w1(i) = 1e-14;
            report.regularized = true;
        }
        if (w2(i) < 1e-14) {
            w2(i) = 1e-14;
            report.regularized = true;
        }
    }
    // overlap(i, j) = <u1_i | u2_j>^2
    Eigen::Matrix2d overlap = (es1.eigenvectors().transpose() * es2.eigenvectors()).array().square();

    auto q_of_s = [&](double s) {
        double tr = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                tr += std::pow(w1(i), s) * std::pow(w2(j), 1.0 - s) * overlap(i, j);
        return std::pow(problem.q1, s) * std::pow(problem.q2, 1.0 - s) * tr;
    };
    const auto minimum = numerics::minimize_scalar(q_of_s, 0.0, 1.0, 1e-12);
    report.s_star = minimum.argmin;
    report.chernoff_q = minimum.min;
    report.value = 0.5 * std::exp(shots.n * std::log(minimum.min));
    return report;
}

}  // namespace dephdisc::bounds
