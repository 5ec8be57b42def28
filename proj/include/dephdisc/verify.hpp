#pragma once

// Executable property suites behind the `verify` subcommand: each check runs
// a randomized or deterministic invariant and reports its measured margin
// (positive means the invariant held with room to spare).

#include "dephdisc/bounds.hpp"
#include "dephdisc/discrimination.hpp"
#include "dephdisc/figures.hpp"
#include "dephdisc/multilevel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace dephdisc::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;     // measured slack against the threshold
    double threshold = 0.0;  // allowed violation
};

inline CheckResult make_check(std::string name, double worst_violation, double threshold) {
    CheckResult check;
    check.name = std::move(name);
    check.margin = threshold - worst_violation;
    check.threshold = threshold;
    check.pass = worst_violation <= threshold;
    return check;
}

/// Channel contract: trace preservation, positivity, multiplier-matrix
/// positivity, the semigroup law, and rotation-average oracle agreement.
inline std::vector<CheckResult> verify_channel(std::uint64_t seed) {
    std::vector<CheckResult> checks;
    numerics::Rng rng(numerics::derive_seed(seed, 0));

    double worst_trace = 0.0, worst_psd = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + static_cast<int>(numerics::uniform01(rng) * 31);
        const double gamma = 0.05 + 2.0 * numerics::uniform01(rng);
        const auto rho = states::random_mixed_state(dim, rng);
        const Eigen::MatrixXcd out = dephasing::apply_channel(dephasing::make_channel(gamma), rho.mat);
        worst_trace = std::max(worst_trace, std::abs(out.trace().real() - 1.0));
        worst_psd = std::max(worst_psd, -numerics::hermitian_eigenvalues(out)(0));
    }
    checks.push_back(make_check("trace_preservation", worst_trace, 1e-13));
    checks.push_back(make_check("output_positivity", worst_psd, 1e-10));

    double worst_multiplier = 0.0;
    for (double gamma : {0.1, 0.5, 1.0, 2.0}) {
        const auto block = dephasing::toeplitz_block(
            [&](int k) { return dephasing::fourier_coefficient({gamma}, k); }, 32);
        worst_multiplier =
            std::max(worst_multiplier, -numerics::symmetric_eigenvalues(block.dense())(0));
    }
    checks.push_back(make_check("multiplier_section_psd", worst_multiplier, 1e-10));

    double worst_semigroup = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + static_cast<int>(numerics::uniform01(rng) * 15);
        const double g1 = 0.05 + numerics::uniform01(rng);
        const double g2 = 0.05 + numerics::uniform01(rng);
        const auto rho = states::random_mixed_state(dim, rng);
        const Eigen::MatrixXcd two_step = dephasing::apply_channel(
            dephasing::make_channel(g2),
            dephasing::apply_channel(dephasing::make_channel(g1), rho.mat));
        const Eigen::MatrixXcd one_step =
            dephasing::apply_channel(dephasing::make_channel(g1 + g2), rho.mat);
        worst_semigroup =
            std::max(worst_semigroup, (two_step - one_step).cwiseAbs().maxCoeff());
    }
    checks.push_back(make_check("semigroup", worst_semigroup, 1e-12));

    double worst_oracle = 0.0;
    for (double gamma : {0.1, 0.5, 1.0, 2.0}) {
        const auto rho = states::random_mixed_state(6, rng);
        const auto channel = dephasing::make_channel(gamma);
        const Eigen::MatrixXcd fast = dephasing::apply_channel(channel, rho.mat);
        const Eigen::MatrixXcd slow = dephasing::apply_channel_rotation_oracle(channel, rho.mat);
        worst_oracle = std::max(worst_oracle, (fast - slow).cwiseAbs().maxCoeff());
    }
    checks.push_back(make_check("rotation_oracle_agreement", worst_oracle, 1e-8));

    double worst_norm = 0.0;
    for (double gamma : {0.1, 0.5, 1.0, 2.0, 50.0}) {
        const double total = numerics::integrate_periodic(
            [&](double th) { return dephasing::wrapped_pdf({gamma}, th); });
        worst_norm = std::max(worst_norm, std::abs(total - 1.0));
    }
    checks.push_back(make_check("pdf_normalization", worst_norm, 1e-10));
    return checks;
}

/// Bound structure: the ordering chain on an (E, gamma2) grid, Szego-section
/// convergence, multi-shot monotonicity, and degenerate collapse.
inline std::vector<CheckResult> verify_bounds(std::uint64_t seed) {
    std::vector<CheckResult> checks;

    double worst_order = 0.0;
    for (int ig = 0; ig < 20; ++ig) {
        const double g2 = 0.05 + ig * (2.0 - 0.05) / 19.0;
        const auto problem = discrimination::DiscriminationProblem::make(0.1, g2, 0.5);
        const double exact = bounds::exact_unconstrained(problem).value;
        for (int ie = 0; ie < 20; ++ie) {
            const double e = 0.5 + ie * (12.0 - 0.5) / 19.0;
            const double thm3 = bounds::qubit_bound(problem, {e}).value;
            const double thm4 = bounds::projector_bound(problem, {e}).value;
            const double cor5 = bounds::frobenius_bound(problem, {e}).value;
            worst_order = std::max({worst_order, cor5 - thm4, thm4 - exact, thm3 - exact});
        }
    }
    checks.push_back(make_check("ordering_chain", worst_order, 1e-9));

    {
        const auto problem = discrimination::DiscriminationProblem::make(0.1, 1.0, 0.5);
        const double exact = bounds::exact_unconstrained(problem).value;
        double prev = 0.0;
        double worst_monotone = 0.0;
        double final_rel = 0.0;
        for (int m : {64, 256, 1024}) {
            const double v = bounds::szego_section_value(problem, m);
            worst_monotone = std::max(worst_monotone, prev - v);
            prev = v;
            final_rel = std::abs(v - exact) / exact;
        }
        checks.push_back(make_check("szego_monotone_trend", worst_monotone, 0.0));
        checks.push_back(make_check("szego_relative_error_M1024", final_rel, 0.02));
    }

    {
        const auto problem = discrimination::DiscriminationProblem::make(0.1, 1.0, 0.5);
        double prev_lo = -1.0;
        double worst = 0.0;
        int index = 0;
        for (int n : {1, 2, 3, 5}) {
            const auto est = bounds::multishot_exact(problem, {n}, bounds::MultishotMethod::mc_mixture,
                                                     400000, numerics::derive_seed(seed, 40 + index++));
            const double lo = est.value - 3.0 * *est.estimator_error;
            const double hi = est.value + 3.0 * *est.estimator_error;
            if (prev_lo > hi) worst = std::max(worst, prev_lo - hi);
            prev_lo = lo;
        }
        checks.push_back(make_check("multishot_nondecreasing_3sigma", worst, 0.0));
    }

    {
        const auto problem = discrimination::DiscriminationProblem::make(0.1, 0.1, 0.5);
        const double exact = bounds::exact_unconstrained(problem).value;
        const double thm3 = bounds::qubit_bound(problem, {2.0}).value;
        const double thm4 = bounds::projector_bound(problem, {2.0}).value;
        const double cor5 = bounds::frobenius_bound(problem, {2.0}).value;
        const double thm8 = bounds::multishot_bound(problem, {2.0}, {5}).value;
        const double worst = std::max({exact, thm3, thm4, cor5, thm8});
        checks.push_back(make_check("degenerate_collapse", worst, 1e-9));
    }

    {
        const auto problem = discrimination::DiscriminationProblem::make(0.1, 1.0, 0.5);
        const double exact = bounds::exact_unconstrained(problem).value;
        const double floor_err = 0.5 * (1.0 - exact);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const auto rho = states::sample_constrained_state(
                12, {2.0}, states::SamplingStrategy::mixed, numerics::derive_seed(seed, 90 + i));
            worst = std::max(worst, floor_err - discrimination::helstrom_error(problem, rho));
        }
        checks.push_back(make_check("helstrom_floor_consistency", worst, 1e-9));
    }
    return checks;
}

/// Appendix A machinery: the tensor-difference lemma at machine precision and
/// the 2-level Szego convergence ladder.
inline std::vector<CheckResult> verify_multilevel(std::uint64_t seed) {
    std::vector<CheckResult> checks;
    numerics::Rng rng(numerics::derive_seed(seed, 7));

    double worst_lemma = 0.0;
    for (int levels : {2, 3}) {
        for (int size : {2, 3, 4}) {
            std::vector<double> c1(static_cast<std::size_t>(size)), c2(static_cast<std::size_t>(size));
            for (int k = 0; k < size; ++k) {
                c1[static_cast<std::size_t>(k)] = 2.0 * numerics::uniform01(rng) - 1.0;
                c2[static_cast<std::size_t>(k)] = 2.0 * numerics::uniform01(rng) - 1.0;
            }
            auto t1 = [&](int k) { return c1[static_cast<std::size_t>(k)]; };
            auto t2 = [&](int k) { return c2[static_cast<std::size_t>(k)]; };
            const auto built = multilevel::build_multilevel(
                multilevel::tensor_diff_coeffs(t1, t2, levels, size));
            const Eigen::MatrixXd m1 = dephasing::toeplitz_block(t1, size).dense();
            const Eigen::MatrixXd m2 = dephasing::toeplitz_block(t2, size).dense();
            const Eigen::MatrixXd oracle = numerics::kron_power<double>(m1, levels) -
                                           numerics::kron_power<double>(m2, levels);
            worst_lemma = std::max(worst_lemma, (built.mat - oracle).cwiseAbs().maxCoeff());
        }
    }
    checks.push_back(make_check("tensor_difference_lemma", worst_lemma, 1e-14));

    {
        auto t1 = [](int k) { return dephasing::fourier_coefficient({0.1}, k); };
        auto t2 = [](int k) { return dephasing::fourier_coefficient({1.0}, k); };
        const double limit = multilevel::szego_limit({0.1}, {1.0}, 0.5, 0.5, 2);
        double prev_err = 1e9;
        double worst_decrease = 0.0;
        double final_rel = 0.0;
        for (int m : {10, 20, 40}) {
            const auto toeplitz = multilevel::build_multilevel(
                multilevel::weighted_tensor_diff_coeffs(t1, t2, 0.5, 0.5, 2, m));
            const double value =
                multilevel::szego_functional(toeplitz, [](double x) { return std::abs(x); });
            const double err = std::abs(value - limit);
            worst_decrease = std::max(worst_decrease, err - prev_err);
            prev_err = err;
            final_rel = err / limit;
        }
        checks.push_back(make_check("multilevel_szego_error_decreasing", worst_decrease, 0.0));
        checks.push_back(make_check("multilevel_szego_relative_error_M40", final_rel, 0.05));
    }
    return checks;
}

/// Side entanglement: the bipartite norm never beats the single-mode optimum.
inline std::vector<CheckResult> verify_entanglement(std::uint64_t seed) {
    std::vector<CheckResult> checks;
    const auto problem = discrimination::DiscriminationProblem::make(0.1, 1.0, 0.5);
    const double exact = bounds::exact_unconstrained(problem).value;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        numerics::Rng rng(numerics::derive_seed(seed, 200 + trial));
        const auto rho = states::random_pure_state(36, rng, 2);
        worst = std::max(worst, discrimination::entangled_delta_norm(problem, rho) - exact);
    }
    checks.push_back(make_check("side_entanglement_ceiling", worst, 1e-6));

    {
        numerics::Rng rng(numerics::derive_seed(seed, 300));
        const auto rho_a = states::random_pure_state(6, rng);
        const auto rho_b = states::random_pure_state(6, rng);
        states::DensityMatrix product;
        product.mat = numerics::kron<std::complex<double>>(rho_a.mat, rho_b.mat);
        product.modes = 2;
        product.mode_dim = 6;
        const double lhs = discrimination::entangled_delta_norm(problem, product);
        const double rhs = numerics::trace_norm(discrimination::delta(problem, rho_b));
        checks.push_back(make_check("product_state_factorization", std::abs(lhs - rhs), 1e-10));
    }
    return checks;
}

/// No-unambiguous-discrimination surrogate: POVM responses are nonnegative,
/// and strictly positive against full-rank states.
inline std::vector<CheckResult> verify_unambiguous(std::uint64_t seed) {
    std::vector<CheckResult> checks;
    double worst_negative = 0.0;
    double min_positive = 1e9;
    for (int trial = 0; trial < 500; ++trial) {
        numerics::Rng rng(numerics::derive_seed(seed, 400 + trial));
        const int dim = 2 + static_cast<int>(numerics::uniform01(rng) * 7);
        const double gamma_choices[] = {0.1, 0.5, 1.0, 2.0};
        const double gamma = gamma_choices[static_cast<int>(numerics::uniform01(rng) * 4)];
        const auto pi = discrimination::random_povm_element(dim, rng);
        const auto rho = states::random_mixed_state(dim, rng);
        const double response = discrimination::povm_response(pi, gamma, rho);
        worst_negative = std::max(worst_negative, -response);
        if (pi.mat.trace().real() > 1e-6) min_positive = std::min(min_positive, response);
    }
    checks.push_back(make_check("response_nonnegative", worst_negative, 1e-10));
    checks.push_back(make_check("response_strictly_positive", 1e-8 - min_positive, 0.0));
    return checks;
}

inline std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed) {
    if (suite == "channel") return verify_channel(seed);
    if (suite == "bounds") return verify_bounds(seed);
    if (suite == "multilevel") return verify_multilevel(seed);
    if (suite == "entanglement") return verify_entanglement(seed);
    if (suite == "unambiguous") return verify_unambiguous(seed);
    throw numerics::ValidationError("unknown verify suite: " + suite);
}

inline output::SweepResult to_sweep_result(const std::string& suite,
                                           const std::vector<CheckResult>& checks,
                                           std::uint64_t seed) {
    output::SweepResult result;
    result.columns = {"index", "pass", "margin", "threshold"};
    result.add_meta("tool", std::string(output::kToolVersion));
    result.add_meta("suite", suite);
    result.add_meta("seed", static_cast<std::int64_t>(seed));
    for (std::size_t i = 0; i < checks.size(); ++i) {
        result.add_meta("check_" + std::to_string(i), checks[i].name);
        result.rows.push_back({static_cast<double>(i), checks[i].pass ? 1.0 : 0.0,
                               checks[i].margin, checks[i].threshold});
    }
    return result;
}

}  // namespace dephdisc::verify
