#include "dephdisc/numerics.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

using namespace dephdisc;
using numerics::kPi;

namespace {

Eigen::MatrixXcd random_hermitian(int dim, numerics::Rng& rng) {
    Eigen::MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            g(i, j) = std::complex<double>(numerics::standard_normal(rng),
                                           numerics::standard_normal(rng));
    return 0.5 * (g + g.adjoint().eval());
}

}  // namespace

TEST_CASE("integrate_periodic on the uniform density") {
    const double v = numerics::integrate_periodic([](double) { return 1.0 / (2.0 * kPi); });
    CHECK_THAT(v, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("integrate_periodic is exact on trigonometric polynomials") {
    // only the constant term survives integration over a full period
    for (int degree : {1, 7, 16, 32}) {
        const double v = numerics::integrate_periodic(
            [degree](double th) { return 0.25 + std::cos(degree * th) - 2.0 * std::sin(degree * th); });
        CHECK_THAT(v, Catch::Matchers::WithinAbs(0.25 * 2.0 * kPi, 1e-10));
    }
}

TEST_CASE("integrate_periodic respects breakpoints around a kink") {
    numerics::QuadratureSpec spec;
    spec.breakpoints = {0.0};
    const double v = numerics::integrate_periodic([](double th) { return std::abs(th); }, spec);
    CHECK_THAT(v, Catch::Matchers::WithinAbs(kPi * kPi, 1e-10));
}

TEST_CASE("integrate_periodic reports budget exhaustion with its best estimate") {
    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    spec.max_subdivisions = 4;
    const auto needle = [](double th) { return 1.0 / (1e-6 + th * th); };
    try {
        numerics::integrate_periodic(needle, spec);
        FAIL("expected ConvergenceError");
    } catch (const numerics::ConvergenceError& e) {
        CHECK(e.best_estimate() > 0.0);
        CHECK(e.residual() > 0.0);
    }
}

TEST_CASE("quadrature spec validation") {
    numerics::QuadratureSpec bad_tol;
    bad_tol.abs_tol = 0.0;
    CHECK_THROWS_AS(numerics::integrate_periodic([](double) { return 1.0; }, bad_tol),
                    numerics::ValidationError);
    numerics::QuadratureSpec bad_break;
    bad_break.breakpoints = {4.0};
    CHECK_THROWS_AS(numerics::integrate_periodic([](double) { return 1.0; }, bad_break),
                    numerics::ValidationError);
}

TEST_CASE("isolate_sign_changes finds the crossings of a shifted cosine") {
    const auto roots = numerics::isolate_sign_changes([](double th) { return std::cos(th) - 0.5; });
    REQUIRE(roots.size() == 2);
    CHECK_THAT(roots[0], Catch::Matchers::WithinAbs(-kPi / 3.0, 1e-12));
    CHECK_THAT(roots[1], Catch::Matchers::WithinAbs(kPi / 3.0, 1e-12));
}

TEST_CASE("integrate_abs_periodic handles the golden |difference| integrand") {
    // oracle: 10^6-point trapezoid with wrap terms |k| <= 10 (frozen value)
    const double golden = 0.503283071003;
    const double oracle = oracles::abs_diff_integral(0.1, 1.0, 0.5, 0.5);
    CHECK_THAT(oracle, Catch::Matchers::WithinAbs(golden, 1e-9));

    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-10;
    const double v = numerics::integrate_abs_periodic(
        [](double th) {
            return 0.5 * oracles::wrap_sum_pdf(0.1, th) - 0.5 * oracles::wrap_sum_pdf(1.0, th);
        },
        spec);
    CHECK_THAT(v, Catch::Matchers::WithinAbs(golden, 2e-9));
}

TEST_CASE("hermitian_eigenvalues on known spectra") {
    CHECK(numerics::hermitian_eigenvalues(Eigen::MatrixXcd::Identity(3, 3)).isApproxToConstant(1.0));

    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(3, 3);
    diag(0, 0) = -2.0;
    diag(2, 2) = 5.0;
    const Eigen::VectorXd ev = numerics::hermitian_eigenvalues(diag);
    CHECK_THAT(ev(0), Catch::Matchers::WithinAbs(-2.0, 1e-12));
    CHECK_THAT(ev(1), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(ev(2), Catch::Matchers::WithinAbs(5.0, 1e-12));

    const Eigen::VectorXd ones_ev =
        numerics::hermitian_eigenvalues(Eigen::MatrixXcd::Ones(5, 5));
    CHECK_THAT(ones_ev(4), Catch::Matchers::WithinAbs(5.0, 1e-10));
    CHECK_THAT(ones_ev.head(4).cwiseAbs().maxCoeff(), Catch::Matchers::WithinAbs(0.0, 1e-10));
}

TEST_CASE("hermitian_eigenvalues rejects non-Hermitian input") {
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(numerics::hermitian_eigenvalues(bad), numerics::ValidationError);
}

TEST_CASE("trace and Frobenius norms") {
    CHECK(numerics::trace_norm(Eigen::MatrixXcd::Zero(4, 4)) == 0.0);
    CHECK(numerics::frobenius_norm(Eigen::MatrixXcd::Zero(4, 4)) == 0.0);

    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 0.3;
    d(1, 1) = -0.7;
    CHECK_THAT(numerics::trace_norm(d), Catch::Matchers::WithinAbs(1.0, 1e-12));

    Eigen::MatrixXcd pyth = Eigen::MatrixXcd::Zero(2, 2);
    pyth(0, 0) = 3.0;
    pyth(1, 1) = 4.0;
    CHECK_THAT(numerics::frobenius_norm(pyth), Catch::Matchers::WithinAbs(5.0, 1e-12));
}

TEST_CASE("norm and trace identities on random Hermitian matrices") {
    numerics::Rng rng(321);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + static_cast<int>(numerics::uniform01(rng) * 63);
        const Eigen::MatrixXcd a = random_hermitian(dim, rng);
        const Eigen::VectorXd ev = numerics::hermitian_eigenvalues(a);
        const double tn = ev.cwiseAbs().sum();
        const double fn = numerics::frobenius_norm(a);
        CHECK(tn >= fn);
        CHECK(fn >= 0.0);
        CHECK(std::abs(ev.sum() - a.trace().real()) <= 1e-9 * std::max(1.0, fn));
    }
}

TEST_CASE("minimize_scalar") {
    const auto quad = numerics::minimize_scalar([](double s) { return (s - 0.3) * (s - 0.3); },
                                                0.0, 1.0, 1e-10);
    CHECK_THAT(quad.argmin, Catch::Matchers::WithinAbs(0.3, 1e-6));
    CHECK_THAT(quad.min, Catch::Matchers::WithinAbs(0.0, 1e-12));

    const auto flat = numerics::minimize_scalar([](double) { return 2.5; }, -1.0, 1.0, 1e-10);
    CHECK(flat.min == 2.5);

    // classical two-point Chernoff scan vs the dense-grid oracle
    const double a = 0.7, b = 0.4;
    auto g = [&](double s) {
        return std::pow(a, s) * std::pow(b, 1.0 - s) +
               std::pow(1.0 - a, s) * std::pow(1.0 - b, 1.0 - s);
    };
    const auto mine = numerics::minimize_scalar(g, 0.0, 1.0, 1e-10);
    const auto ref = oracles::grid_min(g, 0.0, 1.0);
    CHECK_THAT(mine.min, Catch::Matchers::WithinAbs(ref.second, 1e-9));
}

TEST_CASE("mc_expectation basics") {
    auto unit_sampler = [](numerics::Rng& rng) { return numerics::uniform01(rng); };
    const auto constant =
        numerics::mc_expectation(unit_sampler, [](double) { return 1.0; }, 1000, 7);
    CHECK(constant.value == 1.0);
    CHECK(constant.std_error == 0.0);

    // uniform on [-pi, pi], h = cos^2 -> mean 1/2
    auto angle_sampler = [](numerics::Rng& rng) { return -kPi + 2.0 * kPi * numerics::uniform01(rng); };
    const auto cos2 = numerics::mc_expectation(
        angle_sampler, [](double th) { return std::cos(th) * std::cos(th); }, 200000, 11);
    CHECK(std::abs(cos2.value - 0.5) <= 3.0 * cos2.std_error);

    CHECK_THROWS_AS(
        numerics::mc_expectation(unit_sampler, [](double) { return 1.0; }, 10, 7),
        numerics::ValidationError);
    CHECK_THROWS_AS(numerics::mc_expectation(
                        unit_sampler, [](double x) { return std::log(x - 2.0); }, 100, 7),
                    std::runtime_error);
}

TEST_CASE("mc_expectation is reproducible for a fixed seed") {
    auto sampler = [](numerics::Rng& rng) { return numerics::standard_normal(rng); };
    auto h = [](double x) { return x * x; };
    const auto first = numerics::mc_expectation(sampler, h, 5000, 99);
    const auto second = numerics::mc_expectation(sampler, h, 5000, 99);
    CHECK(first.value == second.value);
    CHECK(first.std_error == second.std_error);
}

TEST_CASE("derive_seed decorrelates task indices") {
    const auto a = numerics::derive_seed(42, 0);
    const auto b = numerics::derive_seed(42, 1);
    const auto c = numerics::derive_seed(43, 0);
    CHECK(a != b);
    CHECK(a != c);
    CHECK(numerics::derive_seed(42, 0) == a);
}
