#include "dephdisc/dephasing.hpp"

#include "dephdisc/states.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace dephdisc;
using numerics::kPi;

TEST_CASE("wrapped_pdf symmetry and normalization") {
    for (double gamma : {0.05, 0.3, 1.0, 3.0}) {
        const dephasing::WrappedNormalSymbol symbol{gamma};
        for (double th : {0.1, 0.7, 2.9}) {
            CHECK(dephasing::wrapped_pdf(symbol, th) ==
                  Catch::Approx(dephasing::wrapped_pdf(symbol, -th)).margin(1e-15));
            CHECK(dephasing::wrapped_pdf(symbol, th) >= 0.0);
        }
        const double mass =
            numerics::integrate_periodic([&](double th) { return dephasing::wrapped_pdf(symbol, th); });
        CHECK_THAT(mass, Catch::Matchers::WithinAbs(1.0, 1e-10));
    }
}

TEST_CASE("wrapped_pdf matches its two series oracles") {
    // gamma = 0.5 at theta = 0: direct wrap-sum with |k| <= 10
    CHECK_THAT(dephasing::wrapped_pdf({0.5}, 0.0),
               Catch::Matchers::WithinAbs(oracles::wrap_sum_pdf(0.5, 0.0), 1e-14));

    // large gamma flattens to the uniform density
    for (double th = -kPi; th <= kPi; th += 0.37)
        CHECK_THAT(dephasing::wrapped_pdf({100.0}, th),
                   Catch::Matchers::WithinAbs(1.0 / (2.0 * kPi), 1e-6));

    // the two evaluation regimes agree with the opposite-series oracle
    CHECK_THAT(dephasing::wrapped_pdf({0.8}, 1.3),
               Catch::Matchers::WithinAbs(oracles::fourier_pdf(0.8, 1.3), 1e-13));
    CHECK_THAT(dephasing::wrapped_pdf({1.5}, -2.1),
               Catch::Matchers::WithinAbs(oracles::wrap_sum_pdf(1.5, -2.1), 1e-13));
}

TEST_CASE("wrapped_pdf rejects the delta-distribution limit") {
    CHECK_THROWS_AS(dephasing::wrapped_pdf({0.0}, 0.3), std::domain_error);
}

TEST_CASE("fourier_coefficient closed form and quadrature consistency") {
    CHECK(dephasing::fourier_coefficient({0.0}, 5) == 1.0);
    CHECK_THAT(dephasing::fourier_coefficient({1.0}, 2),
               Catch::Matchers::WithinAbs(0.1353352832366127, 1e-15));
    CHECK_THAT(dephasing::fourier_coefficient({0.1}, 1),
               Catch::Matchers::WithinAbs(0.9512294245007140, 1e-15));

    // matches the integral of p_gamma e^{-ik theta} (cosine part; sine is 0)
    for (int k : {0, 1, 3}) {
        const double via_quadrature = numerics::integrate_periodic(
            [&](double th) { return dephasing::wrapped_pdf({0.7}, th) * std::cos(k * th); });
        CHECK_THAT(dephasing::fourier_coefficient({0.7}, k),
                   Catch::Matchers::WithinAbs(via_quadrature, 1e-10));
    }
}

TEST_CASE("toeplitz_block layouts") {
    const auto ones = dephasing::toeplitz_block([](int) { return 1.0; }, 3);
    CHECK(ones.dense().isApprox(Eigen::MatrixXd::Ones(3, 3)));

    const auto gauss = dephasing::toeplitz_block(
        [](int k) { return std::exp(-0.5 * k * k); }, 2);
    CHECK_THAT(gauss.dense()(0, 1), Catch::Matchers::WithinAbs(0.6065306597126334, 1e-12));
    CHECK(gauss.dense()(0, 0) == 1.0);
    CHECK(gauss.dense()(1, 0) == gauss.dense()(0, 1));

    const auto zero = dephasing::toeplitz_block(
        [](int k) {
            return 0.5 * std::exp(-0.5 * 0.3 * k * k) - 0.5 * std::exp(-0.5 * 0.3 * k * k);
        },
        4);
    CHECK(zero.dense().cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(dephasing::toeplitz_block([](int) { return 1.0; }, 0),
                    numerics::ValidationError);
}

TEST_CASE("apply_channel basics") {
    numerics::Rng rng(5);
    const auto rho = states::random_mixed_state(6, rng);

    CHECK(dephasing::apply_channel(dephasing::make_channel(0.0), rho.mat).isApprox(rho.mat));

    // dephasing fixes populations: diagonal input is untouched
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(4, 4);
    diag(0, 0) = 0.4;
    diag(2, 2) = 0.6;
    CHECK(dephasing::apply_channel(dephasing::make_channel(1.3), diag).isApprox(diag));

    // trace preserved exactly
    const Eigen::MatrixXcd out = dephasing::apply_channel(dephasing::make_channel(0.7), rho.mat);
    CHECK(out.trace().real() == Catch::Approx(1.0).margin(1e-14));
    CHECK(numerics::hermitian_eigenvalues(out)(0) >= -1e-10);
}

TEST_CASE("apply_channel semigroup composition") {
    numerics::Rng rng(6);
    const auto rho = states::random_mixed_state(8, rng);
    const Eigen::MatrixXcd two_step = dephasing::apply_channel(
        dephasing::make_channel(0.9),
        dephasing::apply_channel(dephasing::make_channel(0.4), rho.mat));
    const Eigen::MatrixXcd direct = dephasing::apply_channel(dephasing::make_channel(1.3), rho.mat);
    CHECK((two_step - direct).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("multiplier sections are positive semidefinite") {
    for (double gamma : {0.1, 0.5, 1.0, 2.0}) {
        const auto block = dephasing::toeplitz_block(
            [&](int k) { return dephasing::fourier_coefficient({gamma}, k); }, 24);
        CHECK(numerics::symmetric_eigenvalues(block.dense())(0) >= -1e-10);
    }
}

TEST_CASE("rotation-average oracle agrees with the Hadamard form") {
    numerics::Rng rng(7);
    const auto rho = states::random_mixed_state(6, rng);
    const auto channel = dephasing::make_channel(0.3);
    const Eigen::MatrixXcd fast = dephasing::apply_channel(channel, rho.mat);
    const Eigen::MatrixXcd slow = dephasing::apply_channel_rotation_oracle(channel, rho.mat);
    CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-8);

    // and against the test-side trapezoid rotation average
    const Eigen::MatrixXcd ref = oracles::rotation_average(0.3, rho.mat);
    CHECK((fast - ref).cwiseAbs().maxCoeff() <= 1e-8);

    // vacuum is a fixed point
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(3, 3);
    vac(0, 0) = 1.0;
    CHECK(dephasing::apply_channel_rotation_oracle(channel, vac).isApprox(vac, 1e-10));
}

TEST_CASE("rotation-average oracle on the plus state") {
    Eigen::MatrixXcd plus = 0.5 * Eigen::MatrixXcd::Ones(2, 2);
    const Eigen::MatrixXcd out =
        dephasing::apply_channel_rotation_oracle(dephasing::make_channel(1.0), plus);
    CHECK_THAT(out(0, 1).real(), Catch::Matchers::WithinAbs(0.5 * std::exp(-0.5), 1e-9));
    CHECK_THAT(out(0, 0).real(), Catch::Matchers::WithinAbs(0.5, 1e-9));
}

TEST_CASE("apply_tensor_channel") {
    numerics::Rng rng(8);
    const auto rho = states::random_mixed_state(5, rng);

    // n = 1 reduces to the single-mode channel
    CHECK(dephasing::apply_tensor_channel(dephasing::make_channel(0.6), rho.mat, 1, 5)
              .isApprox(dephasing::apply_channel(dephasing::make_channel(0.6), rho.mat)));

    // product inputs factorize
    const auto sigma = states::random_mixed_state(3, rng);
    const auto tau = states::random_mixed_state(3, rng);
    const Eigen::MatrixXcd product = numerics::kron<std::complex<double>>(sigma.mat, tau.mat);
    const Eigen::MatrixXcd joint =
        dephasing::apply_tensor_channel(dephasing::make_channel(0.8), product, 2, 3);
    const Eigen::MatrixXcd expected = numerics::kron<std::complex<double>>(
        dephasing::apply_channel(dephasing::make_channel(0.8), sigma.mat),
        dephasing::apply_channel(dephasing::make_channel(0.8), tau.mat));
    CHECK((joint - expected).cwiseAbs().maxCoeff() <= 1e-14);

    CHECK_THROWS_AS(dephasing::apply_tensor_channel(dephasing::make_channel(0.8), product, 2, 4),
                    numerics::ValidationError);
}

TEST_CASE("apply_channel_second_mode touches only second-mode coherences") {
    numerics::Rng rng(9);
    const auto a = states::random_mixed_state(3, rng);
    const auto b = states::random_mixed_state(3, rng);
    const Eigen::MatrixXcd product = numerics::kron<std::complex<double>>(a.mat, b.mat);
    const Eigen::MatrixXcd out =
        dephasing::apply_channel_second_mode(dephasing::make_channel(0.5), product, 3, 3);
    const Eigen::MatrixXcd expected = numerics::kron<std::complex<double>>(
        a.mat, dephasing::apply_channel(dephasing::make_channel(0.5), b.mat));
    CHECK((out - expected).cwiseAbs().maxCoeff() <= 1e-14);
}
