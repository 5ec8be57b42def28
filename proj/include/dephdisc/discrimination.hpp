#pragma once

// Discrimination functionals for a pair of dephasing channels: the weighted
// output difference Delta(rho), the Helstrom minimum error probability, the
// POVM response positivity underlying the no-unambiguous-discrimination
// theorem, and the side-entanglement variant.

#include "dephdisc/dephasing.hpp"
#include "dephdisc/states.hpp"

#include <cmath>
#include <stdexcept>

namespace dephdisc::discrimination {

/// Two dephasing rates with prior probabilities q1 + q2 = 1.
struct DiscriminationProblem {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double q1 = 0.5;
    double q2 = 0.5;

    static DiscriminationProblem make(double gamma1, double gamma2, double q1) {
        DiscriminationProblem p{gamma1, gamma2, q1, 1.0 - q1};
        p.validate();
        return p;
    }

    void validate() const {
        if (!(gamma1 >= 0.0 && gamma2 >= 0.0))
            throw numerics::ValidationError("DiscriminationProblem: gammas must be >= 0");
        if (!(q1 >= 0.0 && q1 <= 1.0 && q2 >= 0.0 && q2 <= 1.0))
            throw numerics::ValidationError("DiscriminationProblem: priors must be in [0, 1]");
        if (std::abs(q1 + q2 - 1.0) > 1e-12)
            throw numerics::ValidationError("DiscriminationProblem: priors must sum to 1");
    }

    /// Diagonal coefficient of the weighted Toeplitz difference:
    /// d_k = q1 e^{-gamma1 k^2/2} - q2 e^{-gamma2 k^2/2}.
    double diff_coefficient(int k) const {
        const double kk = static_cast<double>(k) * k;
        return q1 * std::exp(-0.5 * gamma1 * kk) - q2 * std::exp(-0.5 * gamma2 * kk);
    }
};

/// Delta(rho) = q1 N_{gamma1}(rho) - q2 N_{gamma2}(rho). Entry-wise this is
/// d_{|m-n|} rho_{mn}, so Tr Delta = q1 - q2 for any state.
inline Eigen::MatrixXcd delta(const DiscriminationProblem& problem, const states::DensityMatrix& rho) {
    problem.validate();
    const int dim = rho.dim();
    if (rho.modes != 1)
        throw numerics::ValidationError("delta: single-mode state expected");
    Eigen::MatrixXcd out(dim, dim);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n) out(m, n) = problem.diff_coefficient(m - n) * rho.mat(m, n);
    return out;
}

/// Helstrom minimum error probability (1/2)(1 - ||Delta(rho)||_1), priors
/// inside the norm.
inline double helstrom_error(const DiscriminationProblem& problem, const states::DensityMatrix& rho) {
    return 0.5 * (1.0 - numerics::trace_norm(delta(problem, rho)));
}

/// POVM element: PSD with spectrum in [0, 1].
struct PovmElement {
    Eigen::MatrixXcd mat;

    void validate() const {
        const Eigen::VectorXd ev = numerics::hermitian_eigenvalues(mat);
        if (ev(0) < -1e-10)
            throw numerics::ValidationError("PovmElement: not positive semidefinite");
        if (ev(ev.size() - 1) > 1.0 + 1e-10)
            throw numerics::ValidationError("PovmElement: an eigenvalue exceeds 1");
    }
};

/// Random PSD element with spectrum in [0, 1]: G^dag G scaled to unit top
/// eigenvalue, then shrunk by a uniform factor so the family covers both
/// near-zero and near-identity elements.
inline PovmElement random_povm_element(int dim, numerics::Rng& rng) {
    Eigen::MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            g(i, j) = std::complex<double>(numerics::standard_normal(rng),
                                           numerics::standard_normal(rng));
    Eigen::MatrixXcd h = g.adjoint() * g;
    const Eigen::VectorXd ev = numerics::hermitian_eigenvalues(h);
    PovmElement pi;
    pi.mat = h * (numerics::uniform01(rng) / ev(ev.size() - 1));
    return pi;
}

/// Tr(Pi (T(p_gamma) o rho)): the response of a POVM element to the channel
/// output. Nonnegative for every PSD Pi and state rho; its strict positivity
/// against full-rank states is what rules out unambiguous discrimination.
inline double povm_response(const PovmElement& pi, double gamma, const states::DensityMatrix& rho) {
    pi.validate();
    if (pi.mat.rows() != rho.dim())
        throw numerics::ValidationError("povm_response: dimension mismatch");
    const Eigen::MatrixXcd out = dephasing::apply_channel(dephasing::make_channel(gamma), rho.mat);
    return (pi.mat * out).trace().real();
}

/// ||q1 (id x N1)(rho) - q2 (id x N2)(rho)||_1 for a bipartite state with the
/// channel on the second mode. Bounded by the unconstrained single-mode
/// optimum (side entanglement does not help).
inline double entangled_delta_norm(const DiscriminationProblem& problem,
                                   const states::DensityMatrix& rho_ab) {
    problem.validate();
    if (rho_ab.modes != 2)
        throw numerics::ValidationError("entangled_delta_norm: two-mode state expected");
    const int d = rho_ab.mode_dim;
    const Eigen::MatrixXcd out1 =
        dephasing::apply_channel_second_mode(dephasing::make_channel(problem.gamma1), rho_ab.mat, d, d);
    const Eigen::MatrixXcd out2 =
        dephasing::apply_channel_second_mode(dephasing::make_channel(problem.gamma2), rho_ab.mat, d, d);
    return numerics::trace_norm(problem.q1 * out1 - problem.q2 * out2);
}

}  // namespace dephdisc::discrimination
