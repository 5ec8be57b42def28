#pragma once

// Probe-state construction and sampling: qubit-subspace probes, the uniform
// superposition probe, mean photon number, and seeded random sampling of
// energy-constrained pure states.

#include "dephdisc/numerics.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dephdisc::states {

/// Truncated Fock-basis density matrix. `modes` > 1 means a product basis
/// with per-mode dimension `mode_dim` (flat index: first mode most
/// significant, matching the Kronecker product convention).
struct DensityMatrix {
    Eigen::MatrixXcd mat;
    int modes = 1;
    int mode_dim = 0;

    int dim() const { return static_cast<int>(mat.rows()); }

    static DensityMatrix pure(const Eigen::VectorXcd& amplitudes, int modes = 1) {
        const double norm = amplitudes.norm();
        if (!(norm > 0.0)) throw numerics::ValidationError("DensityMatrix::pure: zero vector");
        const Eigen::VectorXcd psi = amplitudes / norm;
        DensityMatrix rho;
        rho.mat = psi * psi.adjoint();
        rho.modes = modes;
        rho.mode_dim = mode_dim_for(static_cast<int>(psi.size()), modes);
        return rho;
    }

    static DensityMatrix validated(Eigen::MatrixXcd m, int modes = 1) {
        numerics::ensure_hermitian(m, 1e-12);
        const double tr = m.trace().real();
        if (std::abs(tr - 1.0) > 1e-12)
            throw numerics::ValidationError("DensityMatrix: trace must be 1 (got " +
                                            std::to_string(tr) + ")");
        DensityMatrix rho;
        rho.mode_dim = mode_dim_for(static_cast<int>(m.rows()), modes);
        rho.mat = std::move(m);
        rho.modes = modes;
        return rho;
    }

    /// Full invariant check including positive semidefiniteness (one dense
    /// eigensolve, so not run on every construction).
    void check_psd(double floor = -1e-10) const {
        const Eigen::VectorXd ev = numerics::hermitian_eigenvalues(mat);
        if (ev(0) < floor)
            throw numerics::ValidationError("DensityMatrix: negative eigenvalue " +
                                            std::to_string(ev(0)));
    }

private:
    static int mode_dim_for(int dim, int modes) {
        if (modes < 1) throw numerics::ValidationError("DensityMatrix: modes must be >= 1");
        if (modes == 1) return dim;
        int d = static_cast<int>(std::lround(std::pow(static_cast<double>(dim), 1.0 / modes)));
        long total = 1;
        for (int j = 0; j < modes; ++j) total *= d;
        if (total != dim)
            throw numerics::ValidationError("DensityMatrix: dim is not a perfect modes-th power");
        return d;
    }
};

/// Mean photon number bound E (quanta).
struct EnergyBudget {
    double E = 0.0;

    void validate() const {
        if (!(E >= 0.0)) throw numerics::ValidationError("EnergyBudget: E must be >= 0");
    }
};

inline int floor_2e(double energy) { return static_cast<int>(std::floor(2.0 * energy)); }

/// Pure state on span{|0>, |m>} with excited population r_m.
struct QubitProbe {
    int m = 1;
    double r_m = 0.5;

    void validate() const {
        if (m < 1) throw numerics::ValidationError("QubitProbe: m must be >= 1");
        if (!(r_m >= 0.0 && r_m <= 1.0))
            throw numerics::ValidationError("QubitProbe: r_m must be in [0, 1]");
    }
};

/// rho = r0 |0><0| + sqrt(r0 r_m)(|0><m| + |m><0|) + r_m |m><m|, the rank-1
/// projector onto sqrt(r0)|0> + sqrt(r_m)|m>. Mean energy m * r_m.
inline DensityMatrix qubit_probe_state(const QubitProbe& probe, int dim) {
    probe.validate();
    if (dim <= probe.m)
        throw numerics::ValidationError("qubit_probe_state: need dim > m");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = std::sqrt(1.0 - probe.r_m);
    psi(probe.m) = std::sqrt(probe.r_m);
    return DensityMatrix::pure(psi);
}

/// Projector onto (|0> + ... + |M>)/sqrt(M+1): the flat Toeplitz state of
/// the section bound, with mean energy M/2.
inline DensityMatrix uniform_probe(int levels, int dim) {
    if (levels < 0) throw numerics::ValidationError("uniform_probe: M must be >= 0");
    if (dim < levels + 1)
        throw numerics::ValidationError("uniform_probe: need dim >= M + 1");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    for (int k = 0; k <= levels; ++k) psi(k) = 1.0;
    return DensityMatrix::pure(psi);
}

/// Tr(rho H) with H the (sum of per-mode) number operator(s).
inline double mean_energy(const DensityMatrix& rho) {
    const int dim = rho.dim();
    double e = 0.0;
    if (rho.modes == 1) {
        for (int n = 0; n < dim; ++n) e += n * rho.mat(n, n).real();
        return e;
    }
    for (long r = 0; r < dim; ++r) {
        long x = r;
        long digit_sum = 0;
        while (x > 0) {
            digit_sum += x % rho.mode_dim;
            x /= rho.mode_dim;
        }
        e += static_cast<double>(digit_sum) * rho.mat(r, r).real();
    }
    return e;
}

enum class SamplingStrategy { rejection, qubit_family, mixed };

namespace detail {

inline Eigen::VectorXcd haar_like_vector(int dim, numerics::Rng& rng) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i)
        v(i) = std::complex<double>(numerics::standard_normal(rng), numerics::standard_normal(rng));
    return v;
}

}  // namespace detail

/// Haar-like random pure state (normalized complex-normal amplitudes).
inline DensityMatrix random_pure_state(int dim, numerics::Rng& rng, int modes = 1) {
    return DensityMatrix::pure(detail::haar_like_vector(dim, rng), modes);
}

/// Random full-rank mixed state W W^dag / Tr.
inline DensityMatrix random_mixed_state(int dim, numerics::Rng& rng) {
    Eigen::MatrixXcd w(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            w(i, j) = std::complex<double>(numerics::standard_normal(rng),
                                           numerics::standard_normal(rng));
    Eigen::MatrixXcd rho = w * w.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint().eval());
    return DensityMatrix::validated(std::move(rho));
}

namespace detail {

inline DensityMatrix random_qubit_probe(int dim, double energy, numerics::Rng& rng) {
    const int m = 1 + static_cast<int>(numerics::uniform01(rng) * (dim - 1));
    const int m_clamped = std::min(m, dim - 1);
    const double r_cap = std::min(1.0, energy / m_clamped);
    return qubit_probe_state({m_clamped, r_cap * numerics::uniform01(rng)}, dim);
}

}  // namespace detail

/// One random pure state with mean energy <= E (hard guarantee), reproducible
/// from the seed. `rejection` draws Haar-like states until one satisfies the
/// budget; `qubit_family` draws probes on span{|0>,|m>}; `mixed` alternates
/// between the two and occasionally returns the deterministic uniform probe
/// psi_{floor(2E)} so structured optima stay in the sampled family.
inline DensityMatrix sample_constrained_state(int dim, const EnergyBudget& budget,
                                              SamplingStrategy strategy, std::uint64_t seed) {
    budget.validate();
    if (dim < 2) throw numerics::ValidationError("sample_constrained_state: need dim >= 2");
    numerics::Rng rng(seed);
    if (budget.E == 0.0) {
        Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(dim);
        vac(0) = 1.0;
        return DensityMatrix::pure(vac);
    }

    constexpr int kMaxAttempts = 100000;
    auto try_rejection = [&](int attempts) -> DensityMatrix {
        for (int it = 0; it < attempts; ++it) {
            DensityMatrix rho = DensityMatrix::pure(detail::haar_like_vector(dim, rng));
            if (mean_energy(rho) <= budget.E) return rho;
        }
        throw std::runtime_error(
            "sample_constrained_state: rejection exceeded " + std::to_string(attempts) +
            " attempts; use strategy qubit_family or mixed");
    };

    switch (strategy) {
        case SamplingStrategy::rejection:
            return try_rejection(kMaxAttempts);
        case SamplingStrategy::qubit_family:
            return detail::random_qubit_probe(dim, budget.E, rng);
        case SamplingStrategy::mixed: {
            const double u = numerics::uniform01(rng);
            const int m_flat = floor_2e(budget.E);
            if (u < 0.10 && budget.E >= 0.5 && m_flat + 1 <= dim)
                return uniform_probe(m_flat, dim);
            if (u < 0.55) {
                try {
                    return try_rejection(2000);
                } catch (const std::runtime_error&) {
                    return detail::random_qubit_probe(dim, budget.E, rng);
                }
            }
            return detail::random_qubit_probe(dim, budget.E, rng);
        }
    }
    throw std::logic_error("sample_constrained_state: unknown strategy");
}

}  // namespace dephdisc::states
