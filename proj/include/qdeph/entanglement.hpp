// entanglement.hpp: depolarized Bell states under one-sided dephasing, and their negativity
//
// Qubit Q couples to the bath, qubit q evolves freely under ϵ S_q^z. Two-qubit basis order is
// |1,1⟩, |1,−1⟩, |−1,1⟩, |−1,−1⟩ with the first label belonging to Q.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "qdeph/dephasing.hpp"
#include "qdeph/errors.hpp"
#include "qdeph/hermitian_eigen.hpp"
#include "qdeph/qubit.hpp"

namespace qdeph {

using Matrix4c = MatrixNc<4>;

struct TwoQubitScenario {
    int bell_index{1};     // ρ₁ … ρ₄
    double p{0.0};         // depolarization
    double epsilon_q{0.0}; // level splitting of the free qubit q
};

inline void validate(const TwoQubitScenario& s) {
    if (s.bell_index < 1 || s.bell_index > 4)
        throw ParameterError("bell_index must be 1, 2, 3 or 4 (got " + std::to_string(s.bell_index) + ")");
    if (!(s.p >= 0.0 && s.p <= 1.0)) throw ParameterError("depolarization p must lie in [0, 1] (got " + std::to_string(s.p) + ")");
    if (!std::isfinite(s.epsilon_q)) throw ParameterError("epsilon_q must be finite");
}

struct TwoQubitDensityMatrix {
    Matrix4c entries{};

    std::complex<double> trace() const {
        std::complex<double> t = 0.0;
        for (int i = 0; i < 4; ++i) t += entries[i][i];
        return t;
    }

    double hermiticity_defect() const {
        double d = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(entries[i][k] - std::conj(entries[k][i])));
        return d;
    }
};

namespace detail {

struct BellCoherence {
    int row;
    int col;
    double sign;
    double q_phase_sign;  // free-qubit phase e^(±2iϵt)
};

// ρ₁,₂ = ½(|−1,1⟩ ± |1,−1⟩)(h.c.), ρ₃,₄ = ½(|−1,−1⟩ ± |1,1⟩)(h.c.)
inline BellCoherence bell_coherence(int index) {
    switch (index) {
        case 1: return {1, 2, 1.0, 1.0};
        case 2: return {1, 2, -1.0, 1.0};
        case 3: return {0, 3, 1.0, -1.0};
        default: return {0, 3, -1.0, -1.0};
    }
}

}  // namespace detail

inline TwoQubitDensityMatrix evolve_bell(const TwoQubitScenario& scenario, const DephasingValue& value, double t) {
    validate(scenario);
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
    const auto a = admissible_a(value);
    const auto c = detail::bell_coherence(scenario.bell_index);
    const double p = scenario.p;

    TwoQubitDensityMatrix rho;
    for (int i = 0; i < 4; ++i) rho.entries[i][i] = p / 4.0;
    rho.entries[c.row][c.row] += 0.5 * (1.0 - p);
    rho.entries[c.col][c.col] += 0.5 * (1.0 - p);
    const auto coherence =
        0.5 * (1.0 - p) * c.sign * a * std::polar(1.0, c.q_phase_sign * 2.0 * scenario.epsilon_q * t);
    rho.entries[c.row][c.col] = coherence;
    rho.entries[c.col][c.row] = std::conj(coherence);
    return rho;
}

// Transpose over the second qubit: ⟨a b|ρ^T_q|c d⟩ = ⟨a d|ρ|c b⟩.
inline Matrix4c partial_transpose_q(const Matrix4c& m) {
    Matrix4c out{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) out[2 * a + b][2 * c + d] = m[2 * a + d][2 * c + b];
    return out;
}

inline double negativity_eigen(const TwoQubitDensityMatrix& rho) {
    const auto eigenvalues = hermitian_eigenvalues<4>(partial_transpose_q(rho.entries));
    double negative = 0.0;
    for (double v : eigenvalues)
        if (v < 0.0) negative -= v;
    return negative;
}

// |A*| = p / (2(1 − p)): entangled iff |A| exceeds it.
inline double sudden_death_threshold(double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw DomainError("sudden-death threshold needs p in [0, 1) (got " + std::to_string(p) + ")");
    return p / (2.0 * (1.0 - p));
}

// N = max(0, (1 − p)/2 |A| − p/4)
inline double negativity_closed(double p, const DephasingValue& value) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("depolarization p must lie in [0, 1] (got " + std::to_string(p) + ")");
    const double m = std::abs(admissible_a(value));
    if (p == 1.0 || m <= sudden_death_threshold(p)) return 0.0;
    return 0.5 * (1.0 - p) * m - 0.25 * p;
}

}  // namespace qdeph
