// qubit.hpp: single-qubit reduced density matrix, purity and coherence factor

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "qdeph/dephasing.hpp"
#include "qdeph/errors.hpp"

namespace qdeph {

using Matrix2c = std::array<std::array<std::complex<double>, 2>, 2>;

// |θ, φ⟩ = cos(θ/2)|1⟩ + e^(iφ) sin(θ/2)|−1⟩
struct BlochState {
    double theta{std::numbers::pi / 2.0};
    double phi{0.0};

    std::complex<double> b_up() const { return std::cos(0.5 * theta); }
    std::complex<double> b_down() const { return std::polar(std::sin(0.5 * theta), phi); }
};

inline BlochState make_bloch_state(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw ParameterError("polar angle theta must lie in [0, pi] (got " + std::to_string(theta) + ")");
    if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
        throw ParameterError("azimuthal angle phi must lie in [0, 2*pi) (got " + std::to_string(phi) + ")");
    return BlochState{theta, phi};
}

// Basis order (|1⟩, |−1⟩).
struct QubitDensityMatrix {
    Matrix2c entries{};

    std::complex<double> trace() const { return entries[0][0] + entries[1][1]; }

    double trace_of_square() const {
        std::complex<double> sum = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) sum += entries[i][k] * entries[k][i];
        return sum.real();
    }

    double hermiticity_defect() const {
        double d = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) d = std::max(d, std::abs(entries[i][k] - std::conj(entries[k][i])));
        return d;
    }

    double min_eigenvalue() const {
        const double a = entries[0][0].real();
        const double d = entries[1][1].real();
        const double b = std::abs(entries[0][1]);
        return 0.5 * (a + d) - std::hypot(0.5 * (a - d), b);
    }
};

// |A| may exceed one by at most this much before it is treated as an integration failure.
inline constexpr double coherence_slack = 1e-6;

// A(t) as used by the density-matrix builders: values with 1 < |A| ≤ 1 + slack are pulled back
// onto the unit circle, anything larger is rejected.
inline std::complex<double> admissible_a(const DephasingValue& value) {
    const double modulus = std::abs(value.a);
    if (!std::isfinite(modulus) || modulus > 1.0 + coherence_slack)
        throw ParameterError("dephasing value |A| = " + std::to_string(modulus) + " exceeds 1");
    if (modulus > 1.0) return value.a / modulus;
    return value.a;
}

inline QubitDensityMatrix density_matrix(const BlochState& state, const DephasingValue& value) {
    const auto a = admissible_a(value);
    const double c = std::cos(0.5 * state.theta);
    const double s = std::sin(0.5 * state.theta);
    const auto off = 0.5 * a * std::sin(state.theta) * std::polar(1.0, -state.phi);
    QubitDensityMatrix rho;
    rho.entries[0][0] = c * c;
    rho.entries[1][1] = s * s;
    rho.entries[0][1] = off;
    rho.entries[1][0] = std::conj(off);
    return rho;
}

// P = ½(|A|² − 1) sin²θ + 1
inline double purity(const BlochState& state, const DephasingValue& value) {
    const double m = std::abs(admissible_a(value));
    const double s = std::sin(state.theta);
    return 0.5 * (m * m - 1.0) * s * s + 1.0;
}

inline double coherence(const DephasingValue& value) { return std::abs(value.a); }

}  // namespace qdeph
