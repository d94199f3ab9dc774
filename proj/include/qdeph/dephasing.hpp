// dephasing.hpp: dephasing function A(t) of a qubit coupled to a bosonic bath
//
// For a bath prepared in the cat state (|α⟩ + e^(iΦ)|−α⟩)/√N with real α(ω),
//
//   A(t) = N⁻¹ A₀(t) e^(−2iεt) { A₊(t) e^(−iΦ) + A₋(t) e^(iΦ) + 2 cos 4Λ_α(t) },
//
//   A₀(t) = exp{−4 ∫ g² [1 − cos ht]},   Λ_α(t) = ∫ α g sin ht,
//   A±(t) = exp{−2 ∫ α² ∓ 4 ∫ α g [1 − cos ht]},   N = 2 + 2 cos Φ exp{−2 ∫ α²},
//
// and for a coherent state |α⟩ the modulus reduces to A₀(t).

#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "qdeph/bath.hpp"
#include "qdeph/errors.hpp"
#include "qdeph/quadrature.hpp"

namespace qdeph {

struct QubitSpec {
    double epsilon{0.0};  // levels ±ε
};

enum class BathState { Cat, Coherent, External };

struct DephasingParts {
    double a0{1.0};
    double a_plus{1.0};
    double a_minus{1.0};
    double lambda_alpha{0.0};
    double norm{4.0};
    double phase{0.0};  // −2εt
};

struct DephasingValue {
    std::complex<double> a{1.0, 0.0};
    DephasingParts parts;
    BathState origin{BathState::External};
    double phi{0.0};  // cat phase Φ, meaningful for BathState::Cat

    // Wraps a bare value of A(t), e.g. one read from a file.
    static DephasingValue from_complex(std::complex<double> a) {
        DephasingValue v;
        v.a = a;
        v.parts.a0 = std::abs(a);
        v.parts.phase = std::arg(a);
        return v;
    }

    // Recomputes A(t) from the stored parts with the cat-state formula.
    std::complex<double> recompose() const {
        using namespace std::complex_literals;
        const auto& p = parts;
        const std::complex<double> bracket =
            p.a_plus * std::exp(-1i * phi) + p.a_minus * std::exp(1i * phi) + 2.0 * std::cos(4.0 * p.lambda_alpha);
        return p.a0 / p.norm * std::exp(1i * p.phase) * bracket;
    }
};

enum class Sign { Plus, Minus };

inline constexpr double degenerate_norm_threshold = 1e-9;
inline constexpr double max_exponent = 700.0;

namespace detail {

inline void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0 (got " + std::to_string(t) + ")");
}

inline quad::Integrand spectral_integrand(const CouplingSpectrum& spectrum, quad::Kernel kernel, double t) {
    quad::Integrand in;
    in.base = [spectrum](double w) { const double g = spectrum.g(w); return g * g; };
    in.endpoint_exponent = 2.0 * spectrum.g_endpoint_exponent();
    in.tail = spectrum.g_bound() * spectrum.g_bound();
    in.kernel = kernel;
    in.time = t;
    in.velocity = spectrum.velocity();
    in.breakpoints = spectrum.breakpoints();
    return in;
}

inline quad::Integrand overlap_integrand(const AlphaProfile& alpha, const CouplingSpectrum& spectrum,
                                         quad::Kernel kernel, double t) {
    quad::Integrand in;
    in.base = [alpha, spectrum](double w) { return alpha(w) * spectrum.g(w); };
    in.endpoint_exponent = alpha.endpoint_exponent() + spectrum.g_endpoint_exponent();
    in.tail = alpha.bound() * spectrum.g_bound();
    in.kernel = kernel;
    in.time = t;
    in.velocity = spectrum.velocity();
    in.breakpoints = alpha.breakpoints();
    const auto more = spectrum.breakpoints();
    in.breakpoints.insert(in.breakpoints.end(), more.begin(), more.end());
    return in;
}

// ∫ α g [1 − cos ht]
inline double alpha_g_one_minus_cos(const AlphaProfile& alpha, const CouplingSpectrum& spectrum, double t,
                                    const quad::QuadratureTolerance& tol) {
    return quad::integrate(overlap_integrand(alpha, spectrum, quad::Kernel::OneMinusCos, t), tol).value;
}

inline double saturating_exp(double exponent, const char* what) {
    if (!(std::abs(exponent) <= max_exponent))
        throw SaturationError(std::string(what) + " exponent " + std::to_string(exponent) + " outside [-700, 700]");
    return std::exp(exponent);
}

}  // namespace detail

// N = 2 + 2 cos Φ exp(−2 ∫α²)
inline double norm_constant(const CatProfile& cat) {
    const double n = 2.0 + 2.0 * std::cos(cat.phi) * std::exp(-2.0 * alpha_norm_sq(cat.alpha));
    if (!(n >= degenerate_norm_threshold))
        throw DegenerateCatError("cat normalization N = " + std::to_string(n) + " is below 1e-9");
    return n;
}

inline double lambda_alpha(const AlphaProfile& alpha, const CouplingSpectrum& spectrum, double t,
                           const quad::QuadratureTolerance& tol = {}) {
    detail::check_time(t);
    return quad::integrate(detail::overlap_integrand(alpha, spectrum, quad::Kernel::Sin, t), tol).value;
}

inline double lambda_alpha(const CatProfile& cat, const CouplingSpectrum& spectrum, double t,
                           const quad::QuadratureTolerance& tol = {}) {
    return lambda_alpha(cat.alpha, spectrum, t, tol);
}

inline double a0(const CouplingSpectrum& spectrum, double t, const quad::QuadratureTolerance& tol = {}) {
    detail::check_time(t);
    const double decay = quad::integrate(detail::spectral_integrand(spectrum, quad::Kernel::OneMinusCos, t), tol).value;
    return std::exp(-4.0 * decay);
}

inline double a_pm(const CatProfile& cat, const CouplingSpectrum& spectrum, double t, Sign sign,
                   const quad::QuadratureTolerance& tol = {}) {
    detail::check_time(t);
    const double overlap = detail::alpha_g_one_minus_cos(cat.alpha, spectrum, t, tol);
    const double sgn = sign == Sign::Plus ? 1.0 : -1.0;
    return detail::saturating_exp(-2.0 * alpha_norm_sq(cat.alpha) - sgn * 4.0 * overlap, sign == Sign::Plus ? "A+" : "A-");
}

inline DephasingValue dephasing_cat(const CatProfile& cat, const CouplingSpectrum& spectrum, const QubitSpec& qubit,
                                    double t, const quad::QuadratureTolerance& tol = {}) {
    detail::check_time(t);
    const double norm = norm_constant(cat);
    const double alpha_sq = alpha_norm_sq(cat.alpha);
    const double overlap = detail::alpha_g_one_minus_cos(cat.alpha, spectrum, t, tol);

    DephasingValue v;
    v.origin = BathState::Cat;
    v.phi = cat.phi;
    auto& p = v.parts;
    p.norm = norm;
    p.a0 = a0(spectrum, t, tol);
    p.lambda_alpha = lambda_alpha(cat.alpha, spectrum, t, tol);
    p.a_plus = detail::saturating_exp(-2.0 * alpha_sq - 4.0 * overlap, "A+");
    p.a_minus = detail::saturating_exp(-2.0 * alpha_sq + 4.0 * overlap, "A-");
    p.phase = -2.0 * qubit.epsilon * t;

    // Written so that at t = 0 the real part of the bracket reproduces N bit for bit.
    const double c = std::cos(cat.phi);
    const double s = std::sin(cat.phi);
    const std::complex<double> bracket{2.0 * std::cos(4.0 * p.lambda_alpha) + (p.a_plus + p.a_minus) * c,
                                       (p.a_minus - p.a_plus) * s};
    v.a = bracket / norm * p.a0 * std::polar(1.0, p.phase);
    return v;
}

// A(t) = e^(−2iεt) e^(−4iΛ_α(t)) A₀(t)
inline DephasingValue dephasing_coherent(const AlphaProfile& alpha, const CouplingSpectrum& spectrum,
                                         const QubitSpec& qubit, double t, const quad::QuadratureTolerance& tol = {}) {
    detail::check_time(t);
    DephasingValue v;
    v.origin = BathState::Coherent;
    auto& p = v.parts;
    p.a0 = a0(spectrum, t, tol);
    p.lambda_alpha = lambda_alpha(alpha, spectrum, t, tol);
    p.norm = 1.0;
    p.phase = -2.0 * qubit.epsilon * t;
    v.a = std::polar(p.a0, p.phase - 4.0 * p.lambda_alpha);
    return v;
}

struct LongTimeLimit {
    bool vanishes{false};
    double value{0.0};
};

// lim A₀(t) = exp(−4 ∫ g²) for t → ∞; the integral diverges unless μ > 0.
inline LongTimeLimit long_time_a0(const CouplingSpectrum& spectrum) {
    if (!spectrum.is_drude()) throw UnsupportedSpectrum("long-time limit needs an analytic (Drude) spectrum");
    const auto& d = spectrum.drude_form();
    if (d.mu <= 0.0) return {true, 0.0};
    const double v = spectrum.velocity();
    return {false, std::exp(-4.0 * d.lambda * std::tgamma(d.mu) * std::pow(d.omega_c, d.mu) / (v * v))};
}

// lim |A(t)| for t → ∞ with the bath in a cat state. Λ_α(t) → 0 and 1 − cos ht averages to 1.
inline LongTimeLimit long_time_cat_coherence(const CatProfile& cat, const CouplingSpectrum& spectrum,
                                             const quad::QuadratureTolerance& tol = {}) {
    const auto limit = long_time_a0(spectrum);
    if (limit.vanishes) return limit;
    const double norm = norm_constant(cat);
    const double alpha_sq = alpha_norm_sq(cat.alpha);
    const double overlap = quad::integrate(detail::overlap_integrand(cat.alpha, spectrum, quad::Kernel::One, 0.0), tol).value;
    const double plus = detail::saturating_exp(-2.0 * alpha_sq - 4.0 * overlap, "A+");
    const double minus = detail::saturating_exp(-2.0 * alpha_sq + 4.0 * overlap, "A-");
    const std::complex<double> bracket{2.0 + (plus + minus) * std::cos(cat.phi), (minus - plus) * std::sin(cat.phi)};
    return {false, limit.value / norm * std::abs(bracket)};
}

// Λ_{±1}(t) = ±εt − ∫ g² {ht − sin ht}
inline double phase_lambda(const CouplingSpectrum& spectrum, const QubitSpec& qubit, double t, int branch,
                           const quad::QuadratureTolerance& tol = {}) {
    detail::check_time(t);
    if (branch != 1 && branch != -1) throw ParameterError("phase branch must be +1 or -1");
    const double oscillating = quad::integrate(detail::spectral_integrand(spectrum, quad::Kernel::Sin, t), tol).value;
    return branch * qubit.epsilon * t - (t * spectrum.first_moment() - oscillating);
}

}  // namespace qdeph
