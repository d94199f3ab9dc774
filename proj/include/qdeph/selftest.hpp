// selftest.hpp: analytic-oracle battery exercised by `qdeph selftest`

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "qdeph/bath.hpp"
#include "qdeph/dephasing.hpp"
#include "qdeph/entanglement.hpp"
#include "qdeph/quadrature.hpp"

namespace qdeph {

struct SelfTestCheck {
    std::string name;
    double observed{0.0};
    double expected{0.0};
    double tolerance{0.0};  // relative
    bool passed{false};
};

namespace detail {

// Relative comparison; expected values that vanish exactly fall back to an absolute 1e-12.
inline SelfTestCheck compare(std::string name, double observed, double expected, double rel_tol) {
    const bool ok = std::abs(observed - expected) <= std::max(rel_tol * std::abs(expected), 1e-12);
    return {std::move(name), observed, expected, rel_tol, ok};
}

// ∫ω^s e^(−aω) k(ωt) dω from Γ(s+1)(a − it)^(−s−1)
inline double gamma_closed_form(double s, double a, quad::Kernel kernel, double t) {
    const double g = std::tgamma(s + 1.0);
    const auto z = g * std::pow(std::complex<double>(a, -t), -(s + 1.0));
    const double one = g * std::pow(a, -(s + 1.0));
    switch (kernel) {
        case quad::Kernel::One: return one;
        case quad::Kernel::Cos: return z.real();
        case quad::Kernel::Sin: return z.imag();
        case quad::Kernel::OneMinusCos: return one - z.real();
    }
    return 0.0;
}

}  // namespace detail

inline std::vector<SelfTestCheck> run_selftest() {
    std::vector<SelfTestCheck> checks;

    for (double s : {0.0, 0.5, 1.0, 2.0}) {
        for (auto kernel : {quad::Kernel::One, quad::Kernel::Cos, quad::Kernel::Sin, quad::Kernel::OneMinusCos}) {
            for (double t : {0.1, 1.0, 10.0}) {
                quad::Integrand in;
                in.base = [s](double w) { return std::pow(w, s) * std::exp(-w); };
                in.endpoint_exponent = s;
                in.tail = {1.0, s, 1.0, 0.0};
                in.kernel = kernel;
                in.time = t;
                const double got = quad::integrate(in).value;
                checks.push_back(detail::compare("quadrature s=" + std::to_string(s) + " kernel=" + quad::to_string(kernel) +
                                                     " t=" + std::to_string(t),
                                                 got, detail::gamma_closed_form(s, 1.0, kernel, t), 1e-8));
            }
        }
    }

    for (double t : {0.1, 1.0, 10.0, 100.0}) {
        const auto ohmic = CouplingSpectrum::drude(0.1, 0.0, 1.0);
        checks.push_back(detail::compare("ohmic A0 t=" + std::to_string(t), a0(ohmic, t), std::pow(1.0 + t * t, -0.2), 1e-8));
        const auto super = CouplingSpectrum::drude(0.1, 1.0, 1.0);
        checks.push_back(detail::compare("mu=1 A0 t=" + std::to_string(t), a0(super, t),
                                         std::exp(-0.4 * t * t / (1.0 + t * t)), 1e-8));
    }
    checks.push_back(detail::compare("mu=1 long-time A0", long_time_a0(CouplingSpectrum::drude(0.1, 1.0, 1.0)).value,
                                     std::exp(-0.4), 1e-14));

    const auto spectrum = CouplingSpectrum::drude(0.25, 1.0, 1.0);
    const auto alpha = AlphaProfile::exponential(0.5, 1.0);
    const double e = std::exp(-0.5);
    const double bracket0 = std::exp(-1.0) + 1.0 + 2.0 * std::cos(0.5);
    const double bracket_pi = -std::exp(-1.0) - 1.0 + 2.0 * std::cos(0.5);
    checks.push_back(detail::compare("cat |A| phi=0 t=1", std::abs(dephasing_cat(make_cat(alpha, 0.0), spectrum, {}, 1.0).a),
                                     e * bracket0 / (2.0 + 2.0 * e), 1e-8));
    checks.push_back(detail::compare("cat |A| phi=pi t=1",
                                     std::abs(dephasing_cat(make_cat(alpha, std::numbers::pi), spectrum, {}, 1.0).a),
                                     e * bracket_pi / (2.0 - 2.0 * e), 1e-8));

    for (double p : {0.0, 0.2, 0.5}) {
        for (double m : {0.3, 0.8, 1.0}) {
            for (int bell = 1; bell <= 4; ++bell) {
                const auto value = DephasingValue::from_complex(std::polar(m, 0.7));
                const double closed = negativity_closed(p, value);
                const double eigen = negativity_eigen(evolve_bell({bell, p, 0.3}, value, 1.5));
                const bool ok = std::abs(closed - eigen) <= 1e-10;
                checks.push_back({"negativity bell=" + std::to_string(bell) + " p=" + std::to_string(p) +
                                      " |A|=" + std::to_string(m),
                                  eigen, closed, 1e-10, ok});
            }
        }
    }
    return checks;
}

}  // namespace qdeph
