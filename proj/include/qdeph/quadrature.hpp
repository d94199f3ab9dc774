// quadrature.hpp: semi-infinite integrals ∫₀^∞ f(ω) k(h(ω)t) dω for exponentially damped f
//
// The integration range is truncated at a point Ω where a declared tail bound certifies the
// remainder, the interval [0, Ω] is split into panels no wider than a quarter oscillation of
// the kernel, the panel touching ω = 0 is refined geometrically, and the panel with the largest
// Gauss-Kronrod (7, 15) error estimate is bisected until the total estimate meets tolerance.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "qdeph/errors.hpp"

namespace qdeph::quad {

enum class Kernel { One, Cos, Sin, OneMinusCos };

inline const char* to_string(Kernel k) {
    switch (k) {
        case Kernel::One: return "one";
        case Kernel::Cos: return "cos";
        case Kernel::Sin: return "sin";
        case Kernel::OneMinusCos: return "one_minus_cos";
    }
    return "?";
}

// |f(ω)| ≤ scale · ω^power · exp(−decay·ω) for every ω ≥ start.
struct TailBound {
    double scale{1.0};
    double power{0.0};
    double decay{1.0};
    double start{0.0};

    // Upper bound of ∫_Ω^∞ scale·ω^power·e^(−decay·ω) dω, valid for Ω ≥ start and Ω > power/decay.
    double integral_from(double omega) const {
        if (scale == 0.0) return 0.0;
        const double head = scale * std::exp(power * std::log(omega) - decay * omega);
        if (power <= 0.0) return head / decay;
        const double rate = decay - power / omega;
        if (rate <= 0.0) return std::numeric_limits<double>::infinity();
        return head / rate;
    }
};

// Bound of a product of two bounded functions.
inline TailBound operator*(const TailBound& a, const TailBound& b) {
    return TailBound{a.scale * b.scale, a.power + b.power, a.decay + b.decay, std::max(a.start, b.start)};
}

struct Integrand {
    std::function<double(double)> base;
    double endpoint_exponent{0.0};  // f(ω) ~ c·ω^s as ω → 0
    TailBound tail;
    Kernel kernel{Kernel::One};
    double time{0.0};
    double velocity{1.0};  // linear dispersion h(ω) = velocity·ω
    std::vector<double> breakpoints;  // known kinks of f (tabulated data)
};

struct QuadratureTolerance {
    double abs_tol{1e-10};
    double rel_tol{1e-9};
    std::size_t max_evaluations{1'000'000};
    double truncation_factor{1.0};  // multiplies the certified truncation point
};

struct QuadratureResult {
    double value{0.0};
    double error_estimate{0.0};
    std::size_t evaluations{0};
    double truncation{0.0};
};

// Largest value of ω·t (in units of 1/decay) the engine accepts; beyond it use long-time limits.
inline constexpr double max_oscillations_per_decay = 1e6;

inline double kernel_value(Kernel kernel, double x) {
    switch (kernel) {
        case Kernel::One: return 1.0;
        case Kernel::Cos: return std::cos(x);
        case Kernel::Sin: return std::sin(x);
        case Kernel::OneMinusCos: {
            const double s = std::sin(0.5 * x);
            return 2.0 * s * s;
        }
    }
    return 0.0;
}

// Exponent of f·k near ω = 0 for t > 0.
inline double effective_exponent(Kernel kernel, double s) {
    switch (kernel) {
        case Kernel::Sin: return s + 1.0;
        case Kernel::OneMinusCos: return s + 2.0;
        default: return s;
    }
}

namespace detail {

// Gauss-Kronrod 15-point abscissae on [−1, 1] (non-negative half), Gauss 7-point at odd indices.
inline constexpr std::array<double, 8> xgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a{0.0};
    double b{0.0};
    double value{0.0};
    double error{0.0};
};

struct ByError {
    bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

template <typename F>
Panel gauss_kronrod(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * wgk[7];
    double gauss = fc * wg[3];
    double absolute = std::abs(kronrod);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += wgk[j] * (f1 + f2);
        absolute += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
    }
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * absolute * half;
    return Panel{a, b, kronrod * half, std::max(std::abs(kronrod - gauss) * half, roundoff)};
}

// Neumaier-compensated sum.
class Accumulator {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_{0.0};
    double carry_{0.0};
};

inline double truncation_point(const TailBound& tail, double target) {
    if (tail.scale == 0.0) return tail.start;
    double omega = std::max({tail.start, 1.0 / tail.decay, tail.power > 0.0 ? 2.0 * tail.power / tail.decay : 0.0});
    const double step = 1.0 / tail.decay;
    for (int i = 0; i < 100000 && !(tail.integral_from(omega) <= target); ++i) omega += step;
    return omega;
}

}  // namespace detail

inline QuadratureResult integrate(const Integrand& in, const QuadratureTolerance& tol = {}) {
    if (!(tol.abs_tol > 0.0 || tol.rel_tol > 0.0) || tol.abs_tol < 0.0 || tol.rel_tol < 0.0)
        throw ParameterError("quadrature tolerance needs abs_tol > 0 or rel_tol > 0");
    if (!(in.time >= 0.0) || !std::isfinite(in.time)) throw DomainError("integration time must be finite and >= 0");
    if (!(in.tail.decay > 0.0)) throw DomainError("tail decay rate must be > 0");
    if (!(in.velocity > 0.0)) throw DomainError("dispersion velocity must be > 0");

    const double s = in.endpoint_exponent;
    const double min_exponent = in.kernel == Kernel::OneMinusCos ? -3.0 : in.kernel == Kernel::Sin ? -2.0 : -1.0;
    if (!(s > min_exponent))
        throw DomainError("endpoint exponent " + std::to_string(s) + " not integrable for kernel " +
                          to_string(in.kernel));

    const double frequency = in.velocity * in.time;
    const bool vanishing_kernel = in.kernel == Kernel::Sin || in.kernel == Kernel::OneMinusCos;
    if (frequency == 0.0 && vanishing_kernel) return QuadratureResult{};
    const Kernel kernel = frequency == 0.0 ? Kernel::One : in.kernel;
    const double exponent = frequency == 0.0 ? s : effective_exponent(kernel, s);
    if (!(exponent > -1.0))
        throw DomainError("endpoint exponent " + std::to_string(s) + " not integrable for kernel " +
                          to_string(in.kernel) + " at t = 0");
    if (frequency / in.tail.decay > max_oscillations_per_decay)
        throw DomainError("time " + std::to_string(in.time) + " beyond the quadrature range; use long-time limits");

    const double kernel_max = kernel == Kernel::OneMinusCos ? 2.0 : 1.0;
    const double small_target = (tol.abs_tol > 0.0 ? tol.abs_tol : tol.rel_tol * 1e-6) * 1e-3;

    double omega_max = detail::truncation_point(in.tail, small_target / kernel_max) * tol.truncation_factor;
    if (!(omega_max > 0.0)) return QuadratureResult{};
    const double tail_error = kernel_max * in.tail.integral_from(omega_max);

    std::size_t evaluations = 0;
    const auto f = [&](double w) {
        ++evaluations;
        return in.base(w) * kernel_value(kernel, frequency * w);
    };

    double width = omega_max / 16.0;
    if (frequency > 0.0) width = std::min(width, std::numbers::pi / (2.0 * frequency));
    const double estimated = 15.0 * std::ceil(omega_max / width);
    if (estimated > static_cast<double>(tol.max_evaluations))
        throw ConvergenceError("quadrature needs about " + std::to_string(static_cast<long long>(estimated)) +
                               " evaluations, budget is " + std::to_string(tol.max_evaluations));

    // Geometric refinement toward ω = 0; the innermost piece [0, x] uses f·k ≈ c·ω^e.
    std::vector<double> edges;
    double inner = width;
    double remainder = 0.0;
    for (int k = 0; k < 1070; ++k) {
        const double value = f(inner);
        remainder = value * inner / (exponent + 1.0);
        if (!std::isfinite(remainder)) throw ConvergenceError("integrand not finite near the origin");
        if (k >= 2 && std::abs(remainder) <= small_target) break;
        if (inner < std::numeric_limits<double>::min() * 1e10) break;
        inner *= 0.5;
    }
    for (double x = inner; x < width; x *= 2.0) edges.push_back(x);
    for (double x = width; x < omega_max; x += width) edges.push_back(x);
    edges.push_back(omega_max);
    for (double bp : in.breakpoints)
        if (bp > inner && bp < omega_max) edges.push_back(bp);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::ByError> active;
    std::vector<detail::Panel> frozen;
    double total_value = remainder;
    double total_error = std::abs(remainder) + tail_error;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const auto p = detail::gauss_kronrod(f, edges[i], edges[i + 1]);
        total_value += p.value;
        total_error += p.error;
        active.push(p);
    }

    const auto budget = [&](double value) { return std::max(tol.abs_tol, tol.rel_tol * std::abs(value)); };

    std::size_t splits = 0;
    while (total_error > budget(total_value) && !active.empty()) {
        if (evaluations > tol.max_evaluations)
            throw ConvergenceError("quadrature evaluation budget of " + std::to_string(tol.max_evaluations) +
                                   " exhausted (error estimate " + std::to_string(total_error) + ")");
        const auto worst = active.top();
        active.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * std::abs(mid)) {
            frozen.push_back(worst);
            continue;
        }
        const auto left = detail::gauss_kronrod(f, worst.a, mid);
        const auto right = detail::gauss_kronrod(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);
        if (++splits % 1024 == 0) {
            // Refresh the running sums so cancellation drift never stalls the loop.
            detail::Accumulator v, e;
            v.add(remainder);
            e.add(std::abs(remainder) + tail_error);
            auto copy = active;
            for (; !copy.empty(); copy.pop()) { v.add(copy.top().value); e.add(copy.top().error); }
            for (const auto& p : frozen) { v.add(p.value); e.add(p.error); }
            total_value = v.value();
            total_error = e.value();
        }
    }

    std::vector<detail::Panel> panels = std::move(frozen);
    for (; !active.empty(); active.pop()) panels.push_back(active.top());
    std::sort(panels.begin(), panels.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    detail::Accumulator value_sum, error_sum;
    value_sum.add(remainder);
    error_sum.add(std::abs(remainder) + tail_error);
    for (const auto& p : panels) {
        value_sum.add(p.value);
        error_sum.add(p.error);
    }
    QuadratureResult result{value_sum.value(), error_sum.value(), evaluations, omega_max};
    if (result.error_estimate > budget(result.value))
        throw ConvergenceError("quadrature could not reach tolerance (error estimate " +
                               std::to_string(result.error_estimate) + ")");
    return result;
}

}  // namespace qdeph::quad
