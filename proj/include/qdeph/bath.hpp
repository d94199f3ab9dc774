// bath.hpp: coupling spectra, coherent-state profiles and Schrödinger-cat profiles

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qdeph/errors.hpp"
#include "qdeph/quadrature.hpp"

namespace qdeph {

// --------------------------- Tabulated functions ----------------------------

// Samples (ω_k, v_k) on a strictly increasing positive grid. Between samples the value is
// interpolated log-linearly (linearly when the neighbours differ in sign or touch zero); below
// the first sample it continues as v_0·(ω/ω_0)^endpoint_exponent and above the last sample as
// v_n·exp(−tail_decay·(ω − ω_n)).
class TabulatedFunction {
public:
    TabulatedFunction(std::vector<double> omega, std::vector<double> values, double tail_decay,
                      double endpoint_exponent = 0.0)
        : omega_(std::move(omega)), values_(std::move(values)), tail_decay_(tail_decay),
          endpoint_exponent_(endpoint_exponent) {
        if (omega_.size() != values_.size()) throw ParameterError("tabulated grid and values differ in length");
        if (omega_.size() < 2) throw ParameterError("tabulated function needs at least two samples");
        if (!(omega_.front() > 0.0)) throw ParameterError("tabulated frequencies must be > 0");
        for (std::size_t i = 1; i < omega_.size(); ++i)
            if (!(omega_[i] > omega_[i - 1]))
                throw ParameterError("tabulated frequencies must be strictly increasing (row " + std::to_string(i + 1) + ")");
        for (double v : values_)
            if (!std::isfinite(v)) throw ParameterError("tabulated values must be finite");
        if (!(tail_decay_ > 0.0)) throw ParameterError("tabulated data needs an exponential tail decay > 0");
        if (!std::isfinite(endpoint_exponent_)) throw ParameterError("endpoint exponent must be finite");
    }

    double operator()(double w) const {
        if (w <= omega_.front()) return values_.front() * std::pow(w / omega_.front(), endpoint_exponent_);
        if (w >= omega_.back()) return values_.back() * std::exp(-tail_decay_ * (w - omega_.back()));
        const auto it = std::upper_bound(omega_.begin(), omega_.end(), w);
        const auto hi = static_cast<std::size_t>(it - omega_.begin());
        const std::size_t lo = hi - 1;
        const double x = (w - omega_[lo]) / (omega_[hi] - omega_[lo]);
        const double a = values_[lo];
        const double b = values_[hi];
        if (a * b > 0.0) return std::copysign(std::exp((1.0 - x) * std::log(std::abs(a)) + x * std::log(std::abs(b))), a);
        return (1.0 - x) * a + x * b;
    }

    // Valid beyond the last sample only.
    quad::TailBound bound() const {
        return {std::abs(values_.back()) * std::exp(tail_decay_ * omega_.back()), 0.0, tail_decay_, omega_.back()};
    }

    const std::vector<double>& omega() const { return omega_; }
    const std::vector<double>& values() const { return values_; }
    double tail_decay() const { return tail_decay_; }
    double endpoint_exponent() const { return endpoint_exponent_; }

private:
    std::vector<double> omega_;
    std::vector<double> values_;
    double tail_decay_;
    double endpoint_exponent_;
};

struct CsvColumns {
    std::vector<double> x;
    std::vector<double> y;
};

// Two-column CSV with one header line.
inline CsvColumns parse_two_column_csv(std::istream& in, const std::string& origin = "<stream>") {
    CsvColumns out;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(origin + ": empty file, expected a header line");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError(origin + ":" + std::to_string(line_no) + ": expected two comma-separated columns");
        try {
            std::size_t used = 0;
            const std::string first = line.substr(0, comma);
            const std::string second = line.substr(comma + 1);
            const double x = std::stod(first, &used);
            if (first.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(first);
            const double y = std::stod(second, &used);
            if (second.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(second);
            out.x.push_back(x);
            out.y.push_back(y);
        } catch (const std::logic_error&) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": non-numeric value in '" + line + "'");
        }
    }
    for (std::size_t i = 1; i < out.x.size(); ++i)
        if (!(out.x[i] > out.x[i - 1]))
            throw ParseError(origin + ":" + std::to_string(i + 2) + ": frequencies must be strictly increasing");
    return out;
}

inline CsvColumns read_two_column_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open '" + path + "'");
    return parse_two_column_csv(in, path);
}

// ------------------------------ Spectra -------------------------------------

enum class OhmicityClass { SubOhmic, Ohmic, SuperOhmic };

inline const char* to_string(OhmicityClass c) {
    switch (c) {
        case OhmicityClass::SubOhmic: return "sub_ohmic";
        case OhmicityClass::Ohmic: return "ohmic";
        case OhmicityClass::SuperOhmic: return "super_ohmic";
    }
    return "?";
}

inline std::optional<OhmicityClass> parse_ohmicity(const std::string& name) {
    if (name == "sub_ohmic") return OhmicityClass::SubOhmic;
    if (name == "ohmic") return OhmicityClass::Ohmic;
    if (name == "super_ohmic") return OhmicityClass::SuperOhmic;
    return std::nullopt;
}

// J(ω) = λ ω^(1+μ) exp(−ω/ω_c)
struct DrudeForm {
    double lambda{0.0};
    double mu{0.0};
    double omega_c{1.0};
};

// Coupling spectrum with linear dispersion h(ω) = velocity·ω. Immutable; copies share data.
class CouplingSpectrum {
public:
    static CouplingSpectrum drude(double lambda, double mu, double omega_c, double velocity = 1.0) {
        if (!(mu > -1.0) || !std::isfinite(mu)) throw ParameterError("Drude exponent requires mu > -1 (got " + std::to_string(mu) + ")");
        if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw ParameterError("Drude cutoff requires omega_c > 0 (got " + std::to_string(omega_c) + ")");
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("Drude strength requires lambda >= 0 (got " + std::to_string(lambda) + ")");
        check_velocity(velocity);
        CouplingSpectrum s;
        s.form_ = DrudeForm{lambda, mu, omega_c};
        s.velocity_ = velocity;
        s.moment_ = lambda * std::tgamma(1.0 + mu) * std::pow(omega_c, 1.0 + mu) / velocity;
        return s;
    }

    // Tabulated coupling g(ω). The first moment ∫ g² h dω is integrated once here.
    static CouplingSpectrum tabulated(TabulatedFunction g, std::optional<OhmicityClass> declared = std::nullopt,
                                      double velocity = 1.0) {
        check_velocity(velocity);
        if (!(2.0 * g.endpoint_exponent() + 1.0 > -1.0))
            throw ParameterError("tabulated coupling endpoint exponent must exceed -1");
        CouplingSpectrum s;
        s.form_ = std::make_shared<const TabulatedFunction>(std::move(g));
        s.declared_ = declared;
        s.velocity_ = velocity;
        quad::Integrand in;
        in.base = [s](double w) { const double gw = s.g(w); return gw * gw * s.h(w); };
        in.endpoint_exponent = 2.0 * s.g_endpoint_exponent() + 1.0;
        const auto b = s.g_bound();
        in.tail = b * b * quad::TailBound{velocity, 1.0, 0.0, 0.0};
        in.breakpoints = s.breakpoints();
        s.moment_ = quad::integrate(in).value;
        return s;
    }

    bool is_drude() const { return std::holds_alternative<DrudeForm>(form_); }
    const DrudeForm& drude_form() const { return std::get<DrudeForm>(form_); }
    const TabulatedFunction& table() const { return *std::get<std::shared_ptr<const TabulatedFunction>>(form_); }
    std::optional<OhmicityClass> declared_class() const { return declared_; }
    double velocity() const { return velocity_; }

    double h(double w) const { return velocity_ * w; }

    // g(ω) = √J(ω)/h(ω); no domain check.
    double g(double w) const {
        if (const auto* d = std::get_if<DrudeForm>(&form_))
            return std::sqrt(d->lambda) * std::pow(w, 0.5 * (d->mu - 1.0)) * std::exp(-w / (2.0 * d->omega_c)) / velocity_;
        return table()(w);
    }

    double J(double w) const {
        if (const auto* d = std::get_if<DrudeForm>(&form_))
            return d->lambda * std::pow(w, 1.0 + d->mu) * std::exp(-w / d->omega_c);
        const double hg = h(w) * g(w);
        return hg * hg;
    }

    double g_endpoint_exponent() const {
        if (const auto* d = std::get_if<DrudeForm>(&form_)) return 0.5 * (d->mu - 1.0);
        return table().endpoint_exponent();
    }

    quad::TailBound g_bound() const {
        if (const auto* d = std::get_if<DrudeForm>(&form_))
            return {std::sqrt(d->lambda) / velocity_, 0.5 * (d->mu - 1.0), 1.0 / (2.0 * d->omega_c), 0.0};
        return table().bound();
    }

    std::vector<double> breakpoints() const {
        if (is_drude()) return {};
        return table().omega();
    }

    // ∫₀^∞ g²(ω) h(ω) dω, the coefficient of t in the phase integral.
    double first_moment() const { return moment_; }

    // Characteristic decay frequency of g², used to express times in cutoff units.
    double cutoff_scale() const { return 1.0 / (2.0 * g_bound().decay); }

private:
    CouplingSpectrum() = default;

    static void check_velocity(double v) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("dispersion velocity must be > 0");
    }

    std::variant<DrudeForm, std::shared_ptr<const TabulatedFunction>> form_;
    std::optional<OhmicityClass> declared_;
    double velocity_{1.0};
    double moment_{0.0};
};

inline CouplingSpectrum make_drude_spectrum(double lambda, double mu, double omega_c) {
    return CouplingSpectrum::drude(lambda, mu, omega_c);
}

inline double coupling_g(const CouplingSpectrum& spectrum, double w) {
    if (!(w > 0.0)) throw DomainError("coupling g(omega) needs omega > 0 (got " + std::to_string(w) + ")");
    return spectrum.g(w);
}

inline OhmicityClass ohmicity_class(const CouplingSpectrum& spectrum) {
    if (spectrum.is_drude()) {
        const double mu = spectrum.drude_form().mu;
        if (mu < 0.0) return OhmicityClass::SubOhmic;
        if (mu == 0.0) return OhmicityClass::Ohmic;
        return OhmicityClass::SuperOhmic;
    }
    if (const auto c = spectrum.declared_class()) return *c;
    throw ClassificationError("tabulated spectrum carries no declared ohmicity class");
}

// ------------------------- Coherent-state profiles --------------------------

// α(ω) = a·exp(−ω/(2w))
struct ExponentialProfile {
    double a{0.0};
    double w{1.0};
};

// α(ω) = a·ω^ν·exp(−ω/(2w)), ν > −1/2
struct PowerExponentialProfile {
    double a{0.0};
    double nu{0.0};
    double w{1.0};
};

// α(ω) = a·exp(−(ω − center)²/(2·width²))
struct GaussianProfile {
    double a{0.0};
    double center{0.0};
    double width{1.0};
};

// Real profile α(ω) of a coherent state |α⟩.
class AlphaProfile {
public:
    using Family = std::variant<ExponentialProfile, PowerExponentialProfile, GaussianProfile,
                                std::shared_ptr<const TabulatedFunction>>;

    static AlphaProfile zero() { return exponential(0.0, 1.0); }

    static AlphaProfile exponential(double a, double w) {
        check_amplitude(a);
        if (!(w > 0.0) || !std::isfinite(w)) throw ParameterError("exponential profile width must be > 0");
        return AlphaProfile(ExponentialProfile{a, w});
    }

    static AlphaProfile power_exponential(double a, double nu, double w) {
        check_amplitude(a);
        if (!(w > 0.0) || !std::isfinite(w)) throw ParameterError("power-exponential profile width must be > 0");
        if (!(nu > -0.5) || !std::isfinite(nu))
            throw IntegrabilityError("power-exponential profile is not square-integrable for nu <= -1/2 (got " +
                                     std::to_string(nu) + ")");
        return AlphaProfile(PowerExponentialProfile{a, nu, w});
    }

    static AlphaProfile gaussian(double a, double center, double width) {
        check_amplitude(a);
        if (!std::isfinite(center)) throw ParameterError("gaussian profile center must be finite");
        if (!(width > 0.0) || !std::isfinite(width)) throw ParameterError("gaussian profile width must be > 0");
        return AlphaProfile(GaussianProfile{a, center, width});
    }

    static AlphaProfile tabulated(TabulatedFunction table) {
        if (!(2.0 * table.endpoint_exponent() > -1.0))
            throw IntegrabilityError("tabulated profile is not square-integrable for endpoint exponent <= -1/2");
        return AlphaProfile(std::make_shared<const TabulatedFunction>(std::move(table)));
    }

    const Family& family() const { return family_; }

    double operator()(double w) const {
        return std::visit(
            [w](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, ExponentialProfile>) {
                    return f.a * std::exp(-w / (2.0 * f.w));
                } else if constexpr (std::is_same_v<T, PowerExponentialProfile>) {
                    return f.a * std::pow(w, f.nu) * std::exp(-w / (2.0 * f.w));
                } else if constexpr (std::is_same_v<T, GaussianProfile>) {
                    const double x = (w - f.center) / f.width;
                    return f.a * std::exp(-0.5 * x * x);
                } else {
                    return (*f)(w);
                }
            },
            family_);
    }

    double endpoint_exponent() const {
        if (const auto* p = std::get_if<PowerExponentialProfile>(&family_)) return p->nu;
        if (const auto* t = std::get_if<std::shared_ptr<const TabulatedFunction>>(&family_)) return (*t)->endpoint_exponent();
        return 0.0;
    }

    quad::TailBound bound() const {
        return std::visit(
            [](const auto& f) -> quad::TailBound {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, ExponentialProfile>) {
                    return {std::abs(f.a), 0.0, 1.0 / (2.0 * f.w), 0.0};
                } else if constexpr (std::is_same_v<T, PowerExponentialProfile>) {
                    return {std::abs(f.a), f.nu, 1.0 / (2.0 * f.w), 0.0};
                } else if constexpr (std::is_same_v<T, GaussianProfile>) {
                    // x²/2 ≥ x − 1/2 with x = (ω − center)/width
                    return {std::abs(f.a) * std::exp(f.center / f.width + 0.5), 0.0, 1.0 / f.width, 0.0};
                } else {
                    return f->bound();
                }
            },
            family_);
    }

    std::vector<double> breakpoints() const {
        if (const auto* t = std::get_if<std::shared_ptr<const TabulatedFunction>>(&family_)) return (*t)->omega();
        return {};
    }

    bool has_closed_form_norm() const { return !std::holds_alternative<std::shared_ptr<const TabulatedFunction>>(family_); }

private:
    explicit AlphaProfile(Family f) : family_(std::move(f)) {}

    static void check_amplitude(double a) {
        if (!std::isfinite(a)) throw ParameterError("profile amplitude must be finite");
    }

    Family family_;
};

// Schrödinger cat (|α⟩ + e^(iΦ)|−α⟩)/√N.
struct CatProfile {
    AlphaProfile alpha = AlphaProfile::zero();
    double phi{0.0};
};

inline CatProfile make_cat(AlphaProfile alpha, double phi) {
    if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
        throw ParameterError("cat phase must lie in [0, 2*pi) (got " + std::to_string(phi) + ")");
    return CatProfile{std::move(alpha), phi};
}

// ∫₀^∞ α²(ω) dω by quadrature.
inline double alpha_norm_sq_quadrature(const AlphaProfile& alpha, const quad::QuadratureTolerance& tol = {}) {
    const auto b = alpha.bound();
    if (b.scale == 0.0 && b.start == 0.0) return 0.0;
    quad::Integrand in;
    in.base = [alpha](double w) { const double a = alpha(w); return a * a; };
    in.endpoint_exponent = 2.0 * alpha.endpoint_exponent();
    in.tail = b * b;
    in.breakpoints = alpha.breakpoints();
    return quad::integrate(in, tol).value;
}

// ∫₀^∞ α²(ω) dω, closed form for the parametric families.
inline double alpha_norm_sq(const AlphaProfile& alpha) {
    return std::visit(
        [&alpha](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ExponentialProfile>) {
                return f.a * f.a * f.w;
            } else if constexpr (std::is_same_v<T, PowerExponentialProfile>) {
                return f.a * f.a * std::tgamma(2.0 * f.nu + 1.0) * std::pow(f.w, 2.0 * f.nu + 1.0);
            } else if constexpr (std::is_same_v<T, GaussianProfile>) {
                return f.a * f.a * f.width * 0.5 * std::sqrt(std::numbers::pi) * (1.0 + std::erf(f.center / f.width));
            } else {
                return alpha_norm_sq_quadrature(alpha);
            }
        },
        alpha.family());
}

inline double alpha_norm_sq(const CatProfile& cat) { return alpha_norm_sq(cat.alpha); }

}  // namespace qdeph
