#include "wealthmix/mixture.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "wealthmix/error.hpp"
#include "wealthmix/quadrature.hpp"
#include "wealthmix/random.hpp"
#include "wealthmix/specfun.hpp"

namespace wealthmix {

namespace {

constexpr double kTinyKappa = 1e-5;

void require(bool condition, const char* message) {
    if (!condition) throw std::domain_error(message);
}

}  // namespace

Family family_of(const PositiveBranch& branch) {
    if (std::holds_alternative<SMParams>(branch)) return Family::SinghMaddala;
    if (std::holds_alternative<DagumParams>(branch)) return Family::Dagum;
    return Family::KappaGen;
}

std::string family_name(Family family) {
    switch (family) {
        case Family::SinghMaddala: return "sm";
        case Family::Dagum: return "dagum";
        case Family::KappaGen: return "kgen";
    }
    throw std::logic_error("family_name: unhandled family");
}

Family family_from_name(const std::string& name) {
    if (name == "sm") return Family::SinghMaddala;
    if (name == "dagum") return Family::Dagum;
    if (name == "kgen") return Family::KappaGen;
    throw std::domain_error("unknown family '" + name + "' (expected sm, dagum, or kgen)");
}

MixtureParams::MixtureParams(double theta1, double theta2, WeibullNegParams weibull,
                             PositiveBranch positive)
    : theta1(theta1), theta2(theta2), weibull(weibull), positive(std::move(positive)) {
    require(std::isfinite(theta1) && theta1 >= 0.0, "theta1 must be finite and >= 0");
    require(std::isfinite(theta2) && theta2 >= 0.0, "theta2 must be finite and >= 0");
    require(theta1 + theta2 <= 1.0, "theta1 + theta2 must not exceed 1");
}

std::optional<double> mixture_pdf(const MixtureParams& m, double w) {
    require(std::isfinite(w), "mixture_pdf: w must be finite");
    if (w == 0.0) return std::nullopt;
    if (w < 0.0) {
        if (m.theta1 == 0.0) return 0.0;
        return m.theta1 * weibull_neg_pdf(m.weibull, w);
    }
    const double theta3 = m.theta3();
    if (theta3 == 0.0) return 0.0;
    return theta3 * branch_pdf(m.positive, w);
}

double atom_mass(const MixtureParams& m) { return m.theta2; }

double mixture_cdf(const MixtureParams& m, double w) {
    require(std::isfinite(w), "mixture_cdf: w must be finite");
    if (w < 0.0) {
        if (m.theta1 == 0.0) return 0.0;
        return m.theta1 * weibull_neg_cdf_branch(m.weibull, w);
    }
    if (w == 0.0) return m.rho();
    const double theta3 = m.theta3();
    if (theta3 == 0.0) return 1.0;
    return 1.0 - theta3 * branch_survivor(m.positive, w);
}

double mixture_quantile(const MixtureParams& m, double u) {
    require(std::isfinite(u) && u > 0.0 && u < 1.0, "mixture_quantile: u must lie in (0,1)");
    if (u < m.theta1)
        return -m.weibull.lambda * std::pow(std::log(m.theta1 / u), 1.0 / m.weibull.s);
    const double rho = m.rho();
    if (u <= rho) return 0.0;
    double v = (u - rho) / (1.0 - rho);
    if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    return branch_quantile(m.positive, v);
}

double mixture_moment(const MixtureParams& m, int r) {
    require(r >= 1, "mixture_moment: order must be a positive integer");
    double mu = 0.0;
    if (m.theta1 > 0.0) mu += m.theta1 * weibull_neg_moment(m.weibull, r);
    const double theta3 = m.theta3();
    if (theta3 > 0.0) mu += theta3 * branch_moment(m.positive, r);
    return mu;
}

double mixture_mean(const MixtureParams& m) { return mixture_moment(m, 1); }

namespace {

// Partial mean over the negative component, -lambda*theta1*Gamma(1+1/s);
// this constant is the full Lorenz deficit carried across the plateau.
double negative_deficit(const MixtureParams& m) {
    if (m.theta1 == 0.0) return 0.0;
    return -m.weibull.lambda * m.theta1 * gamma_fn(1.0 + 1.0 / m.weibull.s);
}

// Partial mean of the positive component up to population share u > rho,
// i.e. the integral of the quantile function over (rho, u].
double positive_partial_mean(const MixtureParams& m, double u) {
    const double theta3 = m.theta3();
    if (theta3 == 0.0) return 0.0;
    auto unit = [](double z) { return std::min(std::max(z, 0.0), 1.0); };
    return std::visit(
        [&](const auto& pp) -> double {
            using T = std::decay_t<decltype(pp)>;
            const double v = unit((1.0 - u) / theta3);
            if constexpr (std::is_same_v<T, SMParams>) {
                const double c = pp.q - 1.0 / pp.a;
                const double d = 1.0 + 1.0 / pp.a;
                const double w = unit(-std::expm1(std::log(v) / pp.q));
                return theta3 * pp.b * pp.q * beta_fn(c, d) *
                       regularized_incomplete_beta(w, d, c);
            } else if constexpr (std::is_same_v<T, DagumParams>) {
                const double c = pp.p + 1.0 / pp.a;
                const double d = 1.0 - 1.0 / pp.a;
                const double z = unit(std::exp(std::log((u - m.rho()) / theta3) / pp.p));
                return theta3 * pp.b * pp.p * incomplete_beta(z, c, d);
            } else {
                const double al = pp.alpha, be = pp.beta, k = pp.kappa;
                const double d = 1.0 + 1.0 / al;
                if (k < kTinyKappa) {
                    const double q_tail = regularized_gamma_q(d, -std::log(v));
                    return theta3 * be * gamma_fn(d) * (1.0 - q_tail);
                }
                const double c = 1.0 / (2.0 * k) - 1.0 / (2.0 * al);
                const double w = unit(-std::expm1(2.0 * k * std::log(v)));
                return theta3 * be * std::pow(2.0 * k, -d) * beta_fn(c, d) *
                       regularized_incomplete_beta(w, d, c);
            }
        },
        m.positive);
}

}  // namespace

LorenzPoint mixture_lorenz(const MixtureParams& m, double u) {
    require(std::isfinite(u) && u >= 0.0 && u <= 1.0, "mixture_lorenz: u must lie in [0,1]");
    const double mu1 = mixture_mean(m);
    if (!(mu1 > 0.0)) throw mean_sign_error(mu1);
    if (u == 0.0) return {0.0, 0.0};
    const double rho = m.rho();
    if (u < m.theta1) {
        const double x = std::log(m.theta1 / u);
        const double partial =
            -m.weibull.lambda * m.theta1 * upper_incomplete_gamma(1.0 + 1.0 / m.weibull.s, x);
        return {u, partial / mu1};
    }
    if (u <= rho) return {u, negative_deficit(m) / mu1};
    return {u, (negative_deficit(m) + positive_partial_mean(m, u)) / mu1};
}

GiniValue mixture_gini_closed(const MixtureParams& m) {
    const double mu1 = mixture_mean(m);
    if (!(mu1 > 0.0)) throw mean_sign_error(mu1);
    const double theta3 = m.theta3();
    const double t_cross = std::visit(
        [&](const auto& pp) -> double {
            using T = std::decay_t<decltype(pp)>;
            if (theta3 == 0.0) return 0.0;
            if constexpr (std::is_same_v<T, SMParams>) {
                const double c = 2.0 * pp.q - 1.0 / pp.a;
                if (!(c > 0.0)) throw moment_divergence(1, pp.a * pp.q, "Singh-Maddala");
                return theta3 * theta3 * pp.b * pp.q * beta_fn(c, 1.0 + 1.0 / pp.a);
            } else if constexpr (std::is_same_v<T, DagumParams>) {
                const double d = 1.0 - 1.0 / pp.a;
                if (!(d > 0.0)) throw moment_divergence(1, pp.a * pp.p, "Dagum");
                return theta3 * theta3 * pp.b * pp.p *
                       (beta_fn(pp.p + 1.0 / pp.a, d) - beta_fn(2.0 * pp.p + 1.0 / pp.a, d));
            } else {
                const double al = pp.alpha, be = pp.beta, k = pp.kappa;
                const double d = 1.0 + 1.0 / al;
                if (k < kTinyKappa)
                    return theta3 * theta3 * be * std::pow(2.0, -d) * gamma_fn(d);
                const double c = 1.0 / k - 1.0 / (2.0 * al);
                if (!(c > 0.0)) throw moment_divergence(1, al / k, "kappa-generalized");
                return theta3 * theta3 * be * std::pow(2.0 * k, -d) * beta_fn(c, d);
            }
        },
        m.positive);
    double gw = 0.0;
    if (m.theta1 > 0.0) {
        const double s = m.weibull.s;
        gw = m.weibull.lambda * m.theta1 * (1.0 - m.theta1 * std::pow(2.0, -1.0 - 1.0 / s)) *
             gamma_fn(1.0 + 1.0 / s);
    }
    const double numerator = mu1 - 2.0 * (t_cross - gw);
    const double denominator = mu1 - m.rho() * negative_deficit(m);
    const double value = numerator / denominator;
    return {value, value > 1.0};
}

GiniValue mixture_gini_numeric(const MixtureParams& m) {
    const double mu1 = mixture_mean(m);
    if (!(mu1 > 0.0)) throw mean_sign_error(mu1);
    const double rho = m.rho();
    const double l_mid = negative_deficit(m) / mu1;
    auto lorenz = [&m](double u) { return mixture_lorenz(m, u).L; };
    double area = (rho - m.theta1) * l_mid;
    if (m.theta1 > 0.0) area += integrate(lorenz, 0.0, m.theta1, 1e-10, 1e-10).value;
    if (rho < 1.0) area += integrate(lorenz, rho, 1.0, 1e-10, 1e-10).value;
    const double value = (1.0 - 2.0 * area) / (1.0 - rho * l_mid);
    return {value, value > 1.0};
}

double pareto_tail_index(const MixtureParams& m) { return branch_tail_index(m.positive); }

WeightedSample mixture_sample(const MixtureParams& m, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::domain_error("mixture_sample: n must be positive");
    Rng rng(seed);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = mixture_quantile(m, rng.next_uniform());
    return WeightedSample::with_unit_weights(std::move(values));
}

namespace {

void write_kv(std::ostream& os, const char* key, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    os << key << " = " << buffer << "\n";
}

}  // namespace

void write_mixture_params(std::ostream& os, const MixtureParams& m) {
    os << "model = " << family_name(m.family()) << "\n";
    write_kv(os, "theta1", m.theta1);
    write_kv(os, "theta2", m.theta2);
    write_kv(os, "s", m.weibull.s);
    write_kv(os, "lambda", m.weibull.lambda);
    std::visit(
        [&os](const auto& pp) {
            using T = std::decay_t<decltype(pp)>;
            if constexpr (std::is_same_v<T, SMParams>) {
                write_kv(os, "a", pp.a);
                write_kv(os, "b", pp.b);
                write_kv(os, "q", pp.q);
            } else if constexpr (std::is_same_v<T, DagumParams>) {
                write_kv(os, "a", pp.a);
                write_kv(os, "b", pp.b);
                write_kv(os, "p", pp.p);
            } else {
                write_kv(os, "alpha", pp.alpha);
                write_kv(os, "beta", pp.beta);
                write_kv(os, "kappa", pp.kappa);
            }
        },
        m.positive);
}

MixtureParams read_mixture_params(std::istream& is) {
    std::string model;
    std::map<std::string, double> fields;
    std::string line;
    int line_no = 0;
    auto trim = [](std::string text) {
        const auto first = text.find_first_not_of(" \t\r");
        if (first == std::string::npos) return std::string();
        const auto last = text.find_last_not_of(" \t\r");
        return text.substr(first, last - first + 1);
    };
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ingest_error("params line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ingest_error("params line " + std::to_string(line_no) + ": empty key or value");
        if (key == "model") {
            model = value;
            continue;
        }
        try {
            std::size_t used = 0;
            fields[key] = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw ingest_error("params line " + std::to_string(line_no) + ": bad number '" +
                               value + "' for key '" + key + "'");
        }
    }
    if (model.empty()) throw ingest_error("params: missing 'model' key");
    auto take = [&fields](const char* key) {
        const auto it = fields.find(key);
        if (it == fields.end())
            throw ingest_error(std::string("params: missing key '") + key + "'");
        const double v = it->second;
        fields.erase(it);
        return v;
    };
    const Family family = family_from_name(model);
    const double theta1 = take("theta1");
    const double theta2 = take("theta2");
    const WeibullNegParams weibull(take("s"), take("lambda"));
    PositiveBranch branch = [&]() -> PositiveBranch {
        switch (family) {
            case Family::SinghMaddala: return SMParams(take("a"), take("b"), take("q"));
            case Family::Dagum: return DagumParams(take("a"), take("b"), take("p"));
            case Family::KappaGen:
                return KappaGenParams(take("alpha"), take("beta"), take("kappa"));
        }
        throw std::logic_error("read_mixture_params: unhandled family");
    }();
    if (!fields.empty())
        throw ingest_error("params: unexpected key '" + fields.begin()->first + "'");
    return MixtureParams(theta1, theta2, weibull, branch);
}

std::string mixture_params_to_string(const MixtureParams& m) {
    std::ostringstream os;
    write_mixture_params(os, m);
    return os.str();
}

MixtureParams mixture_params_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_mixture_params(is);
}

}  // namespace wealthmix
