#ifndef WEALTHMIX_MIXTURE_HPP
#define WEALTHMIX_MIXTURE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "wealthmix/branches.hpp"
#include "wealthmix/sample.hpp"

namespace wealthmix {

enum class Family { SinghMaddala, Dagum, KappaGen };

Family family_of(const PositiveBranch& branch);
std::string family_name(Family family);
Family family_from_name(const std::string& name);

// The three-component net wealth model: Weibull mass theta1 on the negatives,
// an atom of mass theta2 at zero, and a positive branch carrying the rest.
struct MixtureParams {
    MixtureParams(double theta1, double theta2, WeibullNegParams weibull,
                  PositiveBranch positive);

    double theta1;
    double theta2;
    WeibullNegParams weibull;
    PositiveBranch positive;

    double rho() const { return theta1 + theta2; }
    double theta3() const { return 1.0 - theta1 - theta2; }
    Family family() const { return family_of(positive); }
};

struct LorenzPoint {
    double u;
    double L;
};

struct GiniValue {
    double value;
    bool exceeds_one;  // possible under the negative-wealth normalization
};

// Density part of the model; disengaged (nullopt) at w = 0 where the atom
// carries mass theta2 instead of a density value.
std::optional<double> mixture_pdf(const MixtureParams& m, double w);
double atom_mass(const MixtureParams& m);

// Right-continuous CDF with a jump of theta2 at zero.
double mixture_cdf(const MixtureParams& m, double w);

// Generalized inverse CDF; the atom maps [theta1, rho] to 0.
double mixture_quantile(const MixtureParams& m, double u);

// mu_r = theta1 E1(W^r) + theta3 E3(W^r).
double mixture_moment(const MixtureParams& m, int r);
double mixture_mean(const MixtureParams& m);

// Lorenz curve ordinate; negative dip over (0, rho) when theta1 > 0.
LorenzPoint mixture_lorenz(const MixtureParams& m, double u);

// Gini under the negative-wealth normalization, by the closed form and by
// adaptive quadrature of the Lorenz curve. The two agree to 1e-4; the numeric
// path is the oracle for the closed form.
GiniValue mixture_gini_closed(const MixtureParams& m);
GiniValue mixture_gini_numeric(const MixtureParams& m);

// Upper tail index of the positive branch; throws no_power_tail for kappa=0.
double pareto_tail_index(const MixtureParams& m);

// Inverse-transform sampling; unit weights; deterministic per seed.
WeightedSample mixture_sample(const MixtureParams& m, std::size_t n, std::uint64_t seed);

// Flat key-value serialization (keys: model, theta1, theta2, s, lambda and
// the branch parameters under their usual symbol names).
void write_mixture_params(std::ostream& os, const MixtureParams& m);
MixtureParams read_mixture_params(std::istream& is);
std::string mixture_params_to_string(const MixtureParams& m);
MixtureParams mixture_params_from_string(const std::string& text);

}  // namespace wealthmix

#endif
