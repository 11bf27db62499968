#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "wealthmix/branches.hpp"
#include "wealthmix/diagnostics.hpp"
#include "wealthmix/error.hpp"
#include "wealthmix/estimation.hpp"
#include "wealthmix/gof.hpp"
#include "wealthmix/mixture.hpp"
#include "wealthmix/random.hpp"
#include "wealthmix/sample.hpp"

#include "../tools/wealthfit/kvdoc.hpp"
#include "oracles.hpp"

using namespace wealthmix;

namespace {

namespace fs = std::filesystem;

double rel_gap(double value, double reference) {
    return std::fabs(value - reference) / std::fabs(reference);
}

void verdict(int criterion, bool pass, const std::string& text) {
    std::printf("criterion %d: %s - %s\n", criterion, pass ? "PASS" : "FAIL", text.c_str());
    std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// 1. published derived columns recomputed from the published parameters

bool criterion1() {
    const auto& rows = oracles::published_rows();
    int gamma_misses = 0;
    int mean_misses = 0;
    int gini_misses = 0;
    int mean_checks = 0;
    for (const auto& row : rows) {
        const MixtureParams m = oracles::row_params(row);
        const std::string fam = family_name(row.family);
        const double gamma = pareto_tail_index(m);
        if (std::fabs(gamma - row.gamma) > 0.002) {
            ++gamma_misses;
            std::printf("  %d %s: tail index %.6f vs published %.3f (gap %+.4f)\n", row.wave,
                        fam.c_str(), gamma, row.gamma, gamma - row.gamma);
        }
        if (row.family == Family::Dagum) continue;
        ++mean_checks;
        const double mean = mixture_mean(m);
        if (rel_gap(mean, row.mean) > 0.01) {
            ++mean_misses;
            std::printf("  %d %s: mean %.1f vs published %.0f (%.2f%% off)\n", row.wave,
                        fam.c_str(), mean, row.mean, 100.0 * rel_gap(mean, row.mean));
        }
        const double gini = mixture_gini_closed(m).value;
        if (std::fabs(gini - row.gini) > 0.005) {
            ++gini_misses;
            std::printf("  %d %s: gini %.4f vs published %.3f\n", row.wave, fam.c_str(), gini,
                        row.gini);
        }
    }
    const int misses = gamma_misses + mean_misses + gini_misses;
    char text[256];
    if (misses == 0) {
        std::snprintf(text, sizeof text,
                      "27 tail indices within 0.002, %d means within 1%%, %d Gini values within "
                      "0.005",
                      mean_checks, mean_checks);
    } else {
        std::snprintf(text, sizeof text,
                      "%d of %d comparisons out of tolerance (%d tail, %d mean, %d gini); the "
                      "gaps match error propagated from the three-decimal rounding of the "
                      "published parameter columns",
                      misses, 27 + 2 * mean_checks, gamma_misses, mean_misses, gini_misses);
    }
    verdict(1, misses == 0, text);
    return misses == 0;
}

// ---------------------------------------------------------------------------
// 2. information criteria recomputed from the published log-likelihoods

bool criterion2() {
    const auto& rows = oracles::published_rows();
    int aic_misses = 0;
    int bic_misses = 0;
    double bic_gap_lo = 1e300;
    double bic_gap_hi = -1e300;
    for (const auto& row : rows) {
        const InformationCriteria ic = information_criteria(row.loglik, 7, row.n_obs);
        if (std::fabs(ic.aic - row.aic) > 2.0) {
            ++aic_misses;
            std::printf("  %d %s: aic %.1f vs published %.0f\n", row.wave,
                        family_name(row.family).c_str(), ic.aic, row.aic);
        }
        const double gap = row.bic - ic.bic;
        bic_gap_lo = std::min(bic_gap_lo, gap);
        bic_gap_hi = std::max(bic_gap_hi, gap);
        if (std::fabs(gap) > 10.0) ++bic_misses;
    }
    char text[256];
    if (aic_misses == 0 && bic_misses == 0) {
        std::snprintf(text, sizeof text, "AIC within 2 and BIC within 10 on all 27 rows");
    } else {
        std::snprintf(text, sizeof text,
                      "AIC within 2 on %d/27 rows; BIC = -2ll + 7 ln N misses on %d/27, sitting "
                      "%.1f to %.1f under the published column (the published BIC-AIC spacing "
                      "grows like 10(ln N - 2), which no stated convention with k = 7 produces)",
                      27 - aic_misses, bic_misses, bic_gap_lo, bic_gap_hi);
    }
    verdict(2, aic_misses == 0 && bic_misses == 0, text);
    return aic_misses == 0 && bic_misses == 0;
}

// ---------------------------------------------------------------------------
// 3. closed forms against quadrature oracles

// Moment of the kappa-generalized branch with the change of variable w = beta
// e^t taken in log space throughout, so near-divergent orders (tail barely
// above r) stay inside double range all the way to the 30 / (tail - r) cutoff.
double kgen_log_moment(const KappaGenParams& p, int r, double tail) {
    const double alpha = p.alpha;
    const double kappa = p.kappa;
    auto log_pdf = [&](double t) {
        const double lkx = std::log(kappa) + alpha * t;
        double asinh_term;
        double log_root;
        if (lkx > 20.0) {
            asinh_term = std::log(2.0) + lkx;
            log_root = lkx;
        } else {
            const double kx = std::exp(lkx);
            asinh_term = std::asinh(kx);
            log_root = 0.5 * std::log1p(kx * kx);
        }
        return std::log(alpha / p.beta) + (alpha - 1.0) * t - asinh_term / kappa - log_root;
    };
    const double t_lo = -60.0;
    const double t_hi = std::max(90.0, 30.0 / (tail - r));
    const int panels = static_cast<int>(std::ceil((t_hi - t_lo) * 40.0));
    auto integrand = [&](double t) {
        const double exponent = (r + 1) * t + log_pdf(t);
        return exponent < -700.0 ? 0.0 : std::exp(exponent);
    };
    return std::pow(p.beta, r + 1) * oracles::simpson(integrand, t_lo, t_hi, panels);
}

bool criterion3() {
    const auto& rows = oracles::published_rows();
    int failures = 0;
    int moment_checks = 0;
    int divergent = 0;
    for (const auto& row : rows) {
        const MixtureParams m = oracles::row_params(row);
        const std::string fam = family_name(row.family);
        const double tail = oracles::true_upper_tail(row);

        const double mu1 = mixture_moment(m, 1);
        const double mu1_oracle = oracles::oracle_mixture_moment(m, 1, tail);
        if (rel_gap(mu1, mu1_oracle) > 1e-6) {
            ++failures;
            std::printf("  %d %s: mu1 closed %.10g vs oracle %.10g\n", row.wave, fam.c_str(), mu1,
                        mu1_oracle);
        }

        const double gini_closed = mixture_gini_closed(m).value;
        const double gini_numeric = mixture_gini_numeric(m).value;
        if (std::fabs(gini_closed - gini_numeric) > 1e-4) {
            ++failures;
            std::printf("  %d %s: gini closed %.8f vs numeric %.8f\n", row.wave, fam.c_str(),
                        gini_closed, gini_numeric);
        }

        const PositiveBranch branch = oracles::row_branch(row);
        for (int r = 1; r <= 2; ++r) {
            double closed = 0.0;
            try {
                closed = branch_moment(branch, r);
            } catch (const moment_divergence&) {
                ++divergent;
                continue;
            }
            const double oracle = row.family == Family::KappaGen
                                      ? kgen_log_moment(std::get<KappaGenParams>(branch), r, tail)
                                      : oracles::oracle_positive_moment(branch, r, tail);
            ++moment_checks;
            if (rel_gap(closed, oracle) > 1e-6) {
                ++failures;
                std::printf("  %d %s: branch moment r=%d closed %.10g vs oracle %.10g (rel %.2g)\n",
                            row.wave, fam.c_str(), r, closed, oracle, rel_gap(closed, oracle));
            }
        }
    }
    char text[256];
    std::snprintf(text, sizeof text,
                  "27 means vs quadrature at 1e-6, 27 closed vs numeric Gini at 1e-4, %d branch "
                  "moments at 1e-6 (%d divergent orders skipped)%s",
                  moment_checks, divergent, failures ? " - see misses above" : "");
    verdict(3, failures == 0, text);
    return failures == 0;
}

// ---------------------------------------------------------------------------
// 4. simulation-refit recovery through the command-line tool

#ifndef WEALTHFIT_BIN
#error "WEALTHFIT_BIN must name the CLI binary"
#endif

int run_cli(const std::string& args, const fs::path& log) {
    const std::string command =
        std::string("\"") + WEALTHFIT_BIN + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    return std::system(command.c_str());
}

bool recover_row(const oracles::PublishedRow& row, std::uint64_t seed, const fs::path& base) {
    const std::string fam = family_name(row.family);
    const fs::path dir = base / fam;
    fs::create_directories(dir);

    const MixtureParams truth = oracles::row_params(row);
    {
        std::ofstream out(dir / "truth.kv");
        write_mixture_params(out, truth);
    }

    const std::string simulate = "simulate --params \"" + (dir / "truth.kv").string() +
                                 "\" --n 50000 --seed " + std::to_string(seed) + " --out \"" +
                                 (dir / "sim").string() + "\"";
    if (run_cli(simulate, dir / "simulate.log") != 0) {
        std::printf("  %s: simulate command failed (see %s)\n", fam.c_str(),
                    (dir / "simulate.log").string().c_str());
        return false;
    }

    const std::string fit = "fit --input \"" + (dir / "sim" / "simulated.csv").string() +
                            "\" --columns wealth:weight::period --family " + fam + " --out \"" +
                            (dir / "fit").string() + "\"";
    if (run_cli(fit, dir / "fit.log") != 0) {
        std::printf("  %s: fit command failed (see %s)\n", fam.c_str(),
                    (dir / "fit.log").string().c_str());
        return false;
    }

    const wealthfit::KvDoc report = wealthfit::KvDoc::read_file((dir / "fit" / "fit.kv").string());
    const std::string prefix = "period.all.family." + fam;
    if (!report.flag(prefix + ".converged")) {
        std::printf("  %s: fit did not converge\n", fam.c_str());
        return false;
    }

    std::vector<std::string> names = {"theta1", "theta2", "s", "lambda"};
    std::vector<double> truths = {row.theta1, row.theta2, row.s, row.lambda};
    const std::vector<std::string> branch_names =
        row.family == Family::SinghMaddala ? std::vector<std::string>{"a", "b", "q"}
        : row.family == Family::Dagum      ? std::vector<std::string>{"a", "b", "p"}
                                           : std::vector<std::string>{"alpha", "beta", "kappa"};
    names.insert(names.end(), branch_names.begin(), branch_names.end());
    truths.insert(truths.end(), {row.shape1, row.scale, row.shape2});

    bool ok = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double estimate = report.number(prefix + ".param." + names[i]);
        const double se = report.number(prefix + ".se." + names[i]);
        const double z = std::fabs(estimate - truths[i]) / se;
        worst = std::max(worst, z);
        if (!(std::fabs(estimate - truths[i]) <= 3.0 * se)) {
            ok = false;
            std::printf("  %s: %s = %.6g vs truth %.6g is %.2f SEs away (se %.3g)\n", fam.c_str(),
                        names[i].c_str(), estimate, truths[i], z, se);
        }
    }
    if (ok)
        std::printf("  %s: converged, all 7 parameters within 3 SEs (worst %.2f)\n", fam.c_str(),
                    worst);
    return ok;
}

bool criterion4() {
    const auto& rows = oracles::published_rows();
    const fs::path base = fs::temp_directory_path() / "wealthmix_acceptance_recovery";
    fs::create_directories(base);
    bool ok = true;
    ok &= recover_row(rows[2], 4107, base);
    ok &= recover_row(rows[0], 4108, base);
    ok &= recover_row(rows[1], 4109, base);
    verdict(4, ok,
            ok ? "50000-draw simulate plus refit through the CLI recovers all parameters within "
                 "3 SEs for the 1984 kgen, sm, and dagum rows"
               : "at least one CLI round trip missed (see above)");
    return ok;
}

// ---------------------------------------------------------------------------
// 5. distributional invariants on randomized parameter sets

struct ParamDraw {
    MixtureParams m;
    double tail;
};

ParamDraw random_params(Family family, Rng& rng) {
    auto uni = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.next_uniform(); };
    for (;;) {
        const double theta1 = uni(0.02, 0.15);
        const double theta2 = uni(0.02, 0.12);
        const WeibullNegParams weibull(uni(0.5, 1.5), uni(500.0, 20000.0));
        PositiveBranch branch = SMParams(1.0, 1.0, 2.0);
        double tail = 0.0;
        if (family == Family::SinghMaddala) {
            const double a = uni(0.6, 2.2);
            const double q = uni(0.8, 5.0);
            if (a * q < 1.15) continue;
            branch = SMParams(a, uni(1e3, 1e6), q);
            tail = a * q;
        } else if (family == Family::Dagum) {
            const double a = uni(1.15, 3.0);
            branch = DagumParams(a, uni(1e3, 1e6), uni(0.2, 1.5));
            tail = a;
        } else {
            const double alpha = uni(0.4, 1.2);
            const double kappa = uni(0.15, 0.9);
            if (alpha / kappa < 1.15) continue;
            branch = KappaGenParams(alpha, uni(1e3, 1e6), kappa);
            tail = alpha / kappa;
        }
        const MixtureParams m(theta1, theta2, weibull, branch);
        if (mixture_mean(m) <= 0.0) continue;
        return {m, tail};
    }
}

MixtureParams rescale_params(const MixtureParams& m, double c) {
    const WeibullNegParams weibull(m.weibull.s, m.weibull.lambda * c);
    PositiveBranch branch = m.positive;
    if (const auto* sm = std::get_if<SMParams>(&branch))
        branch = SMParams(sm->a, sm->b * c, sm->q);
    else if (const auto* dg = std::get_if<DagumParams>(&branch))
        branch = DagumParams(dg->a, dg->b * c, dg->p);
    else {
        const auto& kg = std::get<KappaGenParams>(branch);
        branch = KappaGenParams(kg.alpha, kg.beta * c, kg.kappa);
    }
    return MixtureParams(m.theta1, m.theta2, weibull, branch);
}

int check_invariants(const ParamDraw& draw, const std::string& fam, int index) {
    const MixtureParams& m = draw.m;
    int failures = 0;
    const auto miss = [&](const char* what, double value) {
        ++failures;
        std::printf("  %s set %d: %s (%.3g)\n", fam.c_str(), index, what, value);
    };

    const double mass = oracles::oracle_mixture_moment(m, 0, draw.tail);
    if (std::fabs(mass - 1.0) > 1e-6) miss("total mass off 1", mass - 1.0);

    const double w_lo = -8.0 * m.weibull.lambda;
    const double w_hi = mixture_quantile(m, 0.999);
    double prev = -1.0;
    for (int i = 0; i < 1000; ++i) {
        const double w = w_lo + (w_hi - w_lo) * i / 999.0;
        const double cdf = mixture_cdf(m, w);
        if (cdf < 0.0 || cdf > 1.0) miss("cdf outside [0,1]", cdf);
        if (cdf < prev - 1e-15) miss("cdf not monotone", cdf - prev);
        prev = cdf;
    }

    const double rho = m.rho();
    double worst_round_trip = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double u = (i + 0.5) / 1000.0;
        if (u > m.theta1 - 1e-3 && u < rho + 1e-3) continue;
        worst_round_trip =
            std::max(worst_round_trip, std::fabs(mixture_cdf(m, mixture_quantile(m, u)) - u));
    }
    if (worst_round_trip > 1e-8) miss("quantile round trip", worst_round_trip);

    if (mixture_lorenz(m, 0.0).L != 0.0) miss("L(0)", mixture_lorenz(m, 0.0).L);
    if (std::fabs(mixture_lorenz(m, 1.0).L - 1.0) > 1e-8)
        miss("L(1)", mixture_lorenz(m, 1.0).L - 1.0);

    std::vector<double> lorenz(401);
    for (int j = 0; j <= 400; ++j)
        lorenz[j] = mixture_lorenz(m, rho + (0.999 - rho) * j / 400.0).L;
    for (int j = 1; j + 1 <= 400; ++j)
        if (lorenz[j + 1] - 2.0 * lorenz[j] + lorenz[j - 1] < -1e-9) {
            miss("lorenz convexity", lorenz[j + 1] - 2.0 * lorenz[j] + lorenz[j - 1]);
            break;
        }

    const double at_rho = mixture_lorenz(m, rho).L;
    for (int j = 1; j < 200; ++j) {
        const double u = j / 200.0;
        if (mixture_lorenz(m, u).L < at_rho - 1e-12) {
            miss("lorenz minimum not at rho", u);
            break;
        }
    }

    const double c = 3.7;
    const MixtureParams scaled = rescale_params(m, c);
    const double mean = mixture_mean(m);
    if (rel_gap(mixture_mean(scaled), c * mean) > 1e-10)
        miss("mean equivariance", rel_gap(mixture_mean(scaled), c * mean));
    if (draw.tail > 2.1) {
        const double mu2 = mixture_moment(m, 2);
        if (rel_gap(mixture_moment(scaled, 2), c * c * mu2) > 1e-10)
            miss("second moment equivariance", rel_gap(mixture_moment(scaled, 2), c * c * mu2));
    }
    const double gini = mixture_gini_closed(m).value;
    if (std::fabs(mixture_gini_closed(scaled).value - gini) > 1e-10)
        miss("gini scale invariance", mixture_gini_closed(scaled).value - gini);

    return failures;
}

bool criterion5() {
    Rng rng(20250816);
    int failures = 0;
    for (const Family family : {Family::SinghMaddala, Family::Dagum, Family::KappaGen}) {
        const std::string fam = family_name(family);
        for (int i = 0; i < 10; ++i) failures += check_invariants(random_params(family, rng), fam, i);
    }
    char text[256];
    std::snprintf(text, sizeof text,
                  "mass, CDF monotonicity, quantile round trips, Lorenz endpoints, convexity, "
                  "and scale behavior across 30 randomized parameter sets%s",
                  failures ? " - failures above" : "");
    verdict(5, failures == 0, text);
    return failures == 0;
}

// ---------------------------------------------------------------------------
// 6. kappa -> 0 reduction to the Weibull

bool criterion6() {
    int failures = 0;
    double worst = 0.0;
    for (const double alpha : {0.7, 1.3}) {
        for (const double beta : {1.0, 76514.0}) {
            const PositiveBranch branch = KappaGenParams(alpha, beta, 1e-8);
            for (int i = 0; i <= 200; ++i) {
                const double w = beta * (0.01 + (10.0 - 0.01) * i / 200.0);
                const double x = std::pow(w / beta, alpha);
                const double weibull_pdf =
                    alpha / beta * std::pow(w / beta, alpha - 1.0) * std::exp(-x);
                const double weibull_cdf = -std::expm1(-x);
                const double pdf_gap = rel_gap(branch_pdf(branch, w), weibull_pdf);
                const double cdf_gap = rel_gap(branch_cdf(branch, w), weibull_cdf);
                worst = std::max({worst, pdf_gap, cdf_gap});
                if (pdf_gap > 1e-6 || cdf_gap > 1e-6) {
                    ++failures;
                    std::printf("  alpha %.1f beta %g w %.4g: pdf rel %.2g, cdf rel %.2g\n",
                                alpha, beta, w, pdf_gap, cdf_gap);
                }
            }
            for (int r = 1; r <= 2; ++r) {
                const double weibull_moment =
                    std::pow(beta, r) * std::tgamma(1.0 + r / alpha);
                const double gap = rel_gap(branch_moment(branch, r), weibull_moment);
                worst = std::max(worst, gap);
                if (gap > 1e-6) {
                    ++failures;
                    std::printf("  alpha %.1f beta %g moment r=%d: rel %.2g\n", alpha, beta, r,
                                gap);
                }
            }
        }
    }
    char text[128];
    std::snprintf(text, sizeof text,
                  "kappa = 1e-8 matches the Weibull limit on [0.01b, 10b] (worst rel %.2g)",
                  worst);
    verdict(6, failures == 0, text);
    return failures == 0;
}

// ---------------------------------------------------------------------------
// 7. goodness-of-fit machinery

bool criterion7() {
    const auto& rows = oracles::published_rows();
    bool ok = true;

    struct AdCase {
        const char* name;
        WeightedSample sample;
        MixtureParams model;
    };
    const MixtureParams kgen84 = oracles::row_params(rows[2]);
    const MixtureParams sm_small(0.0, 0.0, WeibullNegParams(1.0, 1.0), SMParams(1.2, 300.0, 2.1));
    const MixtureParams dagum_wrong(0.0, 0.0, WeibullNegParams(1.0, 1.0),
                                    DagumParams(1.4, 250.0, 0.8));
    const MixtureParams sm_2005 = oracles::row_params(rows[18]);
    const MixtureParams sm_unit(0.0, 0.0, WeibullNegParams(1.0, 1.0), SMParams(1.0, 1.0, 2.0));

    std::vector<AdCase> cases;
    cases.push_back({"self-model n=100", mixture_sample(kgen84, 100, 333), kgen84});
    cases.push_back({"misspecified n=37", mixture_sample(sm_small, 37, 34), dagum_wrong});
    {
        const WeightedSample draw = mixture_sample(sm_2005, 50, 56);
        std::vector<double> weights(draw.size());
        for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = 0.5 + 0.5 * (i % 4);
        cases.push_back({"weighted n=50", WeightedSample(draw.values(), weights), sm_2005});
    }
    {
        std::vector<double> values = mixture_sample(kgen84, 60, 77).values();
        values.insert(values.end(), {0.0, 0.0, -500.0, -1500.0});
        cases.push_back({"with zeros n=64", WeightedSample::with_unit_weights(values), kgen84});
    }
    cases.push_back({"single median obs",
                     WeightedSample::with_unit_weights({branch_quantile(sm_unit.positive, 0.5)}),
                     sm_unit});

    for (const AdCase& c : cases) {
        const double a2 = anderson_darling(c.sample, c.model);
        const double oracle = oracles::ad_grid_oracle(c.sample, c.model, 1000000);
        const double gap = rel_gap(a2, oracle);
        std::printf("  AD %s: closed %.8f vs grid %.8f (rel %.2g)\n", c.name, a2, oracle, gap);
        if (gap > 1e-6) ok = false;
    }

    const WeightedSample vuong_sample = mixture_sample(kgen84, 20000, 515);
    const VuongResult ab =
        vuong_test(vuong_sample, oracles::row_params(rows[0]), oracles::row_params(rows[1]));
    const VuongResult ba =
        vuong_test(vuong_sample, oracles::row_params(rows[1]), oracles::row_params(rows[0]));
    const double asym = std::fabs(ab.statistic + ba.statistic);
    const double pgap = std::fabs(ab.pvalue - ba.pvalue);
    std::printf("  Vuong antisymmetry: |sAB + sBA| = %.2g, |pAB - pBA| = %.2g\n", asym, pgap);
    if (asym > 1e-12 || pgap > 1e-12) ok = false;

    const WeightedSample pilot = mixture_sample(kgen84, 2000, 9301);
    const FitResult fitted = fit_mixture(pilot, Family::KappaGen);
    if (!fitted.converged) {
        std::printf("  calibration pilot fit did not converge\n");
        verdict(7, false, "pilot fit for the bootstrap calibration failed");
        return false;
    }
    const Rng root(20260818);
    std::vector<double> pvalues;
    int broken = 0;
    for (int e = 0; e < 50; ++e) {
        const WeightedSample experiment =
            mixture_sample(fitted.params, 2000, root.stream(2 * e).seed());
        try {
            pvalues.push_back(bootstrap_pvalue(experiment, Family::KappaGen, 200,
                                               root.stream(2 * e + 1).seed())
                                  .value);
        } catch (const std::exception& e2) {
            ++broken;
            std::printf("  calibration experiment %d failed: %s\n", e, e2.what());
        }
    }
    double ks = 1.0;
    if (broken == 0) {
        ks = oracles::ks_distance_uniform(pvalues);
        std::printf("  bootstrap calibration: 50 experiments at B=200, KS distance %.4f\n", ks);
        if (ks > 0.15) ok = false;
    } else {
        ok = false;
    }

    char text[160];
    std::snprintf(text, sizeof text,
                  "closed-form AD vs grid quadrature, Vuong antisymmetry, and under-null "
                  "p-value uniformity (KS %.3f vs 0.15)",
                  ks);
    verdict(7, ok, text);
    return ok;
}

// ---------------------------------------------------------------------------
// 8. empirical diagnostics against known laws

bool criterion8() {
    bool ok = true;

    {
        Rng rng(1011);
        std::vector<double> draws(100000);
        for (double& v : draws) v = -std::log(rng.next_uniform());
        const SeriesTable series = mean_excess_series(WeightedSample::with_unit_weights(draws));
        const std::size_t n = series.points.size();
        double worst = 0.0;
        for (std::size_t i = n / 10; i < 9 * n / 10; ++i)
            worst = std::max(worst, std::fabs(series.points[i].y - 1.0));
        std::printf("  exponential mean excess: central-80%% deviation from 1 is %.4f\n", worst);
        if (worst > 0.1) ok = false;
    }

    {
        Rng rng(11ULL ^ 0xABCDEFULL);
        std::vector<double> draws(100000);
        for (double& v : draws) v = std::pow(rng.next_uniform(), -0.5);
        const SeriesTable z = zipf_series(WeightedSample::with_unit_weights(draws));
        std::vector<SeriesPoint> upper;
        for (const SeriesPoint& p : z.points)
            if (p.y <= std::log(0.1)) upper.push_back(p);
        const double slope = oracles::least_squares(upper).slope;
        std::printf("  Pareto Zipf slope over the top decile: %.4f\n", slope);
        if (std::fabs(slope + 2.0) > 0.1) ok = false;
    }

    {
        const MixtureParams kgen84 = oracles::row_params(oracles::published_rows()[2]);
        const double gini = empirical_gini(mixture_sample(kgen84, 100000, 11));
        std::printf("  empirical Gini of 1e5 draws: %.4f vs closed-form 0.741\n", gini);
        if (std::fabs(gini - 0.741) >= 0.01) ok = false;
    }

    verdict(8, ok,
            "mean excess flat for exponential draws, Zipf slope -2 for a Pareto tail, sampled "
            "Gini at the closed-form value");
    return ok;
}

bool run(int criterion) {
    switch (criterion) {
        case 1: return criterion1();
        case 2: return criterion2();
        case 3: return criterion3();
        case 4: return criterion4();
        case 5: return criterion5();
        case 6: return criterion6();
        case 7: return criterion7();
        case 8: return criterion8();
        default: return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        char* end = nullptr;
        const long value = std::strtol(argv[i], &end, 10);
        if (end == argv[i] || *end != '\0' || value < 1 || value > 8) {
            std::fprintf(stderr, "usage: %s [criterion numbers 1-8]\n", argv[0]);
            return 2;
        }
        selected.push_back(static_cast<int>(value));
    }
    if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8};

    bool all_pass = true;
    for (const int criterion : selected) {
        try {
            all_pass &= run(criterion);
        } catch (const std::exception& e) {
            std::printf("criterion %d: FAIL - unexpected exception: %s\n", criterion, e.what());
            all_pass = false;
        }
    }
    return all_pass ? 0 : 1;
}
