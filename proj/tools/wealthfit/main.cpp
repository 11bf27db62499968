#include <exception>
#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "commands.hpp"
#include "kvdoc.hpp"
#include "wealthmix/error.hpp"

namespace {

constexpr const char* kDescription =
    "wealthfit: three-component net wealth mixtures (Weibull debts, an atom at zero,\n"
    "Singh-Maddala / Dagum / kappa-generalized positive branch)";

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0   success\n"
    "  1   command line misuse\n"
    "  2   an input file cannot be read or parsed\n"
    "  3   estimation failure (a fit did not converge, bootstrap unreliable)\n"
    "  4   validation failure (mismatched periods, undefined statistic)\n"
    "  70  internal error";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app(kDescription);
    app.footer(kExitCodes);
    app.require_subcommand(1);

    wealthfit::Options opt;
    int rc = 0;

    const auto add_input = [&opt](CLI::App* sub, bool required) {
        CLI::Option* input =
            sub->add_option("--input", opt.input, "delimited data file with a header row");
        if (required) input->required();
        sub->add_option("--columns", opt.columns,
                        "column names as wealth:weight:size:period; an empty slot means the "
                        "file has no such column")
            ->capture_default_str();
        sub->add_option("--deflators", opt.deflators,
                        "period,deflator table; wealth is divided by the deflator and by "
                        "sqrt(household size)");
        return input;
    };
    const auto add_fit_config = [&opt](CLI::App* sub) {
        sub->add_option("--max-iterations", opt.max_iterations, "optimizer iteration cap")
            ->capture_default_str();
        sub->add_option("--gradient-tolerance", opt.gradient_tolerance,
                        "gradient sup-norm tolerance per unit of total weight")
            ->capture_default_str();
        sub->add_option("--step-tolerance", opt.step_tolerance,
                        "smallest step sup-norm before the optimizer stops")
            ->capture_default_str();
        sub->add_option("--init", opt.init, "starting values: moment or fixed")
            ->capture_default_str()
            ->check(CLI::IsMember({"moment", "fixed"}));
        sub->add_flag("--raw-weights", opt.raw_weights,
                      "keep raw weights in the likelihood (default rescales them to mean one)");
    };

    CLI::App* summarize =
        app.add_subcommand("summarize", "weighted summary statistics per period");
    add_input(summarize, true);
    summarize->add_flag("--gini-normalized", opt.gini_normalized,
                        "empirical Gini by the normalized-integral convention instead of the "
                        "covariance form");
    summarize->add_option("--out", opt.out_dir, "directory for summary.kv and summary.tsv");
    summarize->callback([&] { rc = wealthfit::cmd_summarize(opt); });

    CLI::App* fit = app.add_subcommand("fit", "maximum likelihood mixture fits");
    CLI::Option* fit_input = add_input(fit, false);
    CLI::Option* fit_params = fit->add_option(
        "--params", opt.params_file,
        "stored params file: report implied mean/gini/tail without data or refitting");
    fit_input->excludes(fit_params);
    fit_params->excludes(fit_input);
    fit->add_option("--family", opt.family, "sm, dagum, kgen, or all")
        ->capture_default_str()
        ->check(CLI::IsMember({"sm", "dagum", "kgen", "all"}));
    add_fit_config(fit);
    fit->add_option("--out", opt.out_dir,
                    "directory for fit.kv and per-family params_<period>_<family>.kv files");
    fit->callback([&] {
        if (opt.input.empty() && opt.params_file.empty())
            throw wealthfit::usage_error("fit needs --input or --params");
        rc = wealthfit::cmd_fit(opt);
    });

    CLI::App* gof = app.add_subcommand("gof", "goodness of fit for a stored fit report");
    add_input(gof, true);
    gof->add_option("--report", opt.report_file, "fit.kv written by the fit command")->required();
    gof->add_option("--boot", opt.boot,
                    "bootstrap replications for the Anderson-Darling p-value; 0 skips it")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    gof->add_option("--seed", opt.seed, "bootstrap seed")->capture_default_str();
    add_fit_config(gof);
    gof->add_option("--out", opt.out_dir, "directory for gof.kv");
    gof->callback([&] { rc = wealthfit::cmd_gof(opt); });

    CLI::App* series = app.add_subcommand("series", "plot-ready series files");
    add_input(series, true);
    series->add_option("--series", opt.series, "lorenz, mean-excess, zipf, or trend")
        ->required()
        ->check(CLI::IsMember({"lorenz", "mean-excess", "zipf", "trend"}));
    series->add_option("--report", opt.report_file, "fit.kv for model overlays on the same grid");
    series->add_option("--base", opt.base_period, "rebase trend series so this period equals 100");
    series->add_flag("--gini-normalized", opt.gini_normalized,
                     "trend Gini by the normalized-integral convention");
    series->add_option("--out", opt.out_dir, "output directory")->required();
    series->callback([&] { rc = wealthfit::cmd_series(opt); });

    CLI::App* simulate =
        app.add_subcommand("simulate", "draw a synthetic data file from stored params");
    simulate->add_option("--params", opt.params_file, "params file, as written by fit --out")
        ->required();
    simulate->add_option("--n", opt.n_draws, "number of draws")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", opt.seed, "sampling seed")->capture_default_str();
    simulate->add_option("--out", opt.out_dir, "directory for simulated.csv")->required();
    simulate->callback([&] { rc = wealthfit::cmd_simulate(opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const wealthfit::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const wealthfit::report_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const wealthmix::ingest_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const wealthmix::unmatched_period& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const wealthmix::convergence_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const wealthmix::unreliable_pvalue& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const wealthmix::insufficient_data& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const wealthmix::impossible_likelihood& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const wealthmix::degenerate_comparison& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return rc;
}
