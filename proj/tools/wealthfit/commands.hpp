#ifndef WEALTHFIT_COMMANDS_HPP
#define WEALTHFIT_COMMANDS_HPP

#include <cstdint>
#include <string>

namespace wealthfit {

// One flat bag of flag values; each command reads the subset its subcommand
// declared. Defaults here are the documented flag defaults.
struct Options {
    std::string input;
    std::string columns = "wealth:weight::";
    std::string deflators;
    std::string params_file;
    std::string report_file;
    std::string out_dir;
    std::string family = "all";
    std::string series;
    std::string base_period;
    int boot = 100;
    long long n_draws = 10000;
    std::uint64_t seed = 1;
    bool gini_normalized = false;
    bool raw_weights = false;
    int max_iterations = 200;
    double gradient_tolerance = 1e-6;
    double step_tolerance = 1e-10;
    std::string init = "moment";
};

int cmd_summarize(const Options& opt);
int cmd_fit(const Options& opt);
int cmd_gof(const Options& opt);
int cmd_series(const Options& opt);
int cmd_simulate(const Options& opt);

}  // namespace wealthfit

#endif
