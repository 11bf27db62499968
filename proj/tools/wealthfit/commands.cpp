#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "kvdoc.hpp"
#include "wealthmix/diagnostics.hpp"
#include "wealthmix/error.hpp"
#include "wealthmix/estimation.hpp"
#include "wealthmix/gof.hpp"
#include "wealthmix/ingest.hpp"
#include "wealthmix/mixture.hpp"
#include "wealthmix/random.hpp"
#include "wealthmix/sample.hpp"

namespace wealthfit {
namespace {

namespace fs = std::filesystem;
namespace wm = wealthmix;

std::vector<std::string> split_words(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> words;
    std::string word;
    while (in >> word) words.push_back(word);
    return words;
}

std::string sanitize(const std::string& text) {
    std::string token;
    for (const char c : text) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                          (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        token.push_back(keep ? c : '_');
    }
    if (token.empty()) token = "_";
    return token;
}

// Stable key tokens for period names, disambiguated when sanitization collides.
std::map<std::string, std::string> period_tokens(
    const std::map<std::string, wm::WeightedSample>& samples) {
    std::map<std::string, std::string> tokens;
    std::set<std::string> used;
    for (const auto& [period, sample] : samples) {
        std::string token = sanitize(period);
        while (!used.insert(token).second) token += "_";
        tokens[period] = token;
    }
    return tokens;
}

wm::ColumnMap parse_columns(const std::string& spec) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream in(spec);
    while (std::getline(in, token, ':')) parts.push_back(token);
    if (parts.size() > 4) throw usage_error("--columns takes at most wealth:weight:size:period");
    parts.resize(4);
    if (parts[0].empty()) throw usage_error("--columns: a wealth column name is required");
    wm::ColumnMap columns;
    columns.wealth = parts[0];
    columns.weight = parts[1];
    columns.size = parts[2];
    columns.period = parts[3];
    return columns;
}

std::map<std::string, wm::WeightedSample> load_samples(const Options& opt) {
    const wm::LoadResult loaded = wm::load_records(opt.input, parse_columns(opt.columns));
    for (const auto& warning : loaded.warnings) std::cerr << "warning: " << warning << "\n";
    if (!loaded.rejects.empty()) {
        std::cerr << "warning: rejected " << loaded.rejects.size() << " row(s) of " << opt.input
                  << ":\n";
        const std::size_t shown = std::min<std::size_t>(loaded.rejects.size(), 5);
        for (std::size_t i = 0; i < shown; ++i)
            std::cerr << "  line " << loaded.rejects[i].line << ": " << loaded.rejects[i].reason
                      << "\n";
        if (loaded.rejects.size() > shown)
            std::cerr << "  (" << loaded.rejects.size() - shown << " more)\n";
    }
    if (opt.deflators.empty()) return wm::preprocess(loaded.records);
    return wm::preprocess(loaded.records, wm::load_deflators(opt.deflators));
}

wm::MixtureParams params_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw wm::ingest_error("cannot open params file: " + path);
    try {
        return wm::read_mixture_params(in);
    } catch (const wm::ingest_error&) {
        throw;
    } catch (const std::exception& e) {
        throw wm::ingest_error("params file " + path + ": " + e.what());
    }
}

std::vector<wm::Family> requested_families(const std::string& flag) {
    if (flag == "all")
        return {wm::Family::SinghMaddala, wm::Family::Dagum, wm::Family::KappaGen};
    return {wm::family_from_name(flag)};
}

wm::FitConfig fit_config(const Options& opt) {
    wm::FitConfig cfg;
    cfg.max_iterations = opt.max_iterations;
    cfg.gradient_tolerance = opt.gradient_tolerance;
    cfg.step_tolerance = opt.step_tolerance;
    cfg.normalize_weights = !opt.raw_weights;
    cfg.init_strategy =
        opt.init == "fixed" ? wm::InitStrategy::FixedDefault : wm::InitStrategy::MomentMatching;
    return cfg;
}

// Natural-scale values in the same order as FitResult::param_names.
std::vector<double> param_values(const wm::FitResult& fit) {
    std::vector<double> values = {fit.params.theta1, fit.params.theta2};
    if (fit.weibull_included) {
        values.push_back(fit.params.weibull.s);
        values.push_back(fit.params.weibull.lambda);
    }
    std::visit(
        [&values](const auto& pp) {
            using T = std::decay_t<decltype(pp)>;
            if constexpr (std::is_same_v<T, wm::SMParams>) {
                values.insert(values.end(), {pp.a, pp.b, pp.q});
            } else if constexpr (std::is_same_v<T, wm::DagumParams>) {
                values.insert(values.end(), {pp.a, pp.b, pp.p});
            } else {
                values.insert(values.end(), {pp.alpha, pp.beta, pp.kappa});
            }
        },
        fit.params.positive);
    return values;
}

struct Implied {
    std::optional<double> mean;
    std::optional<double> gini;
    bool gini_exceeds_one = false;
    std::optional<double> gamma;
    std::string mean_error;
    std::string gini_error;
    std::string gamma_error;
};

Implied implied_columns(const wm::MixtureParams& m) {
    Implied implied;
    try {
        implied.mean = wm::mixture_mean(m);
    } catch (const std::exception& e) {
        implied.mean_error = e.what();
    }
    try {
        const wm::GiniValue gini = wm::mixture_gini_closed(m);
        implied.gini = gini.value;
        implied.gini_exceeds_one = gini.exceeds_one;
    } catch (const std::exception& e) {
        implied.gini_error = e.what();
    }
    try {
        implied.gamma = wm::pareto_tail_index(m);
    } catch (const std::exception& e) {
        implied.gamma_error = e.what();
    }
    return implied;
}

void report_implied(KvDoc& doc, const std::string& prefix, const Implied& implied) {
    if (implied.mean)
        doc.set(prefix + ".mean.closed", *implied.mean);
    else
        doc.set(prefix + ".mean.error", implied.mean_error);
    if (implied.gini) {
        doc.set(prefix + ".gini.closed", *implied.gini);
        doc.set(prefix + ".gini.exceeds_one", implied.gini_exceeds_one);
    } else {
        doc.set(prefix + ".gini.error", implied.gini_error);
    }
    if (implied.gamma)
        doc.set(prefix + ".gamma.tail", *implied.gamma);
    else
        doc.set(prefix + ".gamma.error", implied.gamma_error);
}

void report_fit(KvDoc& doc, const std::string& prefix, const wm::FitResult& fit,
                std::size_t n_obs) {
    const wm::InformationCriteria ic = wm::information_criteria(fit.loglik, fit.n_params, n_obs);
    doc.set(prefix + ".converged", fit.converged);
    doc.set(prefix + ".weibull_included", fit.weibull_included);
    doc.set(prefix + ".saddle_warning", fit.saddle_warning);
    doc.set(prefix + ".iterations", fit.iterations);
    doc.set(prefix + ".n_params", fit.n_params);
    doc.set(prefix + ".loglik", fit.loglik);
    doc.set(prefix + ".aic", ic.aic);
    doc.set(prefix + ".bic", ic.bic);
    const std::vector<double> values = param_values(fit);
    for (std::size_t i = 0; i < fit.param_names.size(); ++i) {
        doc.set(prefix + ".param." + fit.param_names[i], values[i]);
        doc.set(prefix + ".se." + fit.param_names[i], fit.std_errors[i]);
    }
}

wm::MixtureParams params_from_report(const KvDoc& doc, const std::string& prefix,
                                     wm::Family family) {
    const auto param = [&doc, &prefix](const char* name) {
        return doc.number(prefix + ".param." + name);
    };
    const wm::WeibullNegParams weibull =
        doc.flag(prefix + ".weibull_included")
            ? wm::WeibullNegParams(param("s"), param("lambda"))
            : wm::WeibullNegParams(1.0, 1.0);
    wm::PositiveBranch branch = [&]() -> wm::PositiveBranch {
        switch (family) {
            case wm::Family::SinghMaddala:
                return wm::SMParams(param("a"), param("b"), param("q"));
            case wm::Family::Dagum:
                return wm::DagumParams(param("a"), param("b"), param("p"));
            case wm::Family::KappaGen:
                return wm::KappaGenParams(param("alpha"), param("beta"), param("kappa"));
        }
        throw std::logic_error("params_from_report: unhandled family");
    }();
    return wm::MixtureParams(param("theta1"), param("theta2"), weibull, branch);
}

struct ReportEntry {
    std::string fam;
    wm::Family family;
    wm::MixtureParams params;
};

// Verbatim period name -> key token of a fit report.
std::map<std::string, std::string> report_period_names(const KvDoc& doc) {
    if (!doc.contains("report.kind") || doc.get("report.kind") != "fit")
        throw report_error("expected a fit report (report.kind = fit)");
    std::map<std::string, std::string> names;
    for (const std::string& token : split_words(doc.get("report.periods")))
        names[doc.get("period." + token + ".name")] = token;
    return names;
}

std::vector<ReportEntry> report_entries(const KvDoc& doc, const std::string& token) {
    std::vector<ReportEntry> entries;
    for (const std::string& fam : split_words(doc.get("period." + token + ".families"))) {
        try {
            const wm::Family family = wm::family_from_name(fam);
            entries.push_back(
                {fam, family, params_from_report(doc, "period." + token + ".family." + fam, family)});
        } catch (const report_error&) {
            throw;
        } catch (const std::exception& e) {
            throw report_error("fit report entry '" + fam + "', period token '" + token +
                               "': " + e.what());
        }
    }
    return entries;
}

std::string cell(const std::optional<double>& value, const char* format = "%.6g") {
    if (!value) return "-";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, format, *value);
    return buffer;
}

fs::path prepare_out_dir(const std::string& out_dir) {
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw usage_error("cannot create output directory " + out_dir + ": " + ec.message());
    return dir;
}

void write_series_file(const fs::path& path, const wm::SeriesTable& table,
                       std::vector<std::string>& written) {
    std::ofstream out(path);
    if (!out) throw usage_error("cannot write " + path.string());
    wm::write_series(out, table);
    out.flush();
    if (!out) throw usage_error("failed writing " + path.string());
    written.push_back(path.string());
}

std::string tsv_safe(const std::string& text) {
    std::string safe = text;
    for (char& c : safe)
        if (c == '\t') c = ' ';
    return safe;
}

}  // namespace

int cmd_summarize(const Options& opt) {
    const auto samples = load_samples(opt);
    const auto tokens = period_tokens(samples);
    const char* gini_tag = opt.gini_normalized ? "gini[normalized]" : "gini[cov]";

    KvDoc doc;
    doc.set("report.kind", "summary");
    doc.set("report.gini.convention", opt.gini_normalized ? "normalized" : "covariance");

    std::printf("%-10s %8s %14s %14s %10s %10s %16s %7s %7s %7s\n", "period", "n_obs", "mean[w]",
                "median[w]", "skew[m3]", "kurt[m4]", gini_tag, "%neg", "%zero", "%pos");

    std::string period_list;
    std::ostringstream tsv;
    tsv << "period\tn_obs\tmean\tmedian\tskewness\tkurtosis\tgini\tshare_negative\tshare_zero\t"
           "share_positive\n";
    for (const auto& [period, sample] : samples) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        wm::SummaryStats st{sample.size(),
                            wm::weighted_mean(sample),
                            wm::weighted_median(sample),
                            nan,
                            nan,
                            nan,
                            sample.weight_share_negative(),
                            sample.weight_share_zero(),
                            sample.weight_share_positive()};
        std::string stats_error;
        try {
            st = wm::summary_stats(sample);
        } catch (const std::exception& e) {
            stats_error = e.what();
        }
        double gini = st.gini;
        if (opt.gini_normalized) {
            try {
                gini = wm::empirical_gini_normalized(sample);
            } catch (const std::exception& e) {
                gini = nan;
                if (stats_error.empty()) stats_error = e.what();
            }
        }

        std::printf("%-10s %8zu %14.6g %14.6g %10.4g %10.4g %16.4f %7.3f %7.3f %7.3f\n",
                    period.c_str(), st.n_obs, st.mean, st.median, st.skewness, st.kurtosis, gini,
                    100.0 * st.share_negative, 100.0 * st.share_zero, 100.0 * st.share_positive);
        if (!stats_error.empty()) std::printf("  note: %s\n", stats_error.c_str());

        const std::string token = tokens.at(period);
        if (!period_list.empty()) period_list += " ";
        period_list += token;
        const std::string pp = "period." + token;
        doc.set(pp + ".name", period);
        doc.set(pp + ".n_obs", st.n_obs);
        doc.set(pp + ".weight_total", sample.total_weight());
        doc.set(pp + ".mean", st.mean);
        doc.set(pp + ".median", st.median);
        doc.set(pp + ".skewness", st.skewness);
        doc.set(pp + ".kurtosis", st.kurtosis);
        doc.set(pp + ".gini", gini);
        doc.set(pp + ".share.negative", st.share_negative);
        doc.set(pp + ".share.zero", st.share_zero);
        doc.set(pp + ".share.positive", st.share_positive);
        if (!stats_error.empty()) doc.set(pp + ".error", stats_error);

        char row[512];
        std::snprintf(row, sizeof row,
                      "%s\t%zu\t%.12g\t%.12g\t%.12g\t%.12g\t%.12g\t%.12g\t%.12g\t%.12g\n",
                      tsv_safe(period).c_str(), st.n_obs, st.mean, st.median, st.skewness,
                      st.kurtosis, gini, st.share_negative, st.share_zero, st.share_positive);
        tsv << row;
    }
    doc.set("report.periods", period_list);

    if (!opt.out_dir.empty()) {
        const fs::path dir = prepare_out_dir(opt.out_dir);
        doc.write_file((dir / "summary.kv").string());
        std::ofstream out(dir / "summary.tsv");
        if (!out) throw usage_error("cannot write " + (dir / "summary.tsv").string());
        out << tsv.str();
        out.flush();
        if (!out) throw usage_error("failed writing " + (dir / "summary.tsv").string());
        std::printf("wrote %s\nwrote %s\n", (dir / "summary.kv").string().c_str(),
                    (dir / "summary.tsv").string().c_str());
    }
    return 0;
}

namespace {

int fit_replay(const Options& opt) {
    const wm::MixtureParams m = params_from_file(opt.params_file);
    const std::string fam = wm::family_name(m.family());
    const Implied implied = implied_columns(m);

    std::printf("replay of %s (no data, no refit): family %s\n", opt.params_file.c_str(),
                fam.c_str());
    std::printf("  theta1=%.6g theta2=%.6g s=%.6g lambda=%.6g", m.theta1, m.theta2, m.weibull.s,
                m.weibull.lambda);
    std::visit(
        [](const auto& pp) {
            using T = std::decay_t<decltype(pp)>;
            if constexpr (std::is_same_v<T, wm::SMParams>) {
                std::printf(" a=%.6g b=%.6g q=%.6g\n", pp.a, pp.b, pp.q);
            } else if constexpr (std::is_same_v<T, wm::DagumParams>) {
                std::printf(" a=%.6g b=%.6g p=%.6g\n", pp.a, pp.b, pp.p);
            } else {
                std::printf(" alpha=%.6g beta=%.6g kappa=%.6g\n", pp.alpha, pp.beta, pp.kappa);
            }
        },
        m.positive);
    std::printf("  mean[closed] = %s\n", cell(implied.mean).c_str());
    std::printf("  gini[closed] = %s\n", cell(implied.gini, "%.4f").c_str());
    std::printf("  gamma[tail]  = %s\n", cell(implied.gamma, "%.4f").c_str());
    if (!implied.mean_error.empty()) std::printf("  note: mean: %s\n", implied.mean_error.c_str());
    if (!implied.gini_error.empty()) std::printf("  note: gini: %s\n", implied.gini_error.c_str());
    if (!implied.gamma_error.empty())
        std::printf("  note: gamma: %s\n", implied.gamma_error.c_str());

    if (!opt.out_dir.empty()) {
        const bool with_weibull = m.theta1 > 0.0;
        KvDoc doc;
        doc.set("report.kind", "fit");
        doc.set("report.replay", true);
        doc.set("report.periods", "all");
        const std::string pp = "period.all";
        doc.set(pp + ".name", "all");
        doc.set(pp + ".families", fam);
        const std::string fp = pp + ".family." + fam;
        doc.set(fp + ".weibull_included", with_weibull);
        doc.set(fp + ".n_params", with_weibull ? 7 : 5);
        doc.set(fp + ".param.theta1", m.theta1);
        doc.set(fp + ".param.theta2", m.theta2);
        if (with_weibull) {
            doc.set(fp + ".param.s", m.weibull.s);
            doc.set(fp + ".param.lambda", m.weibull.lambda);
        }
        std::visit(
            [&doc, &fp](const auto& pp2) {
                using T = std::decay_t<decltype(pp2)>;
                if constexpr (std::is_same_v<T, wm::SMParams>) {
                    doc.set(fp + ".param.a", pp2.a);
                    doc.set(fp + ".param.b", pp2.b);
                    doc.set(fp + ".param.q", pp2.q);
                } else if constexpr (std::is_same_v<T, wm::DagumParams>) {
                    doc.set(fp + ".param.a", pp2.a);
                    doc.set(fp + ".param.b", pp2.b);
                    doc.set(fp + ".param.p", pp2.p);
                } else {
                    doc.set(fp + ".param.alpha", pp2.alpha);
                    doc.set(fp + ".param.beta", pp2.beta);
                    doc.set(fp + ".param.kappa", pp2.kappa);
                }
            },
            m.positive);
        report_implied(doc, fp, implied);
        const fs::path dir = prepare_out_dir(opt.out_dir);
        doc.write_file((dir / "fit.kv").string());
        std::printf("wrote %s\n", (dir / "fit.kv").string().c_str());
    }
    return 0;
}

}  // namespace

int cmd_fit(const Options& opt) {
    if (!opt.params_file.empty()) return fit_replay(opt);

    const auto samples = load_samples(opt);
    const auto tokens = period_tokens(samples);
    const std::vector<wm::Family> families = requested_families(opt.family);
    const wm::FitConfig cfg = fit_config(opt);

    KvDoc doc;
    doc.set("report.kind", "fit");
    doc.set("report.family_flag", opt.family);
    doc.set("report.weights", opt.raw_weights ? "raw" : "normalized");
    doc.set("report.init", opt.init);

    int failures = 0;
    std::string period_list;
    for (const auto& [period, sample] : samples) {
        const std::string token = tokens.at(period);
        if (!period_list.empty()) period_list += " ";
        period_list += token;
        const std::string pp = "period." + token;
        doc.set(pp + ".name", period);
        doc.set(pp + ".n_obs", sample.size());
        doc.set(pp + ".weight_total", sample.total_weight());

        std::printf("== period %s: %zu observations, total weight %.6g ==\n", period.c_str(),
                    sample.size(), sample.total_weight());

        struct Row {
            std::string fam;
            wm::FitResult fit;
            double aic;
            double bic;
            Implied implied;
        };
        std::vector<Row> rows;
        std::vector<std::pair<std::string, std::string>> failed;
        for (const wm::Family family : families) {
            const std::string fam = wm::family_name(family);
            try {
                wm::FitResult fit = wm::fit_mixture(sample, family, cfg);
                const wm::InformationCriteria ic =
                    wm::information_criteria(fit.loglik, fit.n_params, sample.size());
                const Implied implied = implied_columns(fit.params);
                if (!fit.converged) ++failures;
                rows.push_back({fam, std::move(fit), ic.aic, ic.bic, implied});
            } catch (const std::exception& e) {
                failed.emplace_back(fam, e.what());
                ++failures;
            }
        }
        std::sort(rows.begin(), rows.end(),
                  [](const Row& a, const Row& b) { return a.aic < b.aic; });

        std::printf("%-7s %-4s %2s %16s %15s %17s %13s %13s %12s\n", "family", "conv", "k",
                    "loglik[weighted]", "aic[-2ll+2k]", "bic[-2ll+k.lnN]", "mean[closed]",
                    "gini[closed]", "gamma[tail]");
        for (const Row& row : rows)
            std::printf("%-7s %-4s %2d %16.4f %15.4f %17.4f %13s %13s %12s\n", row.fam.c_str(),
                        row.fit.converged ? "yes" : "no", row.fit.n_params, row.fit.loglik,
                        row.aic, row.bic, cell(row.implied.mean).c_str(),
                        cell(row.implied.gini, "%.4f").c_str(),
                        cell(row.implied.gamma, "%.4f").c_str());
        for (const Row& row : rows) {
            const std::vector<double> values = param_values(row.fit);
            std::string line = "  " + row.fam;
            line.resize(std::max<std::size_t>(line.size(), 9), ' ');
            for (std::size_t i = 0; i < row.fit.param_names.size(); ++i) {
                char chunk[96];
                std::snprintf(chunk, sizeof chunk, " %s=%.6g(%.3g)",
                              row.fit.param_names[i].c_str(), values[i], row.fit.std_errors[i]);
                line += chunk;
            }
            std::printf("%s\n", line.c_str());
            if (row.fit.saddle_warning)
                std::printf("  note: %s Hessian not positive definite; standard errors are "
                            "unreliable\n",
                            row.fam.c_str());
            for (const auto& [what, message] :
                 {std::make_pair("mean", row.implied.mean_error),
                  std::make_pair("gini", row.implied.gini_error),
                  std::make_pair("gamma", row.implied.gamma_error)})
                if (!message.empty())
                    std::printf("  note: %s %s: %s\n", row.fam.c_str(), what, message.c_str());
        }
        for (const auto& [fam, message] : failed)
            std::printf("  %-7s FAILED: %s\n", fam.c_str(), message.c_str());

        std::string family_list;
        for (const Row& row : rows) {
            if (!family_list.empty()) family_list += " ";
            family_list += row.fam;
            const std::string fp = pp + ".family." + row.fam;
            report_fit(doc, fp, row.fit, sample.size());
            report_implied(doc, fp, row.implied);
        }
        doc.set(pp + ".families", family_list);
        for (const auto& [fam, message] : failed)
            doc.set(pp + ".family." + fam + ".error", message);
    }
    doc.set("report.periods", period_list);

    if (!opt.out_dir.empty()) {
        const fs::path dir = prepare_out_dir(opt.out_dir);
        doc.write_file((dir / "fit.kv").string());
        std::printf("wrote %s\n", (dir / "fit.kv").string().c_str());
        for (const auto& [period, sample] : samples) {
            const std::string token = tokens.at(period);
            for (const std::string& fam : split_words(doc.get("period." + token + ".families"))) {
                const wm::MixtureParams m = params_from_report(
                    doc, "period." + token + ".family." + fam, wm::family_from_name(fam));
                const fs::path path = dir / ("params_" + token + "_" + fam + ".kv");
                std::ofstream out(path);
                if (!out) throw usage_error("cannot write " + path.string());
                wm::write_mixture_params(out, m);
                out.flush();
                if (!out) throw usage_error("failed writing " + path.string());
                std::printf("wrote %s\n", path.string().c_str());
            }
        }
    }
    return failures == 0 ? 0 : 3;
}

int cmd_gof(const Options& opt) {
    const auto samples = load_samples(opt);
    const KvDoc fitdoc = KvDoc::read_file(opt.report_file);
    const auto name_to_token = report_period_names(fitdoc);

    std::string data_only;
    std::string report_only;
    for (const auto& [period, sample] : samples)
        if (!name_to_token.count(period)) data_only += " '" + period + "'";
    for (const auto& [name, token] : name_to_token)
        if (!samples.count(name)) report_only += " '" + name + "'";
    if (!data_only.empty() || !report_only.empty())
        throw std::invalid_argument(
            "periods of " + opt.input + " do not match the fit report " + opt.report_file + ":" +
            (data_only.empty() ? "" : " missing from report:" + data_only) +
            (report_only.empty() ? "" : " missing from data:" + report_only));

    const wm::FitConfig cfg = fit_config(opt);
    const wm::Rng seed_root(opt.seed);

    KvDoc doc;
    doc.set("report.kind", "gof");
    doc.set("report.boot", opt.boot);
    doc.set("report.seed", opt.seed);
    doc.set("report.weights", opt.raw_weights ? "raw" : "normalized");

    std::string period_list;
    std::uint64_t pair_index = 0;
    for (const auto& [period, sample] : samples) {
        const std::string token = name_to_token.at(period);
        if (!period_list.empty()) period_list += " ";
        period_list += token;
        const std::string pp = "period." + token;
        doc.set(pp + ".name", period);

        std::printf("== period %s: %zu observations ==\n", period.c_str(), sample.size());
        const std::vector<ReportEntry> entries = report_entries(fitdoc, token);
        if (entries.empty()) {
            std::printf("  no fitted families in the report for this period\n");
            doc.set(pp + ".families", "");
            continue;
        }
        std::string family_list;
        char ptag[32];
        std::snprintf(ptag, sizeof ptag, "p[boot,B=%d]", opt.boot);
        std::printf("%-7s %16s %15s %17s %11s %13s %13s\n", "family", "loglik[weighted]",
                    "aic[-2ll+2k]", "bic[-2ll+k.lnN]", "rmse[cdf]", "a2[weighted]", ptag);
        for (const ReportEntry& entry : entries) {
            if (!family_list.empty()) family_list += " ";
            family_list += entry.fam;
            const std::string fp = pp + ".family." + entry.fam;
            const double loglik = wm::weighted_loglik(entry.params, sample, !opt.raw_weights);
            const int n_params = static_cast<int>(
                fitdoc.integer("period." + token + ".family." + entry.fam + ".n_params"));
            const wm::InformationCriteria ic =
                wm::information_criteria(loglik, n_params, sample.size());
            const double rmse = wm::rmse_cdf(sample, entry.params);
            const double a2 = wm::anderson_darling(sample, entry.params);
            doc.set(fp + ".loglik", loglik);
            doc.set(fp + ".n_params", n_params);
            doc.set(fp + ".aic", ic.aic);
            doc.set(fp + ".bic", ic.bic);
            doc.set(fp + ".rmse", rmse);
            doc.set(fp + ".ad.statistic", a2);
            std::string pcell = "-";
            if (opt.boot > 0) {
                const std::uint64_t pair_seed = seed_root.stream(pair_index).seed();
                const wm::BootstrapPvalue pvalue = wm::bootstrap_pvalue(
                    sample, entry.family, opt.boot, pair_seed, wm::GofStatistic::AndersonDarling,
                    cfg);
                doc.set(fp + ".ad.pvalue", pvalue.value);
                doc.set(fp + ".ad.replications", pvalue.replications);
                doc.set(fp + ".ad.failures", pvalue.failures);
                char buffer[32];
                std::snprintf(buffer, sizeof buffer, "%.4f", pvalue.value);
                pcell = buffer;
                if (pvalue.failures > 0)
                    std::printf("  note: %s bootstrap: %d of %d replicate fits failed\n",
                                entry.fam.c_str(), pvalue.failures, pvalue.replications);
            }
            ++pair_index;
            std::printf("%-7s %16.4f %15.4f %17.4f %11.6f %13.6g %13s\n", entry.fam.c_str(),
                        loglik, ic.aic, ic.bic, rmse, a2, pcell.c_str());
        }
        doc.set(pp + ".families", family_list);

        if (entries.size() > 1) {
            std::printf("%-15s %11s %9s %9s\n", "vuong[A.vs.B]", "statistic", "pvalue",
                        "favored");
            for (std::size_t i = 0; i < entries.size(); ++i) {
                for (std::size_t j = i + 1; j < entries.size(); ++j) {
                    const wm::VuongResult vuong =
                        wm::vuong_test(sample, entries[i].params, entries[j].params);
                    const std::string favored =
                        vuong.favored == wm::VuongFavored::ModelA   ? entries[i].fam
                        : vuong.favored == wm::VuongFavored::ModelB ? entries[j].fam
                                                                    : std::string("none");
                    const std::string pair = entries[i].fam + ".vs." + entries[j].fam;
                    std::printf("%-15s %11.4f %9.4f %9s\n", pair.c_str(), vuong.statistic,
                                vuong.pvalue, favored.c_str());
                    const std::string vp =
                        pp + ".vuong." + entries[i].fam + "." + entries[j].fam;
                    doc.set(vp + ".statistic", vuong.statistic);
                    doc.set(vp + ".pvalue", vuong.pvalue);
                    doc.set(vp + ".favored", favored);
                }
            }
        }
    }
    doc.set("report.periods", period_list);

    if (!opt.out_dir.empty()) {
        const fs::path dir = prepare_out_dir(opt.out_dir);
        doc.write_file((dir / "gof.kv").string());
        std::printf("wrote %s\n", (dir / "gof.kv").string().c_str());
    }
    return 0;
}

namespace {

void series_trend(const Options& opt, const std::map<std::string, wm::WeightedSample>& samples,
                  const fs::path& dir, std::vector<std::string>& written) {
    std::vector<std::pair<double, const wm::WeightedSample*>> ordered;
    for (const auto& [period, sample] : samples) {
        double x = 0.0;
        try {
            std::size_t used = 0;
            x = std::stod(period, &used);
            if (used != period.size()) throw std::invalid_argument(period);
        } catch (const std::exception&) {
            throw std::invalid_argument("trend series needs numeric period labels, found '" +
                                        period + "'");
        }
        ordered.emplace_back(x, &sample);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < ordered.size(); ++i)
        if (!(ordered[i - 1].first < ordered[i].first))
            throw std::invalid_argument("trend series needs distinct numeric periods");

    const char* gini_tag = opt.gini_normalized ? "gini[normalized]" : "gini[cov]";
    wm::SeriesTable mean_tab{"trend mean[w]", {}};
    wm::SeriesTable median_tab{"trend median[w]", {}};
    wm::SeriesTable gini_tab{std::string("trend ") + gini_tag, {}};
    for (const auto& [x, sample] : ordered) {
        mean_tab.points.push_back({x, wm::weighted_mean(*sample)});
        median_tab.points.push_back({x, wm::weighted_median(*sample)});
        gini_tab.points.push_back({x, opt.gini_normalized ? wm::empirical_gini_normalized(*sample)
                                                          : wm::empirical_gini(*sample)});
    }
    if (!opt.base_period.empty()) {
        double base = 0.0;
        try {
            std::size_t used = 0;
            base = std::stod(opt.base_period, &used);
            if (used != opt.base_period.size()) throw std::invalid_argument(opt.base_period);
        } catch (const std::exception&) {
            throw usage_error("--base must be a numeric period, found '" + opt.base_period + "'");
        }
        mean_tab = wm::index_numbers(mean_tab, base);
        median_tab = wm::index_numbers(median_tab, base);
        gini_tab = wm::index_numbers(gini_tab, base);
    }
    write_series_file(dir / "trend_mean.tsv", mean_tab, written);
    write_series_file(dir / "trend_median.tsv", median_tab, written);
    write_series_file(dir / "trend_gini.tsv", gini_tab, written);
}

}  // namespace

int cmd_series(const Options& opt) {
    const auto samples = load_samples(opt);
    const auto tokens = period_tokens(samples);
    const fs::path dir = prepare_out_dir(opt.out_dir);

    std::optional<KvDoc> fitdoc;
    std::map<std::string, std::string> name_to_token;
    if (!opt.report_file.empty()) {
        fitdoc = KvDoc::read_file(opt.report_file);
        name_to_token = report_period_names(*fitdoc);
    }

    std::vector<std::string> written;
    if (opt.series == "trend") {
        series_trend(opt, samples, dir, written);
    } else {
        for (const auto& [period, sample] : samples) {
            const std::string token = tokens.at(period);
            std::vector<ReportEntry> overlays;
            if (fitdoc) {
                const auto at = name_to_token.find(period);
                if (at == name_to_token.end())
                    std::cerr << "warning: period '" << period
                              << "' not in the fit report; no model overlay\n";
                else
                    overlays = report_entries(*fitdoc, at->second);
            }

            if (opt.series == "lorenz") {
                std::vector<double> grid;
                grid.reserve(101);
                for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
                write_series_file(dir / ("lorenz_" + token + ".tsv"),
                                  wm::empirical_lorenz(sample, grid), written);
                for (const ReportEntry& entry : overlays) {
                    wm::SeriesTable model{"lorenz model " + entry.fam, {}};
                    try {
                        for (const double u : grid)
                            model.points.push_back({u, wm::mixture_lorenz(entry.params, u).L});
                    } catch (const std::exception& e) {
                        std::cerr << "warning: no lorenz overlay for " << entry.fam
                                  << ", period '" << period << "': " << e.what() << "\n";
                        continue;
                    }
                    write_series_file(dir / ("lorenz_" + token + "_" + entry.fam + ".tsv"),
                                      model, written);
                }
            } else if (opt.series == "mean-excess") {
                const wm::SeriesTable empirical = wm::mean_excess_series(sample);
                write_series_file(dir / ("mean_excess_" + token + ".tsv"), empirical, written);
                for (const ReportEntry& entry : overlays) {
                    wm::SeriesTable model{"mean_excess model " + entry.fam, {}};
                    try {
                        const double branch_mean = wm::branch_moment(entry.params.positive, 1);
                        const wm::MixtureParams positive_only(
                            0.0, 0.0, wm::WeibullNegParams(1.0, 1.0), entry.params.positive);
                        for (const wm::SeriesPoint& point : empirical.points) {
                            const double u = wm::branch_cdf(entry.params.positive, point.x);
                            const double survivor =
                                wm::branch_survivor(entry.params.positive, point.x);
                            if (survivor <= 0.0) break;
                            const double lorenz = wm::mixture_lorenz(positive_only, u).L;
                            model.points.push_back(
                                {point.x, branch_mean * (1.0 - lorenz) / survivor - point.x});
                        }
                    } catch (const std::exception& e) {
                        std::cerr << "warning: no mean-excess overlay for " << entry.fam
                                  << ", period '" << period << "': " << e.what() << "\n";
                        continue;
                    }
                    write_series_file(dir / ("mean_excess_" + token + "_" + entry.fam + ".tsv"),
                                      model, written);
                }
            } else if (opt.series == "zipf") {
                const wm::SeriesTable empirical = wm::zipf_series(sample);
                write_series_file(dir / ("zipf_" + token + ".tsv"), empirical, written);
                for (const ReportEntry& entry : overlays) {
                    wm::SeriesTable model{"zipf model " + entry.fam, {}};
                    for (const wm::SeriesPoint& point : empirical.points) {
                        const double survivor =
                            wm::branch_survivor(entry.params.positive, std::exp(point.x));
                        if (survivor <= 0.0) break;
                        model.points.push_back({point.x, std::log(survivor)});
                    }
                    write_series_file(dir / ("zipf_" + token + "_" + entry.fam + ".tsv"), model,
                                      written);
                }
            } else {
                throw usage_error("unknown series '" + opt.series + "'");
            }
        }
    }
    for (const std::string& path : written) std::printf("wrote %s\n", path.c_str());
    return 0;
}

int cmd_simulate(const Options& opt) {
    const wm::MixtureParams m = params_from_file(opt.params_file);
    if (opt.n_draws <= 0) throw usage_error("--n must be positive");
    const wm::WeightedSample sample =
        wm::mixture_sample(m, static_cast<std::size_t>(opt.n_draws), opt.seed);
    const fs::path dir = prepare_out_dir(opt.out_dir);
    const fs::path path = dir / "simulated.csv";
    std::ofstream out(path);
    if (!out) throw usage_error("cannot write " + path.string());
    out << "wealth,weight,period\n";
    for (const double w : sample.values()) {
        char buffer[48];
        std::snprintf(buffer, sizeof buffer, "%.17g", w);
        out << buffer << ",1,all\n";
    }
    out.flush();
    if (!out) throw usage_error("failed writing " + path.string());
    std::printf("wrote %s (%zu rows)\n", path.string().c_str(), sample.size());
    return 0;
}

}  // namespace wealthfit
