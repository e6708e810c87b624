#include "commands.hpp"

#include "covshift/binormal.hpp"
#include "covshift/csv.hpp"
#include "covshift/errors.hpp"
#include "covshift/estimators.hpp"
#include "covshift/probing.hpp"
#include "covshift/sample.hpp"
#include "covshift/theorem_sweep.hpp"
#include "covshift/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace covshift::cli {

namespace {

// Collects rows and writes header, rows and the trailer in one go.
class CsvFile {
public:
    explicit CsvFile(std::string_view header) { body_ << header << '\n'; }

    void row(const std::string& line) {
        body_ << line << '\n';
        ++rows_;
    }

    std::size_t rows() const { return rows_; }

    std::filesystem::path write(const RunConfig& config, const std::string& name) {
        std::filesystem::create_directories(config.out);
        const auto path = config.out / name;
        std::ofstream out(path, std::ios::binary);
        out << body_.str() << "# seed=" << config.seed << " version=" << kVersion << '\n';
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        return path;
    }

private:
    std::ostringstream body_;
    std::size_t rows_ = 0;
};

// Distinct deterministic seeds for the samples of one run.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return seed + 0x9E3779B97F4A7C15ULL * stream;
}

enum Stream : std::uint64_t { kSourceStream = 1, kCsStream = 2, kPpsStream = 3 };

double bayes_cut(const binormal::BinormalParams& params) {
    const auto c = binormal::coefficients(params);
    return -c.b / c.a;
}

std::string report_row(const std::string& target, const estimators::EstimatorReport& r) {
    return target + "," + estimators::to_csv_row(r);
}

std::string plain_row(const std::string& target, const std::string& method, double value,
                      std::size_t n) {
    return target + "," + method + "," + format_real(value) + "," + std::to_string(n) + ",false," +
           format_real(value);
}

} // namespace

int cmd_figure1(const RunConfig& config, std::ostream& log) {
    config.validate();
    const auto grid = binormal::uniform_grid(0.0, 1.0, config.figure1_q_step);
    CsvFile csv("q,pps_estimate,cs_estimate");
    for (const auto& r : binormal::figure1_curves(config.model, grid, config.quad)) {
        csv.row(format_real(r.q) + "," + format_real(r.pps_estimate) + "," +
                format_real(r.cs_estimate));
    }
    const auto path = csv.write(config, "figure1.csv");
    log << "wrote " << path.string() << " (" << csv.rows() << " rows)\n";
    return kExitOk;
}

int cmd_figure2(const RunConfig& config, std::ostream& log) {
    config.validate();
    const auto grid =
        binormal::uniform_grid(config.figure2_x_min, config.figure2_x_max, config.figure2_x_step);
    CsvFile csv("x,pseudo_prior,true_prior");
    for (const auto& r : binormal::figure2_curve(config.model, grid, config.quad)) {
        csv.row(format_real(r.x) + "," + format_real(r.pseudo_prior) + "," +
                format_real(r.true_prior));
    }
    const auto path = csv.write(config, "figure2.csv");
    log << "wrote " << path.string() << " (" << csv.rows() << " rows)\n";
    return kExitOk;
}

int cmd_theorem_check(const RunConfig& config, std::ostream& log) {
    config.validate();
    const auto report = finite::run_theorem_sweep(config.sweep());
    CsvFile csv("n,sufficient,inherited,agree");
    for (const auto& c : report.cases) {
        csv.row(std::to_string(c.n) + "," + format_bool(c.sufficient) + "," +
                format_bool(c.inherited) + "," + format_bool(c.agree()));
    }
    const auto path = csv.write(config, "verdicts.csv");
    log << "wrote " << path.string() << " (" << report.cases.size() << " cases over "
        << report.structures << " structures, " << report.sufficient_cases << " sufficient, "
        << report.disagreements << " disagreements)\n";
    if (report.disagreements > 0) {
        log << "sufficiency and inheritance disagree on " << report.disagreements << " cases\n";
        return kExitFalsified;
    }
    return kExitOk;
}

int cmd_probing(const RunConfig& config, std::ostream& log) {
    config.validate();
    const auto& model = config.model;
    const auto coef = binormal::coefficients(model);
    auto posterior = [&](double x) { return binormal::posterior(x, coef); };
    const double split = config.x_threshold.value_or(bayes_cut(model));
    const estimators::ThresholdClassifier clf{bayes_cut(model)};

    const auto source =
        binormal::sample_source(model, config.source_n, stream_seed(config.seed, kSourceStream));
    const auto grid = probing::CostGrid::uniform(config.probing_grid_n, config.probing_t_max);

    const probing::BinormalLoss analytic(model);
    const probing::SampleLoss empirical(source);
    struct Fit {
        std::string name;
        const probing::LossEvaluator* src;
        probing::RefineResult refined;
    };
    std::vector<Fit> fits;
    fits.push_back({"bayes", &analytic,
                    probing::refine(probing::fit_ensemble(grid, analytic, probing::Family::kBayes),
                                    analytic, config.probing_max_iter,
                                    config.probing_improvement_eps)});
    fits.push_back({"empirical", &empirical,
                    probing::refine(probing::fit_ensemble(grid, empirical,
                                                          probing::Family::kEmpiricalThreshold),
                                    empirical, config.probing_max_iter,
                                    config.probing_improvement_eps)});

    struct Target {
        std::string name;
        UnlabeledSample sample;
        double truth;
    };
    const std::vector<Target> targets = {
        {"cs",
         binormal::sample_target_cs(model, config.target_n, stream_seed(config.seed, kCsStream)),
         binormal::true_target_prior(model, config.quad)},
        {"pps",
         binormal::sample_target_pps(model, config.pps_q, config.target_n,
                                     stream_seed(config.seed, kPpsStream)),
         config.pps_q},
    };

    CsvFile summary("target,method,estimate,n_target,clipped,raw");
    std::vector<std::filesystem::path> written;
    for (const auto& target : targets) {
        const std::size_t n = target.sample.size();
        summary.row(plain_row(target.name, "reference", target.truth, n));
        for (const auto& fit : fits) {
            const auto result = probing::estimate_prior(fit.refined, *fit.src, target.sample);
            summary.row(plain_row(target.name, "probing_" + fit.name, result.q_hat, n));

            CsvFile one(probing::kResultCsvHeader);
            one.row(probing::to_csv_row(result));
            written.push_back(one.write(config, "probing_" + fit.name + "_" + target.name + ".csv"));
            if (config.probing_dump_index) {
                CsvFile index(probing::kIndexCsvHeader);
                for (const auto& line : probing::index_rows(result)) {
                    index.row(line);
                }
                written.push_back(
                    index.write(config, "probing_" + fit.name + "_" + target.name + "_index.csv"));
            }
        }
        summary.row(report_row(target.name, estimators::pa_estimate(posterior, target.sample)));
        summary.row(report_row(target.name, estimators::cc_estimate(clf, target.sample)));
        summary.row(report_row(target.name, estimators::acc_estimate(clf, source, target.sample)));
        summary.row(
            report_row(target.name, estimators::mean_matching_estimate(model, target.sample)));
        summary.row(report_row(target.name,
                               estimators::discretized_estimate(model, split, target.sample)));
    }
    written.insert(written.begin(), summary.write(config, "probing.csv"));
    for (const auto& p : written) {
        log << "wrote " << p.string() << '\n';
    }
    return kExitOk;
}

int cmd_estimate(const RunConfig& config, std::ostream& log) {
    config.validate();
    if (!config.estimate_target) {
        throw ConfigError("estimate needs a target sample (--target PATH)");
    }
    const auto& model = config.model;
    const auto coef = binormal::coefficients(model);
    const auto target = read_unlabeled_sample(*config.estimate_target);
    const estimators::ThresholdClassifier clf{bayes_cut(model)};

    CsvFile csv(estimators::kReportCsvHeader);
    csv.row(estimators::to_csv_row(estimators::pa_estimate(
        [&](double x) { return binormal::posterior(x, coef); }, target)));
    csv.row(estimators::to_csv_row(estimators::cc_estimate(clf, target)));
    if (config.estimate_source) {
        const auto source = read_labeled_sample(*config.estimate_source);
        csv.row(estimators::to_csv_row(estimators::acc_estimate(clf, source, target)));
    }
    csv.row(estimators::to_csv_row(estimators::mean_matching_estimate(model, target)));
    csv.row(estimators::to_csv_row(estimators::discretized_estimate(
        model, config.x_threshold.value_or(bayes_cut(model)), target)));
    const auto path = csv.write(config, "estimates.csv");
    log << "wrote " << path.string() << " (" << csv.rows() << " estimators, n_target="
        << target.size() << ")\n";
    return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Class prior estimation under covariate shift: figures, theorem checks, probing"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string config_path;
    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);

    // One flag per configuration key; values are kept as text and applied
    // after the config file so that flags win.
    std::map<std::string, std::string> flag_values;
    std::vector<std::pair<std::string, CLI::Option*>> flag_options;
    for (const auto& key : config_keys()) {
        std::string names = "--" + key.name;
        if (key.name == "estimate.source") {
            names += ",--source";
        } else if (key.name == "estimate.target") {
            names += ",--target";
        }
        auto* opt = app.add_option(names, flag_values[key.name], key.help);
        flag_options.emplace_back(key.name, opt);
    }

    struct Sub {
        CLI::App* app;
        int (*run)(const RunConfig&, std::ostream&);
    };
    const std::vector<Sub> subs = {
        {app.add_subcommand("figure1", "cs-assumption vs prior-shift estimates across mixture weights"),
         cmd_figure1},
        {app.add_subcommand("figure2", "pseudo-prior from one split vs the true target prior"),
         cmd_figure2},
        {app.add_subcommand("theorem-check",
                            "sufficiency vs inheritance of covariate shift on small spaces"),
         cmd_theorem_check},
        {app.add_subcommand("probing", "probing and standard estimators on simulated targets"),
         cmd_probing},
        {app.add_subcommand("estimate", "estimators on sample files"), cmd_estimate},
    };
    for (const auto& s : subs) {
        s.app->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    RunConfig config;
    try {
        if (!config_path.empty()) {
            for (const auto& [key, value] : read_config_file(config_path)) {
                apply_setting(config, key, value);
            }
        }
        for (const auto& [key, opt] : flag_options) {
            if (opt->count() > 0) {
                apply_setting(config, key, flag_values[key]);
            }
        }
        config.validate();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    for (const auto& s : subs) {
        if (s.app->parsed()) {
            try {
                return s.run(config, out);
            } catch (const std::exception& e) {
                err << "error: " << e.what() << '\n';
                return kExitUsage;
            }
        }
    }
    return kExitUsage;
}

} // namespace covshift::cli
