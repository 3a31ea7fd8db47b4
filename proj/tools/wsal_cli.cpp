// Command-line front end. Talks to the library only through wsal.h.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wsal/wsal.h"

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDataError = 3;
constexpr int kRuntimeError = 4;
constexpr int kVacuous = 5;

int report_error(const char* context, wsal_status status, int code) {
    std::fprintf(stderr, "wsal %s: %s: %s\n", context, wsal_status_name(status), wsal_last_error());
    return code;
}

bool is_data_error(wsal_status s) {
    return s == WSAL_E_IO || s == WSAL_E_MISSING_COLUMN || s == WSAL_E_NON_NUMERIC_CELL || s == WSAL_E_EMPTY_FILE ||
           s == WSAL_E_MALFORMED_ROW || s == WSAL_E_INSUFFICIENT_CLASS_INSTANCES;
}

int cmd_run(const std::string& config_path) {
    wsal_config* cfg = nullptr;
    if (wsal_status s = wsal_config_load(config_path.c_str(), &cfg); s != WSAL_OK)
        return report_error("run", s, kConfigError);

    wsal_dataset* ds = nullptr;
    if (wsal_status s = wsal_config_load_dataset(cfg, &ds); s != WSAL_OK) {
        wsal_config_free(cfg);
        return report_error("run", s, kDataError);
    }

    wsal_result* res = nullptr;
    wsal_status s = wsal_experiment_run(cfg, ds, &res);
    int code = kOk;
    if (s != WSAL_OK) {
        // infeasible settings for this dataset are reported as config errors
        const int exit_code = s == WSAL_E_INVALID_ARGUMENT || s == WSAL_E_CONFIG ? kConfigError
                              : is_data_error(s)                                 ? kDataError
                                                                                 : kRuntimeError;
        code = report_error("run", s, exit_code);
    } else if (s = wsal_result_write(res); s != WSAL_OK) {
        code = report_error("run", s, kRuntimeError);
    } else {
        std::printf("records: %zu\nfinal accuracy: %.4f +- %.4f%s\n", wsal_result_record_count(res),
                    wsal_result_final_mean(res), wsal_result_final_std(res),
                    wsal_result_std_defined(res) ? "" : " (single trial; std undefined, reported as 0)");
    }
    wsal_result_free(res);
    wsal_dataset_free(ds);
    wsal_config_free(cfg);
    return code;
}

int cmd_bound(double beta, double chi, int k, double delta) {
    wsal_lemma_report rep{};
    const wsal_status s = wsal_lemma_bound(beta, chi, k, delta, &rep);
    if (s == WSAL_E_INVALID_ARGUMENT) return report_error("bound", s, kConfigError);
    if (s != WSAL_OK && s != WSAL_E_VACUOUS_BOUND) return report_error("bound", s, kRuntimeError);
    std::printf("eta = %.6f\nzeta = %.6f\np_s = %.6f\n", rep.eta, rep.zeta, rep.p_s);
    if (s == WSAL_E_VACUOUS_BOUND) {
        std::printf("n_s = undefined\n");
        std::fprintf(stderr,
                     "wsal bound: vacuous bound: p_s <= 0, so no number of draws is guaranteed to hit the pocket; "
                     "increase k or chi\n");
        return kVacuous;
    }
    std::printf("n_s = %llu\n", static_cast<unsigned long long>(rep.n_s));
    return kOk;
}

struct SynthArgs {
    wsal_synth_spec spec{};
    std::vector<double> train_prevalence;
    std::vector<double> pool_prevalence;
    std::string out;
    std::string manifest;
};

int cmd_synth(SynthArgs& a) {
    if (!a.train_prevalence.empty()) a.spec.train_prevalence = a.train_prevalence.data();
    if (!a.pool_prevalence.empty()) a.spec.pool_prevalence = a.pool_prevalence.data();
    if ((!a.train_prevalence.empty() && a.train_prevalence.size() != static_cast<size_t>(a.spec.k)) ||
        (!a.pool_prevalence.empty() && a.pool_prevalence.size() != static_cast<size_t>(a.spec.k))) {
        std::fprintf(stderr, "wsal synth: prevalence vectors must have --k entries\n");
        return kConfigError;
    }
    wsal_dataset* ds = nullptr;
    if (wsal_status s = wsal_synth_generate(&a.spec, &ds); s != WSAL_OK) return report_error("synth", s, kConfigError);

    std::string manifest = a.manifest;
    if (manifest.empty()) manifest = std::filesystem::path(a.out).replace_extension(".pocket.json").string();
    int code = kOk;
    if (wsal_status s = wsal_dataset_save_csv(ds, a.out.c_str()); s != WSAL_OK) {
        code = report_error("synth", s, kDataError);
    } else if (s = wsal_dataset_save_pocket_manifest(ds, manifest.c_str()); s != WSAL_OK) {
        code = report_error("synth", s, kDataError);
    } else {
        std::printf("rows: %zu\npocket ids: %zu\ncsv: %s\nmanifest: %s\n", wsal_dataset_rows(ds),
                    wsal_dataset_pocket_count(ds), a.out.c_str(), manifest.c_str());
    }
    wsal_dataset_free(ds);
    return code;
}

int cmd_report(const std::string& dir, const std::string& format) {
    char* text = nullptr;
    const wsal_status s = wsal_report_render(dir.c_str(), format.c_str(), &text);
    if (s == WSAL_E_INVALID_ARGUMENT) return report_error("report", s, kConfigError);
    if (s != WSAL_OK) return report_error("report", s, kDataError);
    std::fputs(text, stdout);
    wsal_string_free(text);
    return kOk;
}

int cmd_validate_lemma(const wsal_synth_spec& spec, double chi, double delta, size_t repeats, bool equal) {
    wsal_lemma_validation v{};
    const wsal_status s = wsal_validate_lemma(&spec, chi, delta, repeats, equal ? 1 : 0, &v);
    if (s == WSAL_E_VACUOUS_BOUND) return report_error("validate-lemma", s, kVacuous);
    if (s != WSAL_OK) return report_error("validate-lemma", s, kConfigError);
    const double floor = v.target - 3.0 * v.standard_error;
    std::printf("n_s = %llu\npocket = %zu\nrepeats = %zu\nhits = %zu\nhit_rate = %.6f\ntarget = %.6f\n"
                "floor (target - 3 SE) = %.6f\n%s\n",
                static_cast<unsigned long long>(v.bound.n_s), v.pocket_size, v.repeats, v.hits, v.hit_rate, v.target,
                floor, v.hit_rate >= floor ? "PASS" : "FAIL");
    return v.hit_rate >= floor ? kOk : kRuntimeError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropy-weighted active learning: experiments, bounds and synthetic data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(wsal_version()));

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an active-learning experiment from a key=value config file");
    run->add_option("config", config_path, "Config file")->required();

    double beta = 0.1, chi = 0.05, delta = 0.05;
    int k = 10;
    auto* bound = app.add_subcommand("bound", "Draws needed to hit a beta-fraction pocket with probability 1 - delta");
    bound->add_option("--beta", beta, "Pocket fraction in (0, 1]")->required();
    bound->add_option("--chi", chi, "Smoothing floor in (0, 1)")->required();
    bound->add_option("--k", k, "Class count (>= 2)")->required();
    bound->add_option("--delta", delta, "Failure probability in (0, 1)")->required();

    SynthArgs synth_args;
    wsal_synth_spec_default(&synth_args.spec);
    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset with a pocket of unknown unknowns");
    wsal_synth_spec& sp = synth_args.spec;
    synth->add_option("--n", sp.n, "Rows")->capture_default_str();
    synth->add_option("--d", sp.d, "Feature dimension (>= k + 1)")->capture_default_str();
    synth->add_option("--k", sp.k, "Classes")->capture_default_str();
    synth->add_option("--beta", sp.beta, "Pocket fraction in [0, 1)")->capture_default_str();
    synth->add_option("--pocket-class", sp.pocket_class, "Label of the pocket points")->capture_default_str();
    synth->add_option("--separation", sp.separation, "Distance between class centers")->capture_default_str();
    synth->add_option("--seed", sp.seed, "Generator seed")->capture_default_str();
    synth->add_option("--chi-floor", sp.chi_floor, "Minimum allowed prevalence entry")->capture_default_str();
    synth->add_option("--train-prevalence", synth_args.train_prevalence, "Comma-separated class weights")
        ->delimiter(',');
    synth->add_option("--pool-prevalence", synth_args.pool_prevalence, "Comma-separated class weights")
        ->delimiter(',');
    synth->add_option("--out", synth_args.out, "Output CSV path")->required();
    synth->add_option("--manifest", synth_args.manifest, "Pocket manifest path (default: output path with extension .pocket.json)");

    std::string results_dir, format = "md";
    auto* report = app.add_subcommand("report", "Render a dataset x strategy accuracy table from run directories");
    report->add_option("results_dir", results_dir, "Run directory or directory of run directories")->required();
    report->add_option("--format", format, "md or csv")->check(CLI::IsMember({"md", "csv"}))->capture_default_str();

    wsal_synth_spec lemma_spec{};
    wsal_synth_spec_default(&lemma_spec);
    lemma_spec.n = 10000;
    lemma_spec.k = 10;
    lemma_spec.beta = 0.05;
    double lemma_chi = 0.05, lemma_delta = 0.1;
    size_t repeats = 2000;
    bool equal_weights = false;
    auto* lemma = app.add_subcommand("validate-lemma", "Monte Carlo check of the pocket-hitting guarantee");
    lemma->add_option("--n", lemma_spec.n, "Pool size")->capture_default_str();
    lemma->add_option("--k", lemma_spec.k, "Classes")->capture_default_str();
    lemma->add_option("--beta", lemma_spec.beta, "Pocket fraction")->capture_default_str();
    lemma->add_option("--chi", lemma_chi, "Smoothing floor")->capture_default_str();
    lemma->add_option("--delta", lemma_delta, "Failure probability")->capture_default_str();
    lemma->add_option("--repeats", repeats, "Independent runs")->capture_default_str();
    lemma->add_option("--seed", lemma_spec.seed, "Seed")->capture_default_str();
    lemma->add_flag("--equal-weights", equal_weights, "Give pocket items the same weight as the rest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    if (*run) return cmd_run(config_path);
    if (*bound) return cmd_bound(beta, chi, k, delta);
    if (*synth) return cmd_synth(synth_args);
    if (*report) return cmd_report(results_dir, format);
    if (*lemma) return cmd_validate_lemma(lemma_spec, lemma_chi, lemma_delta, repeats, equal_weights);
    return kConfigError;
}
