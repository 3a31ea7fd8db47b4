#include "wsal/wsal.h"

#include <cstring>
#include <optional>
#include <string>

#include "wsal/error.hpp"
#include "wsal/harness.hpp"
#include "wsal/run_io.hpp"

struct wsal_dataset {
    wsal::Dataset ds;
    std::vector<wsal::ItemId> pocket;
    std::optional<wsal::SynthPocketSpec> spec;
};

struct wsal_config {
    wsal::RunConfig cfg;
};

struct wsal_result {
    wsal::RunConfig cfg;
    wsal::Dataset ds;
    wsal::ExperimentResult result;
    std::string started_at;
    std::string finished_at;
};

namespace {

thread_local std::string g_last_error;

wsal_status to_status(wsal::ErrorKind kind) {
    using wsal::ErrorKind;
    switch (kind) {
    case ErrorKind::InvalidArgument: return WSAL_E_INVALID_ARGUMENT;
    case ErrorKind::VacuousBound: return WSAL_E_VACUOUS_BOUND;
    case ErrorKind::InsufficientItems: return WSAL_E_INSUFFICIENT_ITEMS;
    case ErrorKind::InsufficientClassInstances: return WSAL_E_INSUFFICIENT_CLASS_INSTANCES;
    case ErrorKind::NonFiniteLoss: return WSAL_E_NON_FINITE_LOSS;
    case ErrorKind::DimensionMismatch: return WSAL_E_DIMENSION_MISMATCH;
    case ErrorKind::MissingColumn: return WSAL_E_MISSING_COLUMN;
    case ErrorKind::NonNumericCell: return WSAL_E_NON_NUMERIC_CELL;
    case ErrorKind::EmptyFile: return WSAL_E_EMPTY_FILE;
    case ErrorKind::MalformedRow: return WSAL_E_MALFORMED_ROW;
    case ErrorKind::Io: return WSAL_E_IO;
    case ErrorKind::Config: return WSAL_E_CONFIG;
    case ErrorKind::Runtime: return WSAL_E_RUNTIME;
    }
    return WSAL_E_RUNTIME;
}

wsal_status set_error(wsal_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
wsal_status guarded(Fn&& fn) {
    try {
        fn();
        return WSAL_OK;
    } catch (const wsal::Error& e) {
        return set_error(to_status(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(WSAL_E_RUNTIME, "out of memory");
    } catch (const std::exception& e) {
        return set_error(WSAL_E_RUNTIME, e.what());
    }
}

wsal_status null_arg(const char* name) {
    return set_error(WSAL_E_INVALID_ARGUMENT, std::string("argument '") + name + "' is NULL");
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

wsal::SynthPocketSpec to_spec(const wsal_synth_spec& c) {
    wsal::SynthPocketSpec s;
    s.n = c.n;
    s.d = c.d;
    s.k = c.k;
    s.beta = c.beta;
    const auto k = c.k > 0 ? static_cast<std::size_t>(c.k) : 0;
    if (c.train_prevalence) s.train_prevalence.assign(c.train_prevalence, c.train_prevalence + k);
    if (c.pool_prevalence) s.pool_prevalence.assign(c.pool_prevalence, c.pool_prevalence + k);
    s.pocket_class = c.pocket_class;
    s.separation = c.separation;
    s.seed = c.seed;
    s.chi_floor = c.chi_floor;
    return s;
}

wsal_lemma_report to_c(const wsal::LemmaBoundReport& r) { return {r.eta, r.zeta, r.p_s, r.n_s}; }

} // namespace

extern "C" {

const char* wsal_version(void) { return wsal::kVersion; }
const char* wsal_rng_algorithm(void) { return wsal::kRngAlgorithm; }
const char* wsal_last_error(void) { return g_last_error.c_str(); }

const char* wsal_status_name(wsal_status status) {
    switch (status) {
    case WSAL_OK: return "ok";
    case WSAL_E_INVALID_ARGUMENT: return "invalid argument";
    case WSAL_E_CONFIG: return "config error";
    case WSAL_E_IO: return "i/o error";
    case WSAL_E_MISSING_COLUMN: return "missing column";
    case WSAL_E_NON_NUMERIC_CELL: return "non-numeric cell";
    case WSAL_E_EMPTY_FILE: return "empty file";
    case WSAL_E_MALFORMED_ROW: return "malformed row";
    case WSAL_E_VACUOUS_BOUND: return "vacuous bound";
    case WSAL_E_INSUFFICIENT_ITEMS: return "insufficient items";
    case WSAL_E_INSUFFICIENT_CLASS_INSTANCES: return "insufficient class instances";
    case WSAL_E_NON_FINITE_LOSS: return "non-finite loss";
    case WSAL_E_DIMENSION_MISMATCH: return "dimension mismatch";
    case WSAL_E_RUNTIME: return "runtime error";
    }
    return "unknown";
}

void wsal_string_free(char* s) { delete[] s; }

wsal_status wsal_entropy(const double* p, size_t k, double* out) {
    if (!p) return null_arg("p");
    if (!out) return null_arg("out");
    return guarded([&] { *out = wsal::entropy(wsal::ProbVector({p, p + k})); });
}

wsal_status wsal_smooth(const double* r, size_t k, double chi, double* out) {
    if (!r) return null_arg("r");
    if (!out) return null_arg("out");
    return guarded([&] {
        const wsal::ProbVector v = wsal::smooth(wsal::ProbVector({r, r + k}), {chi});
        std::copy(v.values().begin(), v.values().end(), out);
    });
}

wsal_status wsal_entropy_lower_bound(double chi, int k, double* out) {
    if (!out) return null_arg("out");
    return guarded([&] { *out = wsal::entropy_lower_bound(chi, k); });
}

wsal_status wsal_lemma_bound(double beta, double chi, int k, double delta, wsal_lemma_report* out) {
    if (!out) return null_arg("out");
    return guarded([&] {
        const wsal::LemmaBoundInput in{beta, chi, k, delta};
        *out = to_c(wsal::lemma_quantities(in));
        wsal::lemma_bound(in);
    });
}

wsal_status wsal_select_top_k(const uint64_t* ids, const double* weights, size_t n, size_t k, uint64_t seed,
                              uint64_t* out_ids) {
    if (!ids && n > 0) return null_arg("ids");
    if (!weights && n > 0) return null_arg("weights");
    if (!out_ids) return null_arg("out_ids");
    return guarded([&] {
        std::vector<wsal::ScoredItem> items(n);
        for (size_t i = 0; i < n; ++i) items[i] = {ids[i], weights[i]};
        wsal::Rng rng(seed);
        const auto picked = wsal::select_top_k(items, k, rng);
        std::copy(picked.begin(), picked.end(), out_ids);
    });
}

wsal_status wsal_uniform_sample(const uint64_t* ids, size_t n, size_t k, uint64_t seed, uint64_t* out_ids) {
    if (!ids && n > 0) return null_arg("ids");
    if (!out_ids) return null_arg("out_ids");
    return guarded([&] {
        wsal::Rng rng(seed);
        const auto picked = wsal::uniform_sample(std::span<const uint64_t>(ids, n), k, rng);
        std::copy(picked.begin(), picked.end(), out_ids);
    });
}

wsal_status wsal_dataset_load_csv(const char* path, const char* label_column, wsal_dataset** out) {
    if (!path) return null_arg("path");
    if (!label_column) return null_arg("label_column");
    if (!out) return null_arg("out");
    return guarded([&] { *out = new wsal_dataset{wsal::load_csv(path, label_column), {}, std::nullopt}; });
}

wsal_status wsal_dataset_save_csv(const wsal_dataset* ds, const char* path) {
    if (!ds) return null_arg("ds");
    if (!path) return null_arg("path");
    return guarded([&] { wsal::save_csv(ds->ds, path); });
}

wsal_status wsal_dataset_save_label_manifest(const wsal_dataset* ds, const char* path) {
    if (!ds) return null_arg("ds");
    if (!path) return null_arg("path");
    return guarded([&] { wsal::save_label_manifest(ds->ds, path); });
}

size_t wsal_dataset_rows(const wsal_dataset* ds) { return ds ? ds->ds.size() : 0; }
size_t wsal_dataset_dim(const wsal_dataset* ds) { return ds ? ds->ds.dim() : 0; }
int wsal_dataset_classes(const wsal_dataset* ds) { return ds ? ds->ds.k : 0; }
uint64_t wsal_dataset_checksum(const wsal_dataset* ds) { return ds ? wsal::dataset_checksum(ds->ds) : 0; }
void wsal_dataset_free(wsal_dataset* ds) { delete ds; }

void wsal_synth_spec_default(wsal_synth_spec* spec) {
    if (!spec) return;
    const wsal::SynthPocketSpec d;
    *spec = wsal_synth_spec{d.n, d.d, d.k, d.beta, nullptr, nullptr, d.pocket_class, d.separation, d.seed, d.chi_floor};
}

wsal_status wsal_synth_generate(const wsal_synth_spec* spec, wsal_dataset** out) {
    if (!spec) return null_arg("spec");
    if (!out) return null_arg("out");
    return guarded([&] {
        const wsal::SynthPocketSpec s = to_spec(*spec);
        wsal::PocketDataset pd = wsal::generate_pocket_dataset(s);
        *out = new wsal_dataset{std::move(pd.dataset), std::move(pd.pocket_ids), s};
    });
}

size_t wsal_dataset_pocket_count(const wsal_dataset* ds) { return ds ? ds->pocket.size() : 0; }

size_t wsal_dataset_pocket_ids(const wsal_dataset* ds, uint64_t* out, size_t capacity) {
    if (!ds || !out) return 0;
    const size_t n = std::min(capacity, ds->pocket.size());
    std::copy_n(ds->pocket.begin(), n, out);
    return n;
}

wsal_status wsal_dataset_save_pocket_manifest(const wsal_dataset* ds, const char* path) {
    if (!ds) return null_arg("ds");
    if (!path) return null_arg("path");
    if (!ds->spec) return set_error(WSAL_E_INVALID_ARGUMENT, "dataset was not generated; it has no pocket manifest");
    return guarded([&] { wsal::save_pocket_manifest({ds->ds, ds->pocket}, *ds->spec, path); });
}

wsal_status wsal_validate_lemma(const wsal_synth_spec* spec, double chi, double delta, size_t repeats,
                                int equal_weights, wsal_lemma_validation* out) {
    if (!spec) return null_arg("spec");
    if (!out) return null_arg("out");
    return guarded([&] {
        const auto v = wsal::validate_lemma(to_spec(*spec), chi, delta, repeats,
                                            equal_weights ? wsal::LemmaWeighting::Equal : wsal::LemmaWeighting::WorstCase);
        *out = wsal_lemma_validation{to_c(v.bound), v.pocket_size, v.repeats,         v.hits,
                                     v.hit_rate,    v.target,      v.standard_error};
    });
}

wsal_status wsal_config_load(const char* path, wsal_config** out) {
    if (!path) return null_arg("path");
    if (!out) return null_arg("out");
    return guarded([&] { *out = new wsal_config{wsal::load_config(path)}; });
}

wsal_status wsal_config_parse(const char* text, const char* base_dir, wsal_config** out) {
    if (!text) return null_arg("text");
    if (!out) return null_arg("out");
    return guarded([&] {
        *out = new wsal_config{wsal::parse_config(text, base_dir ? std::filesystem::path(base_dir) : std::filesystem::path{})};
    });
}

wsal_status wsal_config_format(const wsal_config* cfg, char** out) {
    if (!cfg) return null_arg("cfg");
    if (!out) return null_arg("out");
    return guarded([&] { *out = dup_string(wsal::format_config(cfg->cfg)); });
}

void wsal_config_free(wsal_config* cfg) { delete cfg; }

wsal_status wsal_config_load_dataset(const wsal_config* cfg, wsal_dataset** out) {
    if (!cfg) return null_arg("cfg");
    if (!out) return null_arg("out");
    return guarded([&] {
        *out = new wsal_dataset{wsal::load_csv(cfg->cfg.dataset_path, cfg->cfg.label_column), {}, std::nullopt};
    });
}

wsal_status wsal_experiment_run(const wsal_config* cfg, const wsal_dataset* ds, wsal_result** out) {
    if (!cfg) return null_arg("cfg");
    if (!ds) return null_arg("ds");
    if (!out) return null_arg("out");
    return guarded([&] {
        auto res = std::make_unique<wsal_result>();
        res->cfg = cfg->cfg;
        res->ds = ds->ds;
        if (!res->cfg.init_exclude_path.empty())
            res->cfg.experiment.init_exclude = wsal::load_pocket_ids(res->cfg.init_exclude_path);
        res->started_at = wsal::utc_timestamp();
        res->result = wsal::run_experiment(res->ds, res->cfg.experiment);
        res->finished_at = wsal::utc_timestamp();
        *out = res.release();
    });
}

wsal_status wsal_result_write(const wsal_result* res) {
    if (!res) return null_arg("res");
    return guarded([&] { wsal::write_run(res->cfg, res->ds, res->result, res->started_at, res->finished_at); });
}

size_t wsal_result_record_count(const wsal_result* res) { return res ? res->result.records.size() : 0; }

wsal_status wsal_result_record(const wsal_result* res, size_t index, wsal_round_record* out) {
    if (!res) return null_arg("res");
    if (!out) return null_arg("out");
    if (index >= res->result.records.size())
        return set_error(WSAL_E_INVALID_ARGUMENT, "record index " + std::to_string(index) + " out of range");
    const wsal::RoundRecord& r = res->result.records[index];
    *out = wsal_round_record{r.trial,      r.round, r.labeled_count, r.holdout_accuracy, r.elapsed_ms,
                             r.selected_ids.data(), r.selected_ids.size()};
    return WSAL_OK;
}

double wsal_result_final_mean(const wsal_result* res) { return res ? res->result.final_accuracy_mean : 0.0; }
double wsal_result_final_std(const wsal_result* res) { return res ? res->result.final_accuracy_std : 0.0; }
int wsal_result_std_defined(const wsal_result* res) { return res && res->result.std_defined ? 1 : 0; }
void wsal_result_free(wsal_result* res) { delete res; }

wsal_status wsal_report_render(const char* results_dir, const char* format, char** out) {
    if (!results_dir) return null_arg("results_dir");
    if (!format) return null_arg("format");
    if (!out) return null_arg("out");
    const std::string f = format;
    if (f != "md" && f != "csv") return set_error(WSAL_E_INVALID_ARGUMENT, "report format must be 'md' or 'csv'");
    return guarded([&] {
        *out = dup_string(wsal::render_report(results_dir, f == "md" ? wsal::ReportFormat::Markdown
                                                                     : wsal::ReportFormat::Csv));
    });
}

} // extern "C"
