#include "wsal/run_io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "wsal/error.hpp"
#include "wsal/rng.hpp"

namespace wsal {
namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
    fail(ErrorKind::Config, "config key '" + std::string(key) + "': " + std::string(why) + " (got '" +
                                std::string(value) + "')");
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty()) bad_value(key, v, "expected a non-negative integer");
    return out;
}

double parse_real(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty() || !std::isfinite(out))
        bad_value(key, v, "expected a finite real number");
    return out;
}

std::string fmt_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_percent(double mean, double std) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f \xC2\xB1 %.2f", 100.0 * mean, 100.0 * std);
    return buf;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << content;
    if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view v) {
    std::filesystem::path p{std::string(v)};
    if (p.is_relative() && !base.empty()) p = base / p;
    return p.lexically_normal();
}

} // namespace

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = {
        "dataset_path", "label_column", "strategy",   "epsilon",       "chi",          "exponent_d",
        "n0",           "rounds",       "batch",      "trials",        "holdout_fraction", "l2_reg",
        "learning_rate", "max_iters",   "tol",        "master_seed",   "out_dir",      "dataset_name",
        "init_exclude_path"};
    return keys;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    ExperimentConfig& ex = cfg.experiment;
    std::map<std::string, std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            fail(ErrorKind::Config, "config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view v = trim(line.substr(eq + 1));
        const auto& keys = config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            fail(ErrorKind::Config, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (!seen.emplace(key, std::string(v)).second) fail(ErrorKind::Config, "config key '" + key + "' given twice");

        if (key == "dataset_path") cfg.dataset_path = resolve(base_dir, v);
        else if (key == "label_column") cfg.label_column = std::string(v);
        else if (key == "strategy") {
            const auto kind = parse_strategy(v);
            if (!kind) bad_value(key, v, "unknown strategy; expected random, greedy, eps_greedy or weighted");
            ex.strategy.kind = *kind;
        } else if (key == "epsilon") ex.strategy.epsilon = parse_real(key, v);
        else if (key == "chi") ex.strategy.chi = parse_real(key, v);
        else if (key == "exponent_d") ex.strategy.exponent_d = parse_real(key, v);
        else if (key == "n0") ex.n0 = parse_u64(key, v);
        else if (key == "rounds") ex.rounds = parse_u64(key, v);
        else if (key == "batch") ex.batch = parse_u64(key, v);
        else if (key == "trials") ex.trials = parse_u64(key, v);
        else if (key == "holdout_fraction") ex.holdout_fraction = parse_real(key, v);
        else if (key == "l2_reg") ex.fit.l2_reg = parse_real(key, v);
        else if (key == "learning_rate") ex.fit.learning_rate = parse_real(key, v);
        else if (key == "max_iters") ex.fit.max_iters = static_cast<int>(std::min<std::uint64_t>(parse_u64(key, v), INT32_MAX));
        else if (key == "tol") ex.fit.tol = parse_real(key, v);
        else if (key == "master_seed") ex.master_seed = parse_u64(key, v);
        else if (key == "out_dir") cfg.out_dir = resolve(base_dir, v);
        else if (key == "dataset_name") cfg.dataset_name = std::string(v);
        else if (key == "init_exclude_path") cfg.init_exclude_path = resolve(base_dir, v);
    }

    for (const char* req : {"dataset_path", "strategy", "out_dir"}) {
        if (!seen.contains(req)) fail(ErrorKind::Config, std::string("config key '") + req + "' is required");
    }
    auto check = [](bool ok, const char* key, const char* why) {
        if (!ok) fail(ErrorKind::Config, std::string("config key '") + key + "': " + why);
    };
    check(ex.strategy.epsilon >= 0.0 && ex.strategy.epsilon <= 1.0, "epsilon", "must lie in [0, 1]");
    check(ex.strategy.chi > 0.0 && ex.strategy.chi < 1.0, "chi", "must lie in (0, 1)");
    check(ex.strategy.exponent_d >= 0.0, "exponent_d", "must be >= 0");
    check(ex.batch >= 1, "batch", "must be >= 1");
    check(ex.trials >= 1, "trials", "must be >= 1");
    check(ex.holdout_fraction > 0.0 && ex.holdout_fraction < 1.0, "holdout_fraction", "must lie in (0, 1)");
    check(ex.fit.l2_reg >= 0.0, "l2_reg", "must be >= 0");
    check(ex.fit.learning_rate > 0.0, "learning_rate", "must be > 0");
    check(ex.fit.max_iters >= 1, "max_iters", "must be >= 1");
    check(ex.fit.tol > 0.0, "tol", "must be > 0");
    check(!cfg.label_column.empty(), "label_column", "must not be empty");
    if (cfg.dataset_name.empty()) cfg.dataset_name = cfg.dataset_path.stem().string();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Config, "cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

std::string format_config(const RunConfig& cfg) {
    const ExperimentConfig& ex = cfg.experiment;
    std::ostringstream out;
    out << "dataset_path=" << cfg.dataset_path.string() << '\n'
        << "label_column=" << cfg.label_column << '\n'
        << "strategy=" << strategy_name(ex.strategy.kind) << '\n'
        << "epsilon=" << fmt_real(ex.strategy.epsilon) << '\n'
        << "chi=" << fmt_real(ex.strategy.chi) << '\n'
        << "exponent_d=" << fmt_real(ex.strategy.exponent_d) << '\n'
        << "n0=" << ex.n0 << '\n'
        << "rounds=" << ex.rounds << '\n'
        << "batch=" << ex.batch << '\n'
        << "trials=" << ex.trials << '\n'
        << "holdout_fraction=" << fmt_real(ex.holdout_fraction) << '\n'
        << "l2_reg=" << fmt_real(ex.fit.l2_reg) << '\n'
        << "learning_rate=" << fmt_real(ex.fit.learning_rate) << '\n'
        << "max_iters=" << ex.fit.max_iters << '\n'
        << "tol=" << fmt_real(ex.fit.tol) << '\n'
        << "master_seed=" << ex.master_seed << '\n'
        << "out_dir=" << cfg.out_dir.string() << '\n'
        << "dataset_name=" << cfg.dataset_name << '\n';
    if (!cfg.init_exclude_path.empty()) out << "init_exclude_path=" << cfg.init_exclude_path.string() << '\n';
    return out.str();
}

std::string format_records(const std::vector<RoundRecord>& records) {
    std::string out;
    for (const RoundRecord& r : records) {
        nlohmann::ordered_json j;
        j["trial"] = r.trial;
        j["round"] = r.round;
        j["labeled_count"] = r.labeled_count;
        j["holdout_accuracy"] = r.holdout_accuracy;
        j["selected_ids"] = r.selected_ids;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void write_run(const RunConfig& cfg, const Dataset& ds, const ExperimentResult& result, std::string_view started_at,
               std::string_view finished_at) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());

    write_file(cfg.out_dir / "records.jsonl", format_records(result.records));

    nlohmann::ordered_json summary;
    summary["dataset"] = cfg.dataset_name;
    summary["strategy"] = strategy_name(cfg.experiment.strategy.kind);
    summary["trials"] = cfg.experiment.trials;
    summary["rounds"] = cfg.experiment.rounds;
    summary["batch"] = cfg.experiment.batch;
    summary["n0"] = cfg.experiment.n0;
    summary["final_accuracy_mean"] = result.final_accuracy_mean;
    summary["final_accuracy_std"] = result.final_accuracy_std;
    summary["std_defined"] = result.std_defined;
    summary["final_accuracies"] = result.final_accuracies;
    write_file(cfg.out_dir / "summary.json", summary.dump(2) + "\n");

    std::string timings = "trial\tround\telapsed_ms\n";
    for (const RoundRecord& r : result.records)
        timings += std::to_string(r.trial) + '\t' + std::to_string(r.round) + '\t' + std::to_string(r.elapsed_ms) + '\n';
    write_file(cfg.out_dir / "timings.tsv", timings);

    save_label_manifest(ds, cfg.out_dir / "labels.json");

    const std::string cfg_text = format_config(cfg);
    write_file(cfg.out_dir / "run.cfg", cfg_text);

    char checksum[20];
    std::snprintf(checksum, sizeof checksum, "%016llx", static_cast<unsigned long long>(dataset_checksum(ds)));
    nlohmann::ordered_json manifest;
    manifest["artifact"] = "wsal";
    manifest["version"] = kVersion;
    manifest["rng_algorithm"] = kRngAlgorithm;
    manifest["dataset_path"] = cfg.dataset_path.string();
    manifest["dataset_checksum"] = checksum;
    manifest["dataset_rows"] = ds.size();
    manifest["dataset_classes"] = ds.k;
    manifest["config"] = cfg_text;
    manifest["started_at"] = started_at;
    manifest["finished_at"] = finished_at;
    write_file(cfg.out_dir / "manifest.json", manifest.dump(2) + "\n");
}

RunSummary load_summary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
    try {
        const auto j = nlohmann::json::parse(in);
        RunSummary s;
        s.dataset = j.at("dataset").get<std::string>();
        s.strategy = j.at("strategy").get<std::string>();
        s.trials = j.at("trials").get<std::size_t>();
        s.mean = j.at("final_accuracy_mean").get<double>();
        s.std = j.at("final_accuracy_std").get<double>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Io, path.string() + ": malformed summary: " + e.what());
    }
}

std::string render_report(const std::filesystem::path& dir, ReportFormat format) {
    if (!std::filesystem::is_directory(dir)) fail(ErrorKind::Io, "results directory " + dir.string() + " not found");

    std::vector<std::filesystem::path> files;
    if (std::filesystem::exists(dir / "summary.json")) {
        files.push_back(dir / "summary.json");
    } else {
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.is_directory() && std::filesystem::exists(entry.path() / "summary.json"))
                files.push_back(entry.path() / "summary.json");
        }
        std::sort(files.begin(), files.end());
    }
    if (files.empty()) fail(ErrorKind::Io, "no summary.json found under " + dir.string());

    std::map<std::string, std::map<StrategyKind, RunSummary>> table;
    std::vector<StrategyKind> columns;
    for (const auto& f : files) {
        RunSummary s = load_summary(f);
        const auto kind = parse_strategy(s.strategy);
        if (!kind) fail(ErrorKind::Io, f.string() + ": unknown strategy '" + s.strategy + "'");
        if (std::find(columns.begin(), columns.end(), *kind) == columns.end()) columns.push_back(*kind);
        auto& row = table[s.dataset];
        if (row.contains(*kind)) {
            fail(ErrorKind::Io, "duplicate results for dataset '" + s.dataset + "', strategy '" +
                                    std::string(strategy_name(*kind)) + "'");
        }
        row.emplace(*kind, std::move(s));
    }
    std::sort(columns.begin(), columns.end());

    std::string out;
    const bool md = format == ReportFormat::Markdown;
    auto cell = [&](const std::string& text, bool first) {
        if (md) out += first ? "| " + text + " |" : " " + text + " |";
        else out += first ? text : "," + text;
    };
    cell("Dataset", true);
    for (StrategyKind c : columns) cell(std::string(strategy_label(c)), false);
    out += '\n';
    if (md) {
        out += "|---|";
        for (std::size_t i = 0; i < columns.size(); ++i) out += "---|";
        out += '\n';
    }
    for (const auto& [dataset, row] : table) {
        cell(dataset, true);
        for (StrategyKind c : columns) {
            const auto it = row.find(c);
            cell(it == row.end() ? "-" : fmt_percent(it->second.mean, it->second.std), false);
        }
        out += '\n';
    }
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace wsal
