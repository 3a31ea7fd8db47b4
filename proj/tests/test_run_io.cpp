#include <gtest/gtest.h>
#include <json.hpp>

#include "test_support.hpp"
#include "wsal/error.hpp"
#include "wsal/run_io.hpp"

using namespace wsal;
using wsal::testing::TempDir;
using wsal::testing::read_text;
using wsal::testing::write_text;

namespace {

const char* kMinimal = "dataset_path = data/d.csv\nstrategy = greedy\nout_dir = out\n";

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
        return e.what();
    }
    ADD_FAILURE() << "expected a config error for:\n" << text;
    return {};
}

void write_summary(const std::filesystem::path& dir, const std::string& dataset, const std::string& strategy,
                   double mean, double std) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["dataset"] = dataset;
    j["strategy"] = strategy;
    j["trials"] = 5;
    j["final_accuracy_mean"] = mean;
    j["final_accuracy_std"] = std;
    write_text(dir / "summary.json", j.dump());
}

} // namespace

TEST(Config, MinimalUsesDefaults) {
    const RunConfig c = parse_config(kMinimal, "/base");
    EXPECT_EQ(c.dataset_path, std::filesystem::path("/base/data/d.csv"));
    EXPECT_EQ(c.out_dir, std::filesystem::path("/base/out"));
    EXPECT_EQ(c.experiment.strategy.kind, StrategyKind::Greedy);
    EXPECT_EQ(c.experiment.n0, 100u);
    EXPECT_EQ(c.experiment.rounds, 30u);
    EXPECT_EQ(c.experiment.batch, 30u);
    EXPECT_EQ(c.experiment.trials, 5u);
    EXPECT_EQ(c.experiment.strategy.epsilon, 0.05);
    EXPECT_EQ(c.label_column, "label");
    EXPECT_EQ(c.dataset_name, "d");
}

TEST(Config, CommentsBlanksAndAbsolutePaths) {
    const RunConfig c = parse_config("# a run\n\n  dataset_path=/abs/x.csv  \r\nstrategy=Eps-Greedy\nout_dir=/o\n"
                                     "epsilon = 0.2\nmaster_seed = 18446744073709551615\n",
                                     "/base");
    EXPECT_EQ(c.dataset_path, std::filesystem::path("/abs/x.csv"));
    EXPECT_EQ(c.experiment.strategy.kind, StrategyKind::EpsGreedy);
    EXPECT_EQ(c.experiment.strategy.epsilon, 0.2);
    EXPECT_EQ(c.experiment.master_seed, 18446744073709551615ull);
}

TEST(Config, ErrorsNameTheKey) {
    const std::string base = kMinimal;
    EXPECT_NE(config_error("dataset_path=a\nstrategy=bogus\nout_dir=o\n").find("'strategy'"), std::string::npos);
    EXPECT_NE(config_error(base + "colour = red\n").find("'colour'"), std::string::npos);
    EXPECT_NE(config_error(base + "strategy = random\n").find("'strategy'"), std::string::npos);
    EXPECT_NE(config_error("strategy=random\nout_dir=o\n").find("'dataset_path'"), std::string::npos);
    EXPECT_NE(config_error(base + "n0 = -3\n").find("'n0'"), std::string::npos);
    EXPECT_NE(config_error(base + "epsilon = 1.5\n").find("'epsilon'"), std::string::npos);
    EXPECT_NE(config_error(base + "chi = abc\n").find("'chi'"), std::string::npos);
    EXPECT_NE(config_error(base + "batch = 0\n").find("'batch'"), std::string::npos);
    EXPECT_NE(config_error(base + "just some words\n").find("line 4"), std::string::npos);
}

TEST(Config, FormatRoundTrips) {
    RunConfig c = parse_config(kMinimal, "/base");
    c.experiment.strategy.kind = StrategyKind::Weighted;
    c.experiment.strategy.exponent_d = 2.5;
    c.experiment.fit.l2_reg = 0.1 + 0.2;  // not exactly representable in short decimal
    c.experiment.master_seed = 123456789012345ull;
    c.init_exclude_path = "/base/pocket.json";
    const std::string text = format_config(c);
    for (auto key : config_keys()) EXPECT_NE(text.find(std::string(key) + "="), std::string::npos) << key;
    const RunConfig back = parse_config(text, "/elsewhere");
    EXPECT_EQ(format_config(back), text);
    EXPECT_EQ(back.experiment.fit.l2_reg, c.experiment.fit.l2_reg);
    EXPECT_EQ(back.experiment.strategy.kind, StrategyKind::Weighted);
}

TEST(Config, LoadMissingFile) {
    EXPECT_THROW(load_config("/nonexistent/run.cfg"), Error);
}

TEST(Records, OneObjectPerLine) {
    RoundRecord a;
    a.trial = 1;
    a.round = 0;
    a.labeled_count = 10;
    a.holdout_accuracy = 0.75;
    RoundRecord b = a;
    b.round = 1;
    b.selected_ids = {4, 2};
    b.labeled_count = 12;
    b.elapsed_ms = 999;
    const std::string text = format_records({a, b});
    EXPECT_EQ(text,
              "{\"trial\":1,\"round\":0,\"labeled_count\":10,\"holdout_accuracy\":0.75,\"selected_ids\":[]}\n"
              "{\"trial\":1,\"round\":1,\"labeled_count\":12,\"holdout_accuracy\":0.75,\"selected_ids\":[4,2]}\n");
}

TEST(WriteRun, ProducesAllArtifacts) {
    TempDir dir;
    SynthPocketSpec spec;
    spec.n = 300;
    spec.d = 3;
    const Dataset ds = generate_pocket_dataset(spec).dataset;
    RunConfig cfg = parse_config(kMinimal, dir.path());
    cfg.experiment.n0 = 10;
    cfg.experiment.rounds = 2;
    cfg.experiment.batch = 4;
    cfg.experiment.trials = 2;
    const auto result = run_experiment(ds, cfg.experiment);
    write_run(cfg, ds, result, "2026-01-01T00:00:00Z", "2026-01-01T00:00:01Z");
    for (auto f : {"records.jsonl", "summary.json", "timings.tsv", "labels.json", "run.cfg", "manifest.json"})
        EXPECT_TRUE(std::filesystem::exists(cfg.out_dir / f)) << f;
    EXPECT_EQ(read_text(cfg.out_dir / "records.jsonl"), format_records(result.records));

    const auto summary = nlohmann::json::parse(read_text(cfg.out_dir / "summary.json"));
    EXPECT_EQ(summary["strategy"], "greedy");
    EXPECT_EQ(summary["final_accuracies"].size(), 2u);
    const RunSummary s = load_summary(cfg.out_dir / "summary.json");
    EXPECT_EQ(s.mean, result.final_accuracy_mean);

    const auto manifest = nlohmann::json::parse(read_text(cfg.out_dir / "manifest.json"));
    EXPECT_EQ(manifest["version"], kVersion);
    EXPECT_EQ(manifest["dataset_rows"], 300);
    EXPECT_EQ(manifest["started_at"], "2026-01-01T00:00:00Z");
    EXPECT_FALSE(manifest["rng_algorithm"].get<std::string>().empty());
    // the stored config replays the run
    EXPECT_EQ(format_config(parse_config(manifest["config"].get<std::string>())), format_config(cfg));
}

TEST(Report, SingleRunIsOneCell) {
    TempDir dir;
    write_summary(dir.path(), "iris", "random", 0.91234, 0.0123);
    const std::string md = render_report(dir.path(), ReportFormat::Markdown);
    EXPECT_EQ(md, "| Dataset | Random |\n|---|---|\n| iris | 91.23 ± 1.23 |\n");
    EXPECT_EQ(render_report(dir.path(), ReportFormat::Csv), "Dataset,Random\niris,91.23 ± 1.23\n");
}

TEST(Report, MixedStrategiesFormOneRow) {
    TempDir dir;
    write_summary(dir / "w", "pocket", "weighted", 0.996, 0.001);
    write_summary(dir / "g", "pocket", "greedy", 0.918, 0.044);
    write_summary(dir / "r", "pocket", "random", 0.9963, 0.0011);
    write_summary(dir / "e", "pocket", "eps_greedy", 0.9968, 0.0009);
    const std::string md = render_report(dir.path(), ReportFormat::Markdown);
    EXPECT_EQ(md,
              "| Dataset | Random | Greedy | EpsGreedy | WeightedSampling |\n"
              "|---|---|---|---|---|\n"
              "| pocket | 99.63 ± 0.11 | 91.80 ± 4.40 | 99.68 ± 0.09 | 99.60 ± 0.10 |\n");
    EXPECT_EQ(render_report(dir.path(), ReportFormat::Markdown), md);
}

TEST(Report, MissingCellsAndErrors) {
    TempDir dir;
    write_summary(dir / "a", "one", "random", 0.5, 0.0);
    write_summary(dir / "b", "two", "greedy", 0.25, 0.0);
    EXPECT_EQ(render_report(dir.path(), ReportFormat::Csv),
              "Dataset,Random,Greedy\none,50.00 ± 0.00,-\ntwo,-,25.00 ± 0.00\n");

    write_summary(dir / "c", "one", "random", 0.4, 0.0);
    EXPECT_THROW(render_report(dir.path(), ReportFormat::Csv), Error);

    EXPECT_THROW(render_report(dir / "missing", ReportFormat::Markdown), Error);
    TempDir empty;
    EXPECT_THROW(render_report(empty.path(), ReportFormat::Markdown), Error);
}
