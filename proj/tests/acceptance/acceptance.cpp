// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wsal/classifier.hpp"
#include "wsal/harness.hpp"
#include "wsal/prob.hpp"
#include "wsal/run_io.hpp"
#include "wsal/sampler.hpp"

using namespace wsal;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int shell(const std::string& cmd) {
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / ("wsal_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    return dir;
}

// The scenario used for the strategy comparison and the end-to-end runs.
SynthPocketSpec pocket_spec() {
    SynthPocketSpec s;
    s.n = 5000;
    s.d = 10;
    s.k = 2;
    s.beta = 0.1;
    s.pool_prevalence = {0.7, 0.3};
    s.pocket_class = 1;
    s.separation = 6.0;
    s.seed = 7;
    return s;
}

ExperimentConfig protocol(StrategyKind kind, const PocketDataset& pd) {
    ExperimentConfig c;  // n0 = 100, rounds = 30, batch = 30, trials = 5
    c.strategy.kind = kind;
    c.master_seed = 11;
    c.init_exclude = pd.pocket_ids;
    return c;
}

// 1. Entropy of vectors whose max/min ratio is at most rho never drops below the ratio bound.
Verdict entropy_bound() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t checked = 0;
    double worst_slack = INFINITY;
    for (int k : {2, 5, 10}) {
        for (double rho : {2.0, 10.0, 100.0}) {
            const double bound = ratio_entropy_bound(k, rho);
            for (int i = 0; i < 10000; ++i) {
                // half of the draws sit on the extreme two-level vectors where the bound is tight
                std::vector<double> w(static_cast<std::size_t>(k));
                for (double& x : w) x = i % 2 ? 1.0 + (rho - 1.0) * unit(gen) : (unit(gen) < 0.5 ? 1.0 : rho);
                w[0] = 1.0;
                w[1] = rho;
                const double total = std::accumulate(w.begin(), w.end(), 0.0);
                for (double& x : w) x /= total;
                std::shuffle(w.begin(), w.end(), gen);
                const ProbVector p(w);
                if (p.max() / p.min() > rho * (1 + 1e-12)) return {false, "generated vector exceeds ratio"};
                worst_slack = std::min(worst_slack, entropy(p) - bound);
                ++checked;
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst_slack >= -1e-12 && secs < 5.0,
            fmt("%zu vectors, min(H - bound) = %.3e, %.2fs", checked, worst_slack, secs)};
}

// 2. K = 1 inclusion frequencies equal w_i / sum w.
Verdict single_draw() {
    const auto t0 = Clock::now();
    const std::vector<double> w = {1, 2, 3, 4, 10};
    const std::vector<double> target = {0.05, 0.10, 0.15, 0.20, 0.50};
    std::vector<ScoredItem> items;
    for (std::size_t i = 0; i < w.size(); ++i) items.push_back({i, w[i]});
    constexpr int kDraws = 200000;
    std::vector<double> freq(w.size(), 0.0);
    Rng rng(derive_seed(2, 0, 0));
    for (int i = 0; i < kDraws; ++i) freq[select_top_k(items, 1, rng)[0]] += 1.0 / kDraws;
    double worst = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(freq[i] - target[i]));
    const double secs = seconds_since(t0);
    return {worst <= 0.005 && secs < 5.0, fmt("max |freq - w/W| = %.5f (tol 0.005), %.2fs", worst, secs)};
}

// 3. K = 2 unordered-pair frequencies against sequential weighted draws enumerated exactly.
Verdict pair_oracle() {
    const auto t0 = Clock::now();
    const std::vector<double> w = {1, 2, 3, 4};
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::map<std::pair<ItemId, ItemId>, double> exact, freq;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j)
            if (i != j) exact[{std::min(i, j), std::max(i, j)}] += w[i] / total * w[j] / (total - w[i]);
    std::vector<ScoredItem> items;
    for (std::size_t i = 0; i < w.size(); ++i) items.push_back({i, w[i]});
    constexpr int kDraws = 200000;
    Rng rng(derive_seed(3, 0, 0));
    for (int i = 0; i < kDraws; ++i) {
        const auto s = select_top_k(items, 2, rng);
        freq[{std::min(s[0], s[1]), std::max(s[0], s[1])}] += 1.0 / kDraws;
    }
    double worst = 0.0;
    for (const auto& [pair, p] : exact) worst = std::max(worst, std::abs(freq[pair] - p));
    const double secs = seconds_since(t0);
    return {worst <= 0.01 && secs < 10.0, fmt("max pair deviation = %.5f (tol 0.01), %.2fs", worst, secs)};
}

// 4. Worst-case pocket hitting rate, plus the CLI bound example.
Verdict lemma(const std::string& cli) {
    const auto t0 = Clock::now();
    SynthPocketSpec s;
    s.n = 10000;
    s.k = 10;
    s.beta = 0.05;
    s.seed = 4;
    const LemmaValidation v = validate_lemma(s, 0.05, 0.1, 2000, LemmaWeighting::WorstCase);
    const double floor = 0.9 - 3.0 * std::sqrt(0.09 / 2000.0);

    const fs::path dir = scratch_dir();
    const int code = shell("'" + cli + "' bound --beta 0.1 --chi 0.05 --k 10 --delta 0.05 >'" +
                           (dir / "bound.txt").string() + "' 2>&1");
    const std::string out = slurp(dir / "bound.txt");
    fs::remove_all(dir);
    const bool cli_ok = code == 0 && out.find("n_s = 80\n") != std::string::npos;
    const double secs = seconds_since(t0);
    return {v.hit_rate >= floor && cli_ok && secs < 30.0,
            fmt("n_s = %llu, hit rate %.4f >= %.4f; cli bound n_s = 80: %s, %.2fs",
                static_cast<unsigned long long>(v.bound.n_s), v.hit_rate, floor, cli_ok ? "yes" : "no", secs)};
}

// 5. Analytic gradient against central differences.
Verdict gradient() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> label(0, 2);
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Matrix x(20, 5);
        for (double& v : x.data()) v = normal(gen);
        std::vector<int> y(20);
        for (int& c : y) c = label(gen);
        ModelParams params = ModelParams::zeros(3, 5);
        for (double& wv : params.weights.data()) wv = 0.5 * normal(gen);
        const double lambda = 0.01;
        const auto lg = loss_and_gradient(params, x, y, lambda);
        double num = 0.0, den_a = 0.0, den_f = 0.0;
        for (std::size_t i = 0; i < params.weights.data().size(); ++i) {
            ModelParams plus = params, minus = params;
            plus.weights.data()[i] += h;
            minus.weights.data()[i] -= h;
            const double fd =
                (loss_and_gradient(plus, x, y, lambda).loss - loss_and_gradient(minus, x, y, lambda).loss) / (2 * h);
            const double an = lg.gradient.data()[i];
            num += (fd - an) * (fd - an);
            den_a += an * an;
            den_f += fd * fd;
        }
        worst = std::max(worst, std::sqrt(num) / std::max(std::sqrt(den_a), std::sqrt(den_f)));
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-5 && secs < 5.0, fmt("20 problems, max relative error %.3e (tol 1e-5), %.2fs", worst, secs)};
}

// 6. Two CLI runs with the same config write byte-identical records.
Verdict determinism(const std::string& cli) {
    const auto t0 = Clock::now();
    const fs::path dir = scratch_dir();
    const PocketDataset pd = generate_pocket_dataset(pocket_spec());
    save_csv(pd.dataset, dir / "pocket.csv");
    save_pocket_manifest(pd, pocket_spec(), dir / "pocket.pocket.json");
    const std::string common = "dataset_path = pocket.csv\nstrategy = weighted\nmaster_seed = 11\n"
                               "init_exclude_path = pocket.pocket.json\n";
    std::ofstream(dir / "a.cfg") << common << "out_dir = a\n";
    std::ofstream(dir / "b.cfg") << common << "out_dir = b\n";
    const int ca = shell("'" + cli + "' run '" + (dir / "a.cfg").string() + "' >/dev/null");
    const int cb = shell("'" + cli + "' run '" + (dir / "b.cfg").string() + "' >/dev/null");
    const std::string ra = slurp(dir / "a" / "records.jsonl");
    const std::string rb = slurp(dir / "b" / "records.jsonl");
    const bool same = ca == 0 && cb == 0 && !ra.empty() && ra == rb &&
                      slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json");
    const auto lines = std::count(ra.begin(), ra.end(), '\n');
    fs::remove_all(dir);
    const double secs = seconds_since(t0);
    return {same && lines == 5 * 31 && secs < 60.0,
            fmt("exit codes %d/%d, %ld records each, identical: %s, %.2fs", ca, cb, static_cast<long>(lines),
                same ? "yes" : "no", secs)};
}

// 7. Per-round split and selection invariants over the full protocol.
Verdict invariants() {
    const auto t0 = Clock::now();
    SynthPocketSpec spec = pocket_spec();
    spec.seed = 77;
    const PocketDataset pd = generate_pocket_dataset(spec);
    std::size_t rounds_checked = 0;
    std::string problem;
    for (StrategyKind kind :
         {StrategyKind::Random, StrategyKind::Greedy, StrategyKind::EpsGreedy, StrategyKind::Weighted}) {
        const ExperimentConfig cfg = protocol(kind, pd);
        std::vector<ItemId> holdout;
        std::set<ItemId> queried;
        auto check = [&](bool ok, const std::string& what) {
            if (!ok && problem.empty()) problem = std::string(strategy_name(kind)) + ": " + what;
        };
        run_trial(pd.dataset, cfg, 0, [&](const RoundRecord& r, const SplitState& s) {
            try {
                s.check_invariants();
            } catch (const std::exception& e) {
                check(false, e.what());
            }
            const auto pool = s.pool_ids();
            const auto hold = s.holdout_ids();
            check(pool.size() + hold.size() + s.labeled_count() == pd.dataset.size(), "roles do not cover the data");
            check(s.labeled_count() == cfg.n0 + r.round * cfg.batch, "labeled_count arithmetic");
            check(r.labeled_count == s.labeled_count(), "record labeled_count");
            check(r.selected_ids.size() == (r.round == 0 ? 0 : cfg.batch), "batch size");
            if (holdout.empty()) holdout = hold;
            check(hold == holdout, "holdout changed");
            for (ItemId id : r.selected_ids) {
                check(queried.insert(id).second, "id selected twice");
                check(!std::binary_search(holdout.begin(), holdout.end(), id), "holdout id selected");
            }
            ++rounds_checked;
        });
    }
    const double secs = seconds_since(t0);
    return {problem.empty() && rounds_checked == 4 * 31 && secs < 60.0,
            fmt("%zu rounds over 4 strategies, %s, %.2fs", rounds_checked,
                problem.empty() ? "no violations" : problem.c_str(), secs)};
}

// 8. Greedy misses the pocket; weighted sampling matches the better of random and greedy.
Verdict strategy_signature() {
    const auto t0 = Clock::now();
    const PocketDataset pd = generate_pocket_dataset(pocket_spec());
    std::map<StrategyKind, ExperimentResult> res;
    for (StrategyKind kind :
         {StrategyKind::Random, StrategyKind::Greedy, StrategyKind::EpsGreedy, StrategyKind::Weighted})
        res[kind] = run_experiment(pd.dataset, protocol(kind, pd));
    auto pct = [&](StrategyKind k) { return 100.0 * res[k].final_accuracy_mean; };
    const double random = pct(StrategyKind::Random), greedy = pct(StrategyKind::Greedy);
    const double eps = pct(StrategyKind::EpsGreedy), weighted = pct(StrategyKind::Weighted);
    const bool gap = greedy <= random - 3.0;
    const bool best_of_both = weighted >= std::max(random, greedy) - 2.0;
    const double secs = seconds_since(t0);
    return {gap && best_of_both && secs < 300.0,
            fmt("Random %.2f, Greedy %.2f, EpsGreedy %.2f, Weighted %.2f; greedy gap %.2f (>= 3), weighted "
                "shortfall %.2f (<= 2), %.1fs",
                random, greedy, eps, weighted, random - greedy, std::max(random, greedy) - weighted, secs)};
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : WSAL_CLI_PATH;
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"entropy ratio bound", entropy_bound},
        {"single-draw inclusion", single_draw},
        {"pair inclusion oracle", pair_oracle},
        {"pocket hitting guarantee", [&] { return lemma(cli); }},
        {"gradient check", gradient},
        {"run determinism", [&] { return determinism(cli); }},
        {"split/selection invariants", invariants},
        {"strategy signature", strategy_signature},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failures;
        std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
