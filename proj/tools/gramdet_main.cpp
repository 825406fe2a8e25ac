// gramdet: reliability scoring of reported datasets against indirect
// observations, plus the simulation and validation harness around it.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gramdet/compare.hpp"
#include "gramdet/dataset.hpp"
#include "gramdet/errors.hpp"
#include "gramdet/ingest.hpp"
#include "gramdet/kernels.hpp"
#include "gramdet/rng.hpp"
#include "gramdet/scoring.hpp"
#include "gramdet/simulate.hpp"
#include "gramdet/version.hpp"

using json = nlohmann::ordered_json;
using namespace gramdet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitDomainError = 3;

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    uint64_t h = 1469598103934665603ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct ManifestBuilder {
    std::string command;
    uint64_t seed = 0;
    std::map<std::string, std::string> flags;  // sorted keys for diffable output
    std::vector<std::string> inputs;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void flag(const std::string& key, const std::string& value) { flags[key] = value; }
    void flag(const std::string& key, double v) {
        std::ostringstream ss;
        ss << v;
        flags[key] = ss.str();
    }
    void flag(const std::string& key, int64_t v) { flags[key] = std::to_string(v); }

    json build() const {
        json m;
        m["command"] = command;
        m["version"] = kVersion;
        m["seed"] = seed;
        json f = json::object();
        for (const auto& [k, v] : flags) f[k] = v;
        m["flags"] = f;
        json ins = json::array();
        for (const auto& p : inputs)
            ins.push_back(json{{"path", p}, {"fnv1a64", hex64(fnv1a64_file(p))}});
        m["inputs"] = ins;
        const auto wall =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - started)
                .count();
        m["timing"] = json{{"wall_ms", wall}};
        return m;
    }
};

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

KernelSpec parse_kernel(const std::string& text) {
    if (text == "delta") return KernelSpec::delta();
    if (text == "linear") return KernelSpec::linear();
    if (text == "pseudo-posterior") return KernelSpec::pseudo_posterior();
    if (text == "rbf") return KernelSpec::rbf();
    if (text.rfind("rbf:", 0) == 0) {
        const double sigma = std::stod(text.substr(4));
        if (sigma <= 0.0) throw ConfigError("rbf sigma must be positive");
        return KernelSpec::rbf(sigma);
    }
    throw ConfigError("unknown kernel '" + text + "' (delta | linear | rbf[:SIGMA] | pseudo-posterior)");
}

std::string kernel_text(const KernelSpec& k) {
    switch (k.kind) {
        case KernelSpec::Kind::Delta: return "delta";
        case KernelSpec::Kind::Linear: return "linear";
        case KernelSpec::Kind::PseudoPosterior: return "pseudo-posterior";
        case KernelSpec::Kind::Rbf:
            return k.sigma > 0.0 ? "rbf:" + std::to_string(k.sigma) : "rbf";
    }
    return "?";
}

json kernel_json(const KernelSpec& k) {
    json j;
    switch (k.kind) {
        case KernelSpec::Kind::Delta: j["kind"] = "delta"; break;
        case KernelSpec::Kind::Linear: j["kind"] = "linear"; break;
        case KernelSpec::Kind::PseudoPosterior: j["kind"] = "pseudo-posterior"; break;
        case KernelSpec::Kind::Rbf: j["kind"] = "rbf"; break;
    }
    if (k.kind == KernelSpec::Kind::Rbf && k.sigma > 0.0) j["sigma"] = k.sigma;
    return j;
}

PolicySpec::Kind parse_policy(const std::string& text) {
    if (text == "uniform") return PolicySpec::Kind::Uniform;
    if (text == "asym-neighbor") return PolicySpec::Kind::AsymNeighbor;
    if (text == "row-sim-2nd") return PolicySpec::Kind::RowSim2nd;
    if (text == "merge-01") return PolicySpec::Kind::Merge01;
    if (text == "group-updown") return PolicySpec::Kind::GroupUpDown;
    if (text == "mixed") return PolicySpec::Kind::Mixed;
    throw ConfigError("unknown policy '" + text + "'");
}

BaselineKind parse_baseline(const std::string& text) {
    if (text == "topk-volume") return BaselineKind::TopkVolume;
    if (text == "max-correlation") return BaselineKind::MaxCorrelation;
    if (text == "kyfan") return BaselineKind::KyFan;
    if (text == "chi2-mi") return BaselineKind::Chi2Mi;
    if (text == "kl-mi") return BaselineKind::KlMi;
    throw ConfigError("unknown score kind '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> out;
    for (const auto& tok : split_list(text)) out.push_back(std::stod(tok));
    if (out.empty()) throw ConfigError("empty p-level list");
    return out;
}

/// Shared flags of the score/rank commands.
struct ScoreFlags {
    std::string kernel_text = "delta";
    std::string estimator = "plugin";
    std::string obs_path;
    std::string obs_kind = "auto";
    uint64_t seed = 0;
    int reps = 1;
    std::string out;
};

void add_score_flags(CLI::App* cmd, ScoreFlags* f) {
    cmd->add_option("--kernel", f->kernel_text, "delta | linear | rbf[:SIGMA] | pseudo-posterior");
    cmd->add_option("--estimator", f->estimator, "plugin | stratified")
        ->check(CLI::IsMember({"plugin", "stratified"}));
    cmd->add_option("--obs", f->obs_path, "External observations file (all columns are observations)");
    cmd->add_option("--obs-kind", f->obs_kind, "auto | categorical | embedding")
        ->check(CLI::IsMember({"auto", "categorical", "embedding"}));
    cmd->add_option("--seed", f->seed, "Master seed")->envname("GRAMDET_SEED");
    cmd->add_option("--reps", f->reps, "Stratified repetitions to average")->check(CLI::PositiveNumber);
    cmd->add_option("--out", f->out, "Results file path");
}

LoadSchema schema_for(const ScoreFlags& f) {
    LoadSchema schema;
    if (f.obs_kind == "categorical")
        schema.obs_kind = LoadSchema::ObsKind::Categorical;
    else if (f.obs_kind == "embedding")
        schema.obs_kind = LoadSchema::ObsKind::Embedding;
    return schema;
}

struct LoadedInput {
    Dataset dataset;
    ObservationSet obs;  // embedded or external
};

LoadedInput load_input(const std::string& path, const ScoreFlags& f, const KernelSpec& kernel) {
    LoadedInput li;
    LoadSchema schema = schema_for(f);
    // The delta kernel reads a lone numeric observation column categorically;
    // auto-sniffing would make it a width-1 embedding.
    const bool delta_auto =
        kernel.kind == KernelSpec::Kind::Delta && schema.obs_kind == LoadSchema::ObsKind::Auto;
    if (!f.obs_path.empty()) {
        schema.allow_missing_observations = true;
        li.dataset = load_dataset(path, schema);
        li.obs = load_observations(f.obs_path, schema.obs_kind);
        if (delta_auto && !li.obs.is_categorical() && li.obs.width() == 1)
            li.obs = load_observations(f.obs_path, LoadSchema::ObsKind::Categorical);
    } else {
        li.dataset = load_dataset(path, schema);
        if (delta_auto && !li.dataset.obs.is_categorical() && li.dataset.obs.width() == 1) {
            schema.obs_kind = LoadSchema::ObsKind::Categorical;
            li.dataset = load_dataset(path, schema);
        }
        li.obs = li.dataset.obs;
    }
    if (li.obs.size() != li.dataset.report.n())
        throw DimensionError(path + ": observation count (" + std::to_string(li.obs.size()) +
                             ") does not match record count (" +
                             std::to_string(li.dataset.report.n()) + ")");
    return li;
}

struct ScoredInput {
    ScoreReport report;
    double rep_se = 0.0;  // empirical standard error across stratified reps
};

ScoredInput score_input(const LoadedInput& li, const ScoreFlags& f, const KernelSpec& kernel) {
    ScoredInput out;
    if (f.estimator == "plugin") {
        out.report = plugin_score(li.dataset.report, li.obs, kernel);
        return out;
    }
    std::vector<double> values(f.reps);
    ScoreReport last;
    for (int r = 0; r < f.reps; ++r) {
        last = stratified_score(li.dataset.report, li.obs, kernel, derive_seed(f.seed, r));
        values[r] = last.value;
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= values.size();
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    out.report = last;
    out.report.seed = f.seed;
    out.report.value = mean;
    out.rep_se = values.size() > 1
                     ? std::sqrt(ss / (values.size() - 1)) / std::sqrt(double(values.size()))
                     : 0.0;
    return out;
}

json score_json(const ScoredInput& si, const ScoreFlags& f, const std::vector<std::string>& labels) {
    json j;
    j["value"] = si.report.value;
    j["estimator"] = estimator_name(si.report.estimator);
    j["kernel"] = kernel_json(si.report.kernel);
    if (si.report.seed) j["seed"] = *si.report.seed;
    j["n"] = si.report.n;
    if (f.estimator == "stratified") {
        j["reps"] = f.reps;
        j["rep_standard_error"] = si.rep_se;
    }
    j["diagnostics"] = json{
        {"min_report_label_occurrence", si.report.diagnostics.min_report_label_occurrence},
        {"degenerate", si.report.diagnostics.degenerate}};
    j["labels"] = labels;
    return j;
}

// ---------------------------------------------------------------------------

int cmd_score(const std::string& input, ScoreFlags& f, ManifestBuilder& manifest) {
    const KernelSpec kernel = parse_kernel(f.kernel_text);
    const LoadedInput li = load_input(input, f, kernel);
    const ScoredInput si = score_input(li, f, kernel);

    manifest.command = "score";
    manifest.seed = f.seed;
    manifest.inputs.push_back(input);
    if (!f.obs_path.empty()) manifest.inputs.push_back(f.obs_path);
    manifest.flag("kernel", kernel_text(si.report.kernel));
    manifest.flag("estimator", f.estimator);
    manifest.flag("reps", static_cast<int64_t>(f.reps));
    manifest.flag("obs-kind", f.obs_kind);

    json out;
    out["manifest"] = manifest.build();
    out["score"] = score_json(si, f, li.dataset.label_names);
    const std::string path = f.out.empty() ? input + ".score.json" : f.out;
    write_json(path, out);

    std::cout << f.estimator << " gram determinant score: " << si.report.value
              << "  (n=" << si.report.n << ", kernel=" << kernel_text(si.report.kernel) << ")\n";
    if (si.report.diagnostics.degenerate)
        std::cout << "degenerate: a reported label occurs fewer than the estimator needs"
                  << " (min occurrence " << si.report.diagnostics.min_report_label_occurrence
                  << ")\n";
    std::cout << "report written to " << path << "\n";
    return kExitOk;
}

int cmd_rank(const std::vector<std::string>& inputs, ScoreFlags& f, ManifestBuilder& manifest) {
    if (inputs.size() < 2) throw ConfigError("rank needs at least two datasets");
    const KernelSpec kernel = parse_kernel(f.kernel_text);

    struct Row {
        std::string input;
        ScoredInput scored;
    };
    std::vector<Row> rows;
    for (const auto& path : inputs) {
        const LoadedInput li = load_input(path, f, kernel);
        rows.push_back({path, score_input(li, f, kernel)});
    }
    std::vector<size_t> order(rows.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return rows[a].scored.report.value > rows[b].scored.report.value;
    });

    manifest.command = "rank";
    manifest.seed = f.seed;
    for (const auto& path : inputs) manifest.inputs.push_back(path);
    if (!f.obs_path.empty()) manifest.inputs.push_back(f.obs_path);
    manifest.flag("kernel", f.kernel_text);
    manifest.flag("estimator", f.estimator);
    manifest.flag("reps", static_cast<int64_t>(f.reps));

    json ranking = json::array();
    std::cout << "rank  score            input\n";
    for (size_t r = 0; r < order.size(); ++r) {
        const Row& row = rows[order[r]];
        std::cout << std::to_string(r + 1) << "     " << row.scored.report.value << "  "
                  << row.input << "\n";
        json item;
        item["rank"] = r + 1;
        item["input"] = row.input;
        item["value"] = row.scored.report.value;
        item["degenerate"] = row.scored.report.diagnostics.degenerate;
        ranking.push_back(item);
    }

    json out;
    out["manifest"] = manifest.build();
    out["ranking"] = ranking;
    const std::string path = f.out.empty() ? "rank.json" : f.out;
    write_json(path, out);
    std::cout << "results written to " << path << "\n";
    return kExitOk;
}

struct SimulateFlags {
    int d = 5;
    int n = 2000;
    std::string obs_model = "categorical";
    int k = 8;
    int width = 8;
    double sigma = 1.0;
    double spacing = 0.0;
    std::string p_levels = "0,0.1,0.2,0.3,0.4,0.5";
    std::string policy = "uniform";
    int trials = 20;
    std::string estimator = "plugin";
    std::string kernel_text = "delta";
    uint64_t seed = 0;
    int workers = 1;
    std::string compare;  // comma list of baseline kinds; empty = plain trials
    int topk = 0;
    std::string out = "simulate.json";
    MixedPolicyParams mixed;
};

TrialConfig make_trial_config(const SimulateFlags& f) {
    TrialConfig cfg;
    cfg.d = f.d;
    cfg.n = f.n;
    cfg.obs.kind = f.obs_model == "gaussian" ? ObsModel::Kind::Gaussian : ObsModel::Kind::Categorical;
    cfg.obs.alphabet = f.k;
    cfg.obs.width = f.width;
    cfg.obs.sigma = f.sigma;
    cfg.obs.spacing = f.spacing;
    cfg.p_levels = parse_levels(f.p_levels);
    cfg.policy.kind = parse_policy(f.policy);
    cfg.policy.mixed = f.mixed;
    cfg.trials = f.trials;
    cfg.estimator = f.estimator == "stratified" ? ScoreReport::Estimator::Stratified
                                                : ScoreReport::Estimator::PlugIn;
    cfg.kernel = parse_kernel(f.kernel_text);
    cfg.master_seed = f.seed;
    cfg.workers = f.workers;
    return cfg;
}

json config_json(const TrialConfig& cfg, const SimulateFlags& f) {
    json j;
    j["d"] = cfg.d;
    j["n"] = cfg.n;
    j["obs_model"] = f.obs_model;
    if (cfg.obs.kind == ObsModel::Kind::Categorical) {
        j["k"] = cfg.obs.alphabet;
    } else {
        j["width"] = cfg.obs.width;
        j["sigma"] = cfg.obs.sigma;
        j["spacing"] = cfg.obs.spacing > 0 ? cfg.obs.spacing : 4.0 * cfg.obs.sigma;
    }
    j["p_levels"] = cfg.p_levels;
    j["policy"] = policy_name(cfg.policy.kind);
    j["trials"] = cfg.trials;
    j["estimator"] = f.estimator;
    j["kernel"] = kernel_json(cfg.kernel);
    j["seed"] = cfg.master_seed;
    return j;
}

int cmd_simulate(SimulateFlags& f, ManifestBuilder& manifest) {
    const TrialConfig cfg = make_trial_config(f);
    manifest.command = "simulate";
    manifest.seed = f.seed;
    manifest.flag("d", static_cast<int64_t>(f.d));
    manifest.flag("n", static_cast<int64_t>(f.n));
    manifest.flag("obs-model", f.obs_model);
    manifest.flag("p-levels", f.p_levels);
    manifest.flag("policy", f.policy);
    manifest.flag("trials", static_cast<int64_t>(f.trials));
    manifest.flag("estimator", f.estimator);
    manifest.flag("kernel", f.kernel_text);
    manifest.flag("workers", static_cast<int64_t>(f.workers));

    json out;
    if (f.compare.empty()) {
        const TrialResult result = run_trials(cfg);
        out["manifest"] = manifest.build();
        out["config"] = config_json(cfg, f);
        json rows = json::array();
        std::cout << "p      mean score      se            mean hamming  mean l2\n";
        for (size_t p = 0; p < result.p_levels.size(); ++p) {
            const auto& agg = result.aggregates[p];
            json row;
            row["p"] = result.p_levels[p];
            row["score_mean"] = agg.score_mean;
            row["score_se"] = agg.score_se;
            row["hamming_mean"] = agg.hamming_mean;
            row["hamming_se"] = agg.hamming_se;
            row["l2_mean"] = agg.l2_mean;
            row["l2_se"] = agg.l2_se;
            json cells = json::array();
            for (const auto& c : result.cells[p])
                cells.push_back(json{{"score", c.score}, {"hamming", c.hamming}, {"l2", c.l2}});
            row["cells"] = cells;
            rows.push_back(row);
            std::printf("%-6.3g %-15.6g %-13.6g %-13.6g %-.6g\n", result.p_levels[p],
                        agg.score_mean, agg.score_se, agg.hamming_mean, agg.l2_mean);
        }
        out["results"] = rows;
    } else {
        std::vector<BaselineSpec> kinds;
        for (const auto& name : split_list(f.compare)) kinds.push_back({parse_baseline(name), f.topk});
        manifest.flag("compare", f.compare);
        const ComparisonResult result = compare_scores(cfg, kinds);
        out["manifest"] = manifest.build();
        out["config"] = config_json(cfg, f);
        json table = json::array();
        for (size_t kind = 0; kind < result.kind_names.size(); ++kind) {
            json entry;
            entry["kind"] = result.kind_names[kind];
            json rows = json::array();
            for (size_t p = 0; p < result.p_levels.size(); ++p) {
                const auto& cell = result.cells[kind][p];
                rows.push_back(json{{"p", result.p_levels[p]},
                                    {"mean", cell.mean},
                                    {"se", cell.se},
                                    {"trials", cell.trials}});
            }
            entry["rows"] = rows;
            table.push_back(entry);
            std::cout << result.kind_names[kind] << ":";
            for (size_t p = 0; p < result.p_levels.size(); ++p)
                std::cout << "  " << result.cells[kind][p].mean;
            std::cout << "\n";
        }
        out["table"] = table;
        json rc = json::array();
        for (const auto& pair : result.rank_consistency)
            rc.push_back(json{{"a", pair.a}, {"b", pair.b}, {"consistent", pair.consistent}});
        out["rank_consistency"] = rc;
    }
    write_json(f.out, out);
    std::cout << "results written to " << f.out << "\n";
    return kExitOk;
}

struct ValidateFlags {
    int balance = 1;       // L
    double delta = 1.0;    // Hamming-fraction bound
    double alpha = 1.0;    // Hamming ordering margin
    std::string obs_kind = "auto";
    std::string out;
};

int cmd_validate(const std::vector<std::string>& inputs, ValidateFlags& f,
                 ManifestBuilder& manifest) {
    // Shared token mapping across files so cross-file orderings are meaningful.
    std::vector<std::string> shared_names;
    std::map<std::string, int> shared_ids;
    auto remap = [&](const Labels& local, const std::vector<std::string>& names) {
        std::vector<int> vals;
        vals.reserve(local.values.size());
        for (int v : local.values) {
            const std::string& tok = names[v - 1];
            auto [it, inserted] = shared_ids.try_emplace(tok, static_cast<int>(shared_names.size()) + 1);
            if (inserted) shared_names.push_back(tok);
            vals.push_back(it->second);
        }
        return vals;
    };

    struct Entry {
        std::string input;
        std::vector<int> report, truth;
    };
    std::vector<Entry> entries;
    LoadSchema schema;
    schema.obs_kind = f.obs_kind == "categorical"  ? LoadSchema::ObsKind::Categorical
                      : f.obs_kind == "embedding" ? LoadSchema::ObsKind::Embedding
                                                  : LoadSchema::ObsKind::Auto;
    schema.allow_missing_observations = true;
    for (const auto& path : inputs) {
        const Dataset ds = load_dataset(path, schema);
        if (!ds.truth) throw ParseError(path + ": validate needs a ground-truth column");
        entries.push_back({path, remap(ds.report, ds.label_names), remap(*ds.truth, ds.label_names)});
    }
    const int d = static_cast<int>(shared_names.size());
    std::vector<Labels> reports, truths;
    for (const auto& e : entries) {
        reports.emplace_back(e.report, d);
        truths.emplace_back(e.truth, d);
    }
    for (size_t i = 1; i < truths.size(); ++i)
        if (truths[i].values != truths[0].values)
            throw ParseError("validate: ground-truth columns differ between inputs");

    manifest.command = "validate";
    for (const auto& path : inputs) manifest.inputs.push_back(path);
    manifest.flag("L", static_cast<int64_t>(f.balance));
    manifest.flag("delta", f.delta);
    manifest.flag("alpha", f.alpha);

    json datasets = json::array();
    for (size_t i = 0; i < entries.size(); ++i) {
        const MisreportCounts q = misreport_matrix(truths[i], reports[i]);
        const int64_t ham = q.n_total - q.trace_counts();
        json dj;
        dj["input"] = entries[i].input;
        dj["n"] = q.n_total;
        dj["labels"] = shared_names;
        json counts = json::array();
        for (int r = 0; r < q.d; ++r) {
            json row = json::array();
            for (int c = 0; c < q.d; ++c) row.push_back(q.at(r, c));
            counts.push_back(row);
        }
        dj["counts"] = counts;
        dj["trace"] = static_cast<double>(q.trace_counts()) / static_cast<double>(q.n_total);
        dj["hamming"] = ham;
        dj["classes"] = json{
            {"nonperm", class_member(q, MatrixClass::nonperm())},
            {"reg", class_member(q, MatrixClass::reg())},
            {"dom", class_member(q, MatrixClass::dom())},
            {"balanced", class_member(q, MatrixClass::balanced(f.balance))},
            {"balanced_delta", class_member(q, MatrixClass::balanced_delta(f.balance, f.delta))}};
        datasets.push_back(dj);

        std::cout << entries[i].input << ": n=" << q.n_total << " trace=" << dj["trace"]
                  << " hamming=" << ham << " reg=" << (class_member(q, MatrixClass::reg()) ? "yes" : "no")
                  << " dom=" << (class_member(q, MatrixClass::dom()) ? "yes" : "no") << "\n";
    }

    json pairwise = json::array();
    for (size_t a = 0; a < entries.size(); ++a) {
        for (size_t b = 0; b < entries.size(); ++b) {
            if (a == b) continue;
            json pj;
            pj["a"] = entries[a].input;
            pj["b"] = entries[b].input;
            pj["exact"] =
                ordering_holds(truths[a], reports[a], reports[b], OrderingSpec::exact()).holds;
            const auto bw = ordering_holds(truths[a], reports[a], reports[b], OrderingSpec::blackwell());
            json bwj;
            bwj["holds"] = bw.holds;
            if (bw.witness && bw.witness->is_witness) {
                json t = json::array();
                for (int r = 0; r < bw.witness->t.rows(); ++r) {
                    json row = json::array();
                    for (int c = 0; c < bw.witness->t.cols(); ++c) row.push_back(bw.witness->t(r, c));
                    t.push_back(row);
                }
                bwj["witness"] = t;
            }
            pj["blackwell"] = bwj;
            pj["hamming"] =
                ordering_holds(truths[a], reports[a], reports[b], OrderingSpec::hamming(f.alpha)).holds;
            pairwise.push_back(pj);
            std::cout << entries[a].input << " vs " << entries[b].input
                      << ": exact=" << (pj["exact"].get<bool>() ? "yes" : "no")
                      << " blackwell=" << (bw.holds ? "yes" : "no")
                      << " hamming(alpha=" << f.alpha << ")="
                      << (pj["hamming"].get<bool>() ? "yes" : "no") << "\n";
        }
    }

    if (!f.out.empty()) {
        json out;
        out["manifest"] = manifest.build();
        out["datasets"] = datasets;
        out["pairwise"] = pairwise;
        write_json(f.out, out);
        std::cout << "report written to " << f.out << "\n";
    }
    return kExitOk;
}

int cmd_bucketize(const std::string& input, int buckets, bool diff, const std::string& out,
                  ManifestBuilder& manifest) {
    std::vector<double> series = read_series(input);
    if (diff) series = diff_series(series);
    const Labels labels = quantile_bucketize(series, {buckets});
    write_label_file(out, labels);

    manifest.command = "bucketize";
    manifest.inputs.push_back(input);
    manifest.flag("buckets", static_cast<int64_t>(buckets));
    manifest.flag("diff", std::string(diff ? "true" : "false"));

    std::cout << "bucketized " << labels.n() << " values into " << buckets << " buckets -> " << out
              << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gram determinant reliability scoring for reported datasets"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Config file mirroring the flags; keys live in a [subcommand] section");

    auto* score = app.add_subcommand("score", "Score one dataset against its observations");
    score->fallthrough();
    std::string score_input;
    ScoreFlags score_flags;
    score->add_option("input", score_input, "Dataset file (label column + observations)")->required();
    add_score_flags(score, &score_flags);

    auto* rank = app.add_subcommand("rank", "Score several datasets and rank them");
    rank->fallthrough();
    std::vector<std::string> rank_inputs;
    ScoreFlags rank_flags;
    rank->add_option("inputs", rank_inputs, "Dataset files over one observation space")->required();
    add_score_flags(rank, &rank_flags);

    auto* simulate = app.add_subcommand("simulate", "Synthetic corruption trials");
    simulate->fallthrough();
    SimulateFlags sf;
    simulate->add_option("--d", sf.d, "Label-space size");
    simulate->add_option("--n", sf.n, "Records per dataset");
    simulate->add_option("--obs-model", sf.obs_model, "categorical | gaussian")
        ->check(CLI::IsMember({"categorical", "gaussian"}));
    simulate->add_option("--k", sf.k, "Observation alphabet (categorical model)");
    simulate->add_option("--width", sf.width, "Embedding width (gaussian model)");
    simulate->add_option("--sigma", sf.sigma, "Gaussian noise scale");
    simulate->add_option("--spacing", sf.spacing, "Class-mean spacing (0 = 4*sigma)");
    simulate->add_option("--p-levels", sf.p_levels, "Comma list of corruption levels");
    simulate->add_option("--policy", sf.policy,
                         "uniform | asym-neighbor | row-sim-2nd | merge-01 | group-updown | mixed "
                         "(labels are 1-based: merge-01 maps labels 1,2 -> 1)");
    simulate->add_option("--trials", sf.trials, "Trials per corruption level (M)");
    simulate->add_option("--estimator", sf.estimator, "plugin | stratified")
        ->check(CLI::IsMember({"plugin", "stratified"}));
    simulate->add_option("--kernel", sf.kernel_text, "delta | linear | rbf[:SIGMA] | pseudo-posterior");
    simulate->add_option("--seed", sf.seed, "Master seed")->envname("GRAMDET_SEED");
    simulate->add_option("--workers", sf.workers, "Parallel workers (deterministic ordered merge)");
    simulate->add_option("--compare", sf.compare,
                         "Comma list of baseline score kinds to compare against the Gram reference "
                         "(topk-volume, max-correlation, kyfan, chi2-mi, kl-mi)");
    simulate->add_option("--topk", sf.topk, "k for topk-volume / kyfan (default d-1)");
    simulate->add_option("--out", sf.out, "Results file path");
    simulate->add_option("--mixed-alpha-off", sf.mixed.alpha_off, "Mixed policy: off-diagonal mass");
    simulate->add_option("--mixed-alpha-diag", sf.mixed.alpha_diag, "Mixed policy: diagonal mass");
    simulate->add_option("--mixed-lambda-loc", sf.mixed.lambda_loc, "Mixed policy: ring locality");
    simulate->add_option("--mixed-lambda-up", sf.mixed.lambda_up, "Mixed policy: upcoding weight");
    simulate->add_option("--mixed-gamma", sf.mixed.gamma, "Mixed policy: upcoding decay");
    simulate->add_option("--mixed-lambda-def", sf.mixed.lambda_def, "Mixed policy: default-label bias");
    simulate->add_option("--mixed-default-label", sf.mixed.default_label, "Mixed policy: default label");

    auto* validate = app.add_subcommand("validate", "Misreport diagnostics for labeled data");
    validate->fallthrough();
    std::vector<std::string> validate_inputs;
    ValidateFlags vf;
    validate->add_option("inputs", validate_inputs, "Dataset files with a truth column")->required();
    validate->add_option("--L", vf.balance, "Balance bound L");
    validate->add_option("--delta", vf.delta, "Hamming-fraction bound for the L,delta class");
    validate->add_option("--alpha", vf.alpha, "Margin factor for the Hamming ordering");
    validate->add_option("--obs-kind", vf.obs_kind, "auto | categorical | embedding");
    validate->add_option("--out", vf.out, "Optional JSON report path");

    auto* bucketize = app.add_subcommand("bucketize", "Quantile-bucketize a numeric series");
    bucketize->fallthrough();
    std::string bucketize_input, bucketize_out;
    int buckets = 4;
    bool do_diff = false;
    bucketize->add_option("input", bucketize_input, "Single-column numeric series file")->required();
    bucketize->add_option("-B,--buckets", buckets, "Bucket count");
    bucketize->add_flag("--diff", do_diff, "Difference the series first");
    bucketize->add_option("--out", bucketize_out, "Output label file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    ManifestBuilder manifest;
    try {
        if (app.got_subcommand(score)) return cmd_score(score_input, score_flags, manifest);
        if (app.got_subcommand(rank)) return cmd_rank(rank_inputs, rank_flags, manifest);
        if (app.got_subcommand(simulate)) return cmd_simulate(sf, manifest);
        if (app.got_subcommand(validate)) return cmd_validate(validate_inputs, vf, manifest);
        if (app.got_subcommand(bucketize))
            return cmd_bucketize(bucketize_input, buckets, do_diff, bucketize_out, manifest);
    } catch (const KernelDomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
