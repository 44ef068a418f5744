// Acceptance suite: every criterion prints one [PASS]/[FAIL] line; the
// process exits nonzero if any criterion fails. Oracles live in oracles.hpp
// and stay independent of the library code paths they check.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "core/analytics.hpp"
#include "core/graphsage.hpp"
#include "core/ingest.hpp"
#include "core/kc.hpp"
#include "core/node2vec.hpp"
#include "core/pipeline.hpp"
#include "core/random.hpp"

#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace kcgml;

namespace {

struct Check {
    std::size_t assertions = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        ++assertions;
        if (!ok && failures.size() < 8) failures.push_back(what);
        if (!ok && failures.size() == 8) failures.push_back("...");
    }
};

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(KCGML_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    CliResult result;
    if (!pipe) return result;
    std::array<char, 4096> buf;
    while (std::fgets(buf.data(), buf.size(), pipe)) result.output += buf.data();
    const int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path scratch_root() {
    return fs::temp_directory_path() / ("kcgml_acceptance_" + std::to_string(::getpid()));
}

KnowledgeGraph random_temporal_graph(Rng& rng, std::size_t max_nodes, std::size_t max_ts) {
    const std::size_t n = 2 + rng.next_below(max_nodes - 1);
    const std::size_t ts = 1 + rng.next_below(max_ts);
    KnowledgeGraph g;
    for (std::size_t i = 0; i < n; ++i) g.intern(std::to_string(i), label::kPerson);
    const std::size_t events = 1 + rng.next_below(3 * n);
    for (std::size_t k = 0; k < events; ++k) {
        const NodeId a = static_cast<NodeId>(rng.next_below(n));
        const NodeId b = static_cast<NodeId>(rng.next_below(n));
        if (a != b) g.add_contact(a, b, 20.0 * (1 + rng.next_below(ts)), Provenance::Direct);
    }
    return g;
}

// ---- criteria --------------------------------------------------------------

// 200 random temporal graphs: closure equals per-timestamp component
// completion exactly, is idempotent, and finishes inside 10 seconds.
void criterion_closure_oracle(Check& c) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng = derive_rng(1001, "acc-closure");
    for (int trial = 0; trial < 200; ++trial) {
        const KnowledgeGraph g = random_temporal_graph(rng, 50, 20);
        auto [closed, stats] = transitive_closure_step(g);
        c.expect(oracle::events_by_time(closed) == oracle::brute_force_closure(g),
                 "closure != brute-force completion (trial " + std::to_string(trial) + ")");
        auto [twice, stats2] = transitive_closure_step(closed);
        c.expect(stats2.inferred_events_added == 0, "closure not idempotent");
        c.expect(closed.node_count() == g.node_count(), "closure changed the node set");
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs < 10.0, "closure batch took " + std::to_string(secs) + "s (limit 10)");
}

// 100 random (G, G + extra edges) pairs with exhaustive fanouts: influence
// never decreases for any node.
void criterion_influence_monotonicity(Check& c) {
    Rng rng = derive_rng(1002, "acc-influence");
    for (int trial = 0; trial < 100; ++trial) {
        KnowledgeGraph g = random_temporal_graph(rng, 20, 4);
        SageConfig cfg;
        cfg.fanouts = {128, 128}; // exhaustive for every degree here
        cfg.dimensions = 4;
        const SampledNeighborhoods before = sample_neighborhoods(g, cfg, 1);
        const auto i_before = aggregation_influence(before, g.node_count());

        const std::size_t extra = 1 + rng.next_below(8);
        for (std::size_t k = 0; k < extra; ++k) {
            const NodeId a = static_cast<NodeId>(rng.next_below(g.node_count()));
            const NodeId b = static_cast<NodeId>(rng.next_below(g.node_count()));
            if (a != b) g.add_contact(a, b, 20, Provenance::Inferred);
        }
        const SampledNeighborhoods after = sample_neighborhoods(g, cfg, 1);
        const auto i_after = aggregation_influence(after, g.node_count());
        for (std::size_t v = 0; v < i_before.size(); ++v)
            c.expect(i_after[v] >= i_before[v], "influence dropped at node " + std::to_string(v));
    }
}

// Every walk generated on the raw graph keeps strictly positive probability
// under the completed graph's transition tables; distributions sum to one.
void criterion_walk_support(Check& c) {
    Rng rng = derive_rng(1003, "acc-walks");
    for (int trial = 0; trial < 10; ++trial) {
        const KnowledgeGraph g = random_temporal_graph(rng, 24, 5);
        auto [closed, stats] = transitive_closure_step(g);

        WalkConfig cfg;
        cfg.num_walks_per_node = 3;
        cfg.walk_length = 12;
        cfg.p = 2.0;
        cfg.q = 0.5;
        cfg.seed = 100 + trial;
        const WalkCorpus corpus = generate_walks(g, cfg);

        for (const auto& walk : corpus.walks) {
            std::optional<NodeId> prev;
            for (std::size_t i = 1; i < walk.size(); ++i) {
                const auto probs = transition_distribution(closed, prev, walk[i - 1], cfg);
                double sum = 0.0;
                for (double p : probs) sum += p;
                c.expect(std::abs(sum - 1.0) <= 1e-12, "distribution sum off by more than 1e-12");
                const auto neighbors = closed.neighbors(walk[i - 1], Relation::HasContactWith);
                double prob = 0.0;
                for (std::size_t k = 0; k < neighbors.size(); ++k)
                    if (neighbors[k].id == walk[i]) prob = probs[k];
                c.expect(prob > 0.0, "raw walk step lost support under the completed graph");
                prev = walk[i - 1];
            }
        }
    }
}

// With unit strengths the weighted paths are bit-identical to the unweighted
// ones, for both embedding families.
void criterion_strength_identity(Check& c) {
    Rng rng = derive_rng(1004, "acc-identity");
    for (int trial = 0; trial < 10; ++trial) {
        const KnowledgeGraph g = random_temporal_graph(rng, 20, 5);
        WalkConfig plain;
        WalkConfig weighted;
        weighted.use_strength = true;
        for (const NodeRecord& n : g.nodes()) {
            for (const Neighbor& nb : g.neighbors(n.id, Relation::HasContactWith)) {
                const auto a = transition_distribution(g, nb.id, n.id, plain);
                const auto b = transition_distribution(g, nb.id, n.id, weighted);
                c.expect(a == b, "node2vec distributions differ under unit strengths");
            }
        }

        KnowledgeGraph props = g;
        props.compute_node_properties();
        const FeatureMatrix f = build_features(props);
        SageConfig sage_plain;
        sage_plain.fanouts = {6, 4};
        sage_plain.dimensions = 8;
        SageConfig sage_weighted = sage_plain;
        sage_weighted.use_strength = true;
        const SampledNeighborhoods hoods = sample_neighborhoods(props, sage_plain, 17);
        const LayerWeights w = init_sage_weights(f.values.cols, sage_plain);
        const EmbeddingMatrix ea = sage_forward(f, hoods, w, sage_plain, props);
        const EmbeddingMatrix eb = sage_forward(f, hoods, w, sage_weighted, props);
        c.expect(ea.values == eb.values, "graphsage outputs differ under unit strengths");
    }
}

// Analytic gradients match central finite differences (eps = 1e-5) to a
// relative error below 1e-4, on 50 random points per model.
void criterion_gradients(Check& c) {
    Rng rng = derive_rng(1005, "acc-grad");
    const std::size_t d = 8, n_neg = 4;
    for (int point = 0; point < 50; ++point) {
        std::vector<double> center(d), context(d), negs(n_neg * d);
        for (double& x : center) x = rng.next_double(-1, 1);
        for (double& x : context) x = rng.next_double(-1, 1);
        for (double& x : negs) x = rng.next_double(-1, 1);
        std::vector<const double*> neg_rows(n_neg);
        for (std::size_t k = 0; k < n_neg; ++k) neg_rows[k] = negs.data() + k * d;
        std::vector<double> gc(d), go(d), gn(n_neg * d);
        skipgram_pair_loss_grad(center, context, neg_rows.data(), n_neg, gc.data(), go.data(),
                                gn.data());
        auto loss = [&] {
            return skipgram_pair_loss_grad(center, context, neg_rows.data(), n_neg, nullptr,
                                           nullptr, nullptr);
        };
        for (std::size_t i = 0; i < d; ++i) {
            c.expect(oracle::rel_err(oracle::central_diff(loss, &center[i]), gc[i]) < 1e-4,
                     "skip-gram center gradient mismatch");
            c.expect(oracle::rel_err(oracle::central_diff(loss, &context[i]), go[i]) < 1e-4,
                     "skip-gram context gradient mismatch");
        }
        for (std::size_t i = 0; i < n_neg * d; ++i)
            c.expect(oracle::rel_err(oracle::central_diff(loss, &negs[i]), gn[i]) < 1e-4,
                     "skip-gram negative gradient mismatch");
    }

    // graphsage: random weight points on a fixed small problem
    Rng grng = derive_rng(1006, "acc-sage-grad");
    KnowledgeGraph g = random_temporal_graph(grng, 10, 3);
    while (g.node_count() < 8) g = random_temporal_graph(grng, 10, 3);
    g.compute_node_properties();
    const FeatureMatrix f = build_features(g);
    SageConfig cfg;
    cfg.fanouts = {4, 3};
    cfg.dimensions = 5;
    cfg.negative_samples = 2;
    const SampledNeighborhoods hoods = sample_neighborhoods(g, cfg, 23);
    const std::vector<std::pair<NodeId, NodeId>> positives{{0, 1}, {2, 3}, {4, 5}, {1, 6}};
    const std::vector<NodeId> negatives{7, 0, 3, 6, 1, 2, 5, 4};

    int points = 0;
    for (int trial = 0; trial < 200 && points < 50; ++trial) {
        LayerWeights w = init_sage_weights(f.values.cols, cfg);
        for (Matrix& layer : w.layers)
            for (double& x : layer.data) x = grng.next_double(-0.8, 0.8);
        LayerWeights grads;
        sage_loss_and_grad(f, hoods, w, cfg, positives, negatives, &grads);
        auto loss = [&] {
            return sage_loss_and_grad(f, hoods, w, cfg, positives, negatives, nullptr);
        };
        bool informative = false;
        for (std::size_t k = 0; k < w.layers.size(); ++k)
            for (int probe = 0; probe < 3; ++probe) {
                const std::size_t idx = grng.next_below(w.layers[k].data.size());
                const double fd = oracle::central_diff(loss, &w.layers[k].data[idx]);
                const double an = grads.layers[k].data[idx];
                if (std::abs(fd) < 1e-7 && std::abs(an) < 1e-7) continue; // flat coordinate
                c.expect(oracle::rel_err(fd, an) < 1e-4, "graphsage weight gradient mismatch");
                informative = true;
            }
        if (informative) ++points;
    }
    c.expect(points >= 50, "fewer than 50 informative graphsage gradient points");
}

// Cycle uniformity to 1e-12, dense-oracle agreement to 1e-8, probability
// normalization to 1e-9.
void criterion_pagerank(Check& c) {
    KnowledgeGraph cycle;
    const std::size_t n_cycle = 12;
    for (std::size_t i = 0; i < n_cycle; ++i) cycle.intern(std::to_string(i), label::kPerson);
    for (std::size_t i = 0; i < n_cycle; ++i)
        cycle.add_contact(static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n_cycle), 20,
                          Provenance::Direct);
    PageRankConfig prob;
    prob.normalization = PageRankNorm::Probability;
    const PageRankResult uniform = pagerank(cycle, prob);
    for (double s : uniform.scores)
        c.expect(std::abs(s - 1.0 / static_cast<double>(n_cycle)) <= 1e-12,
                 "cycle scores not uniform to 1e-12");

    Rng rng = derive_rng(1007, "acc-pagerank");
    for (int trial = 0; trial < 20; ++trial) {
        KnowledgeGraph g = random_temporal_graph(rng, 90, 3);
        // a department adds a directed edge and a dangling node
        const NodeId dep = g.intern("DEP", label::kDepartment);
        g.add_part_of(0, dep);
        PageRankConfig cfg;
        cfg.normalization = PageRankNorm::Probability;
        cfg.tolerance = 1e-13;
        cfg.max_iterations = 1000;
        const PageRankResult r = pagerank(g, cfg);
        const auto dense = oracle::dense_pagerank(g, cfg.alpha, 400);
        double sum = 0.0;
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            c.expect(std::abs(r.scores[v] - dense[v]) < 1e-8, "sparse vs dense oracle > 1e-8");
            sum += r.scores[v];
        }
        c.expect(std::abs(sum - 1.0) <= 1e-9, "probability scores do not sum to 1 +/- 1e-9");
    }
}

// 1000 random (P_A, t, beta) triples against an independent closed-form
// evaluation, clamp cases included; defaults beta=0.01, tau=0.2 verified in
// a real KC report.
void criterion_contagion_arithmetic(Check& c, const fs::path& scratch) {
    Rng rng = derive_rng(1008, "acc-contagion");
    for (int trial = 0; trial < 1000; ++trial) {
        const double p_a = rng.next_double();
        const double t = rng.next_double() * 600.0;
        const double beta = 0.001 + rng.next_double() * 0.05;
        StrengthModel m;
        m.beta = beta;
        m.clamp = (trial % 2 == 0);
        const double got = path_strength(t, p_a, m);
        double want = p_a - std::exp(-beta * t); // independent evaluation
        if (m.clamp) want = std::min(1.0, std::max(0.0, want));
        c.expect(std::abs(got - want) <= 1e-12, "path strength differs from closed form");

        std::vector<double> strengths;
        const std::size_t k = 1 + rng.next_below(6);
        for (std::size_t i = 0; i < k; ++i) strengths.push_back(rng.next_double());
        StrengthModel agg;
        double miss = 1.0;
        for (double s : strengths) miss *= (1.0 - s);
        c.expect(std::abs(aggregate_strength(strengths, agg) - (1.0 - miss)) <= 1e-12,
                 "noisy-or differs from closed form");
    }

    // defaults land in the persisted report
    const fs::path dir = scratch / "defaults";
    const auto ingest = run_cli("ingest --synthetic --people 12 --timestamps 8 --event-rate 3 "
                                "--seed 2 --out " +
                                dir.string());
    const auto complete = run_cli("complete --out " + dir.string());
    c.expect(ingest.exit_code == 0 && complete.exit_code == 0, "default KC run failed");
    const std::string report = read_text_file((dir / "kc_report.json").string());
    c.expect(report.find("\"beta\": 0.01") != std::string::npos, "beta default not in report");
    c.expect(report.find("\"tau\": 0.2") != std::string::npos, "tau default not in report");
}

// Case-study protocol on the bundled dataset: growth, a side-by-side top-10
// comparison, strictly positive drift under matched seeds, zero drift on an
// identical pair, all inside 60 seconds.
void criterion_case_study(Check& c, const fs::path& scratch) {
    const fs::path dir = scratch / "case_study";
    const std::string data = KCGML_DATA_DIR;
    const auto start = std::chrono::steady_clock::now();
    const auto r = run_cli("pipeline --contacts " + data + "/contacts.txt --metadata " + data +
                           "/metadata.txt --seed 42 --threads 1 --dims 16 --walks 10 --length 80 "
                           "--window 10 --p 1 --q 1 --fanouts 25,10 --top-k 10 --out " +
                           dir.string());
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(r.exit_code == 0, "pipeline failed: " + r.output.substr(0, 200));
    c.expect(secs < 60.0, "pipeline took " + std::to_string(secs) + "s (limit 60)");

    const ordered_json kc_report =
        ordered_json::parse(read_text_file((dir / "kc_report.json").string()));
    c.expect(kc_report.at("closure").at("inferred_pairs_added").get<std::size_t>() > 0,
             "no inferred pair growth on the bundled dataset");
    // frozen counts for the committed dataset files
    c.expect(kc_report.at("pairs").at("raw").get<std::size_t>() == 1746,
             "bundled raw pair count changed");
    c.expect(kc_report.at("pairs").at("kc").get<std::size_t>() == 1940,
             "bundled completed pair count changed");

    const ordered_json report =
        ordered_json::parse(read_text_file((dir / "analytics_report.json").string()));
    const auto& pagerank = report.at("pagerank");
    c.expect(pagerank.at("raw").size() == 10, "raw top-10 table missing rows");
    c.expect(pagerank.at("kc").size() == 10, "kc top-10 table missing rows");
    for (const char* table : {"raw", "kc"})
        for (const auto& row : pagerank.at(table))
            c.expect(row.contains("rank") && row.contains("node") && row.contains("score"),
                     "ranking row lacks rank/node/score");

    for (const char* gen : {"node2vec", "graphsage"}) {
        const double mean = report.at("drift").at(gen).at("mean").get<double>();
        c.expect(mean > 0.0, std::string(gen) + " drift not strictly positive");
    }

    // completion moves top-10 membership on this dataset, including rank 1
    c.expect(pagerank.at("jaccard_overlap").get<double>() < 1.0,
             "top-10 overlap unchanged by completion");
    c.expect(pagerank.at("raw")[0].at("node") == "34", "raw top-1 node changed");
    c.expect(pagerank.at("kc")[0].at("node") == "47", "completed top-1 node changed");

    // identical graph pair -> exactly zero drift
    EmbeddingMatrix raw = EmbeddingMatrix::load_csv((dir / "embeddings_node2vec_raw.csv").string());
    EmbeddingMatrix same = raw;
    raw.generator = same.generator = "node2vec";
    const DriftReport zero = embedding_drift(raw, same);
    c.expect(zero.mean == 0.0, "identical pair drift is not exactly zero");

    // the 60-second budget also covers the largest supported population
    const fs::path big = scratch / "case_study_300";
    const auto big_start = std::chrono::steady_clock::now();
    const auto big_run =
        run_cli("pipeline --synthetic --people 300 --departments 8 --timestamps 600 "
                "--event-rate 20 --group-min 2 --group-max 4 --seed 42 --dims 16 --walks 10 "
                "--length 80 --window 10 --p 1 --q 1 --fanouts 25,10 --top-k 10 --out " +
                big.string());
    const double big_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - big_start).count();
    c.expect(big_run.exit_code == 0, "300-person pipeline failed");
    c.expect(big_secs < 60.0,
             "300-person pipeline took " + std::to_string(big_secs) + "s (limit 60)");
}

// Byte-identical artifact trees across --threads 1 reruns from the manifest;
// threaded walk corpora equal the serial ones.
void criterion_determinism(Check& c, const fs::path& scratch) {
    const fs::path a = scratch / "det_a";
    const fs::path b = scratch / "det_b";
    const std::string flags = "pipeline --synthetic --people 26 --departments 3 --timestamps 24 "
                              "--event-rate 5 --seed 11 --threads 1 --dims 8 --walks 3 "
                              "--length 12 --window 3 --epochs 2 --fanouts 5,3 --sage-epochs 2 "
                              "--dump-walks";
    c.expect(run_cli(flags + " --out " + a.string()).exit_code == 0, "first run failed");
    c.expect(run_cli("pipeline --from-manifest " + (a / "manifest.json").string() +
                     " --threads 1 --out " + b.string())
                     .exit_code == 0,
             "manifest rerun failed");

    for (const auto& entry : fs::directory_iterator(a)) {
        const std::string name = entry.path().filename().string();
        if (name == "manifest.json") continue; // differs only in wall times
        c.expect(fs::exists(b / name), name + " missing from rerun");
        if (!fs::exists(b / name)) continue;
        c.expect(read_text_file((a / name).string()) == read_text_file((b / name).string()),
                 name + " differs between --threads 1 runs");
    }
    const ordered_json ma = ordered_json::parse(read_text_file((a / "manifest.json").string()));
    const ordered_json mb = ordered_json::parse(read_text_file((b / "manifest.json").string()));
    c.expect(ma.at("artifacts") == mb.at("artifacts"), "manifest artifact hashes differ");

    // threaded embed on the same inputs reproduces the serial walk corpora
    const std::string walks_raw = read_text_file((b / "walks_node2vec_raw.txt").string());
    const std::string walks_kc = read_text_file((b / "walks_node2vec_kc.txt").string());
    c.expect(run_cli("embed --threads 4 --dims 8 --walks 3 --length 12 --window 3 --epochs 2 "
                     "--fanouts 5,3 --sage-epochs 2 --dump-walks --seed 11 --out " +
                     b.string())
                     .exit_code == 0,
             "threaded embed failed");
    c.expect(read_text_file((b / "walks_node2vec_raw.txt").string()) == walks_raw,
             "threaded raw walk corpus differs from serial");
    c.expect(read_text_file((b / "walks_node2vec_kc.txt").string()) == walks_kc,
             "threaded kc walk corpus differs from serial");
}

// Real-dataset hook: pair counts print next to the office study's 1694/1882
// reference values; informational, never a gate.
void criterion_reference_report(Check& c, const fs::path& scratch) {
    const fs::path dir = scratch / "reference";
    const std::string data = KCGML_DATA_DIR;
    const auto ingest = run_cli("ingest --contacts " + data + "/contacts.txt --metadata " + data +
                                "/metadata.txt --out " + dir.string());
    c.expect(ingest.exit_code == 0, "ingest failed");
    c.expect(ingest.output.find("1694") != std::string::npos,
             "ingest output lacks the 1694 reference");
    const ordered_json ingest_report =
        ordered_json::parse(read_text_file((dir / "ingest_report.json").string()));
    c.expect(ingest_report.at("graph").at("contact_pairs").get<std::size_t>() > 0,
             "ingest report lacks the distinct pair count");
    c.expect(ingest_report.at("reference").at("office_raw_pairs").get<int>() == 1694,
             "ingest report lacks the office-study reference");

    const auto complete = run_cli("complete --out " + dir.string());
    c.expect(complete.exit_code == 0, "complete failed");
    c.expect(complete.output.find("1694 -> 1882") != std::string::npos,
             "complete output lacks the 1694 -> 1882 reference");
    const ordered_json kc_report =
        ordered_json::parse(read_text_file((dir / "kc_report.json").string()));
    c.expect(kc_report.at("reference").at("office_kc_pairs").get<int>() == 1882,
             "kc report lacks the office-study reference");
    c.expect(kc_report.at("pairs").contains("kc"), "kc report lacks the post-KC pair count");
}

} // namespace

int main() {
    const fs::path scratch = scratch_root();
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    using Fn = std::function<void(Check&)>;
    const std::vector<std::pair<std::string, Fn>> criteria{
        {"closure equals brute-force completion, idempotent, < 10 s",
         [](Check& c) { criterion_closure_oracle(c); }},
        {"aggregation influence monotone under edge additions",
         [](Check& c) { criterion_influence_monotonicity(c); }},
        {"raw walks keep positive probability after completion",
         [](Check& c) { criterion_walk_support(c); }},
        {"unit strengths reproduce unweighted paths bit-exactly",
         [](Check& c) { criterion_strength_identity(c); }},
        {"gradients match finite differences (rel err < 1e-4)",
         [](Check& c) { criterion_gradients(c); }},
        {"pagerank: uniform cycle, dense-oracle and normalization bounds",
         [](Check& c) { criterion_pagerank(c); }},
        {"contagion arithmetic matches closed forms; defaults in report",
         [&](Check& c) { criterion_contagion_arithmetic(c, scratch); }},
        {"case-study pipeline on the bundled dataset",
         [&](Check& c) { criterion_case_study(c, scratch); }},
        {"deterministic artifact trees and thread-independent corpora",
         [&](Check& c) { criterion_determinism(c, scratch); }},
        {"pair counts reported against the 1694/1882 reference",
         [&](Check& c) { criterion_reference_report(c, scratch); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = check.failures.empty();
        std::printf("[%s] criterion %2zu: %s (%zu assertions, %.2fs)\n", ok ? "PASS" : "FAIL",
                    i + 1, criteria[i].first.c_str(), check.assertions, secs);
        for (const std::string& f : check.failures) std::printf("        - %s\n", f.c_str());
        if (!ok) ++failed;
    }

    fs::remove_all(scratch);
    if (failed) {
        std::printf("%d of %zu criteria failed\n", failed, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
