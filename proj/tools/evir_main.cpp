#include <atomic>
#include <exception>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "evir/config.hpp"
#include "evir/corpus.hpp"
#include "evir/errors.hpp"
#include "evir/metrics.hpp"
#include "evir/pipeline.hpp"
#include "evir/synthetic.hpp"

namespace {

using namespace evir;

void print_list(std::ostream& out, const char* label, const RankedList& list, std::size_t head = 5) {
    out << "  " << label << " (" << list.size() << ")";
    for (std::size_t i = 0; i < list.size() && i < head; ++i) {
        out << (i == 0 ? ": " : " | ") << list[i].id << " " << list[i].score;
    }
    if (list.size() > head) out << " | ...";
    out << "\n";
}

void print_trace(std::ostream& out, const std::string& query_id, const QueryTrace& trace) {
    out << "query " << query_id << "\n";
    out << "  entities (" << trace.entities.size() << ")";
    for (std::size_t i = 0; i < trace.entities.size(); ++i) {
        out << (i == 0 ? ": " : " | ") << to_label(trace.entities[i].type) << " `" << trace.entities[i].canonical
            << "`";
    }
    out << "\n";
    print_list(out, "entity branch", trace.entity_branch);
    print_list(out, "bm25 branch", trace.bm25_branch);
    print_list(out, "fused articles", trace.fused_articles);
    print_list(out, "slot A images", trace.slot_a_images);
    print_list(out, "slot B images", trace.slot_b_images);
    print_list(out, "final images", trace.final_images, 10);
    out << "  ms: entity " << trace.entity_ms << " | bm25 " << trace.bm25_ms << " | fuse " << trace.fuse_ms
        << " | candidates " << trace.candidates_ms << " | rerank " << trace.rerank_ms << " | total "
        << trace.total_ms << "\n";
}

struct RetrieveOutput {
    RankedList images;
    QueryTrace trace;
    std::size_t dropped = 0;
};

// Runs every query against the shared immutable pipeline; results land at
// their input position, so worker scheduling never changes the output.
std::vector<RetrieveOutput> run_queries(const Pipeline& pipeline, const std::vector<Query>& queries,
                                        unsigned threads, bool want_trace) {
    std::vector<RetrieveOutput> outputs(queries.size());
    if (queries.empty()) return outputs;

    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= queries.size()) return;
            try {
                RetrieveResult result = pipeline.retrieve(queries[i], want_trace ? &outputs[i].trace : nullptr);
                outputs[i].images = std::move(result.images);
                outputs[i].dropped = result.dropped_images;
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(queries.size());
                return;
            }
        }
    };

    if (threads <= 1 || queries.size() == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        unsigned count = std::min<unsigned>(threads, static_cast<unsigned>(queries.size()));
        pool.reserve(count);
        for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return outputs;
}

unsigned default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 4 : n;
}

int run(int argc, char** argv) {
    CLI::App app{"evir — two-stage event-centric image retrieval"};
    app.require_subcommand(1);

    std::string config_path;
    std::string queries_path;
    std::string out_path;
    std::string run_path;
    std::string truth_path;
    std::string report_path;
    std::string query_id;
    std::string out_dir;
    std::vector<std::size_t> ks{1, 5, 10};
    bool trace = false;
    unsigned threads = default_threads();
    SyntheticSpec synth;

    CLI::App* cmd_index = app.add_subcommand("index", "build the inverted index and persist it");
    cmd_index->add_option("--config", config_path, "pipeline config file")->required();

    CLI::App* cmd_search = app.add_subcommand("search", "stage one only: print fused article rankings");
    cmd_search->add_option("--config", config_path, "pipeline config file")->required();
    cmd_search->add_option("--queries", queries_path, "query file (JSON lines)")->required();

    CLI::App* cmd_retrieve = app.add_subcommand("retrieve", "run the full pipeline and write a run file");
    cmd_retrieve->add_option("--config", config_path, "pipeline config file")->required();
    cmd_retrieve->add_option("--queries", queries_path, "query file (JSON lines)")->required();
    cmd_retrieve->add_option("--out", run_path, "run file to write")->required();
    cmd_retrieve->add_flag("--trace", trace, "print a per-query trace to stdout");
    cmd_retrieve->add_option("--threads", threads, "worker threads (default: hardware concurrency)");

    CLI::App* cmd_evaluate = app.add_subcommand("evaluate", "score a run file against ground truth");
    cmd_evaluate->add_option("--config", config_path, "accepted for interface uniformity; not consulted");
    cmd_evaluate->add_option("--run", run_path, "run file")->required();
    cmd_evaluate->add_option("--truth", truth_path, "ground-truth file (JSON lines)")->required();
    cmd_evaluate->add_option("--ks", ks, "recall cutoffs")->delimiter(',');
    cmd_evaluate->add_option("--report", report_path, "write the full report as JSON here");

    CLI::App* cmd_gen = app.add_subcommand("gen-synthetic", "generate a synthetic benchmark corpus");
    cmd_gen->add_option("--config", config_path, "accepted for interface uniformity; not consulted");
    cmd_gen->add_option("--out", out_dir, "output directory")->required();
    cmd_gen->add_option("--seed", synth.seed, "random seed");
    cmd_gen->add_option("--articles", synth.n_articles, "article count");
    cmd_gen->add_option("--queries", synth.n_queries, "query count");
    cmd_gen->add_option("--dim", synth.embedding_dim, "embedding dimensionality");
    cmd_gen->add_flag("--adversarial", synth.adversarial, "distractors share the GPE but not the PERSON entity");

    CLI::App* cmd_inspect = app.add_subcommand("inspect", "print the full trace for one query");
    cmd_inspect->add_option("--config", config_path, "pipeline config file")->required();
    cmd_inspect->add_option("--queries", queries_path, "query file (JSON lines)")->required();
    cmd_inspect->add_option("--query-id", query_id, "query to inspect")->required();
    cmd_inspect->add_flag("--trace", trace, "accepted for interface uniformity; inspect always traces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (cmd_index->parsed()) {
        PipelineConfig config = PipelineConfig::load(config_path);
        if (config.index_path.empty()) throw UsageError("config has no corpus.index path to write to");
        Corpus corpus = Corpus::load(config.articles, config.images);
        AnalysisConfig analysis;
        if (!config.stopwords.empty()) analysis.stopwords = load_stopwords(config.stopwords);
        analysis.stem = config.stem;
        InvertedIndex index = InvertedIndex::build(corpus, analysis, config.bm25);
        index.save(config.index_path);
        std::cout << "indexed " << index.doc_count() << " articles, " << index.terms().size() << " terms -> "
                  << config.index_path << "\n";
    } else if (cmd_search->parsed()) {
        Pipeline pipeline = Pipeline::build(PipelineConfig::load(config_path));
        for (const Query& query : load_queries(queries_path)) {
            RankedList articles = pipeline.search_articles(query);
            for (std::size_t i = 0; i < articles.size(); ++i) {
                std::cout << query.id << "\t" << i + 1 << "\t" << articles[i].id << "\t" << articles[i].score
                          << "\n";
            }
        }
    } else if (cmd_retrieve->parsed()) {
        Pipeline pipeline = Pipeline::build(PipelineConfig::load(config_path));
        std::vector<Query> queries = load_queries(queries_path);
        std::vector<RetrieveOutput> outputs = run_queries(pipeline, queries, threads, trace);

        std::vector<RunEntry> entries;
        entries.reserve(queries.size());
        std::size_t dropped = 0;
        for (std::size_t i = 0; i < queries.size(); ++i) {
            entries.emplace_back(queries[i].id, std::move(outputs[i].images));
            dropped += outputs[i].dropped;
        }
        save_run(run_path, entries);
        if (trace) {
            for (std::size_t i = 0; i < queries.size(); ++i) print_trace(std::cout, queries[i].id, outputs[i].trace);
        }
        if (dropped > 0) {
            std::cerr << "warning: " << dropped << " candidate image(s) lacked an embedding and were skipped\n";
        }
        std::cout << "wrote " << entries.size() << " queries -> " << run_path << "\n";
    } else if (cmd_evaluate->parsed()) {
        RunResult run_result = load_run(run_path);
        TruthMap truth = load_ground_truth(truth_path);
        MetricReport report = evaluate_run(run_result, truth, ks);
        std::cout << format_report(report);
        if (!report_path.empty()) save_report_json(report_path, report);
    } else if (cmd_gen->parsed()) {
        SyntheticPaths paths = generate_synthetic(synth, out_dir);
        std::cout << "generated " << synth.n_articles << " articles / " << synth.n_queries << " queries -> "
                  << paths.config << "\n";
    } else if (cmd_inspect->parsed()) {
        Pipeline pipeline = Pipeline::build(PipelineConfig::load(config_path));
        std::vector<Query> queries = load_queries(queries_path);
        const Query* chosen = nullptr;
        for (const Query& query : queries) {
            if (query.id == query_id) chosen = &query;
        }
        if (!chosen) throw UsageError("query `" + query_id + "` is not in " + queries_path);
        QueryTrace query_trace;
        pipeline.retrieve(*chosen, &query_trace);
        print_trace(std::cout, chosen->id, query_trace);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
