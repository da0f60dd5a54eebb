#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <absl/container/flat_hash_map.h>

#include "genomotif/align.hpp"
#include "genomotif/dbg.hpp"
#include "genomotif/distsim.hpp"
#include "genomotif/kmercount.hpp"
#include "genomotif/mcl.hpp"
#include "genomotif/overlap.hpp"
#include "genomotif/pipeline.hpp"
#include "genomotif/seqcore.hpp"
#include "genomotif/sketch.hpp"
#include "genomotif/spsemiring.hpp"

namespace genomotif::cli {

namespace {

namespace fs = std::filesystem;

struct Global {
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

// Writes to `path`, or to `fallback` when the path is empty or "-".
void with_output(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& fn) {
    if (path.empty() || path == "-") {
        fn(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    fn(f);
}

Alphabet parse_alphabet(const std::string& name) {
    if (name == "dna") return Alphabet::Dna;
    if (name == "protein") return Alphabet::Protein;
    throw InvalidParameter("unknown alphabet '" + name + "'");
}

AmbiguityPolicy parse_policy(const std::string& name) {
    return name == "split" ? AmbiguityPolicy::Split : AmbiguityPolicy::Reject;
}

std::vector<Sequence> sequences_of(const std::vector<Read>& reads) {
    std::vector<Sequence> out;
    out.reserve(reads.size());
    for (const auto& r : reads) out.push_back(r.seq);
    return out;
}

std::vector<std::string> ids_of(const std::vector<Read>& reads) {
    std::vector<std::string> out;
    out.reserve(reads.size());
    for (const auto& r : reads) out.push_back(r.id);
    return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// ---------------------------------------------------------------------------

struct GenerateOpts {
    SynthParams p;
    std::string placement = "random";
    std::string prefix = "synth";
};

void run_generate(const GenerateOpts& o, const Global& g, std::ostream& out) {
    SynthParams p = o.p;
    p.seed = g.seed;
    p.placement = o.placement == "tiled" ? Placement::Tiled : Placement::Random;
    const SynthData d = synth_generate(p);
    with_output(o.prefix + ".genome.fa", out, [&](std::ostream& s) { write_fasta(s, Read("genome", d.genome)); });
    with_output(o.prefix + ".reads.fq", out, [&](std::ostream& s) { write_reads(s, d.reads, ReadFormat::Fastq); });
    with_output(o.prefix + ".truth.tsv", out, [&](std::ostream& s) { write_truth(s, d.truth); });
}

struct CountOpts {
    std::string input;
    unsigned k = 21;
    CountConfig cfg;
    bool no_canonical = false;
    std::string alphabet = "dna";
    std::string ambiguity = "reject";
    std::string out;
};

void run_count(const CountOpts& o, const Global& g, std::ostream& out) {
    const auto reads = read_file(o.input, parse_alphabet(o.alphabet), parse_policy(o.ambiguity));
    CountConfig cfg = o.cfg;
    cfg.canonical = !o.no_canonical;
    cfg.hash_seed = g.seed;
    const auto table = count_kmers(reads, o.k, cfg);
    with_output(o.out, out, [&](std::ostream& s) { write_table_tsv(s, table); });
}

struct HistOpts {
    std::string input;
    bool no_canonical = false;
    std::string alphabet = "dna";
    std::string out;
};

void run_hist(const HistOpts& o, std::ostream& out) {
    std::ifstream in(o.input);
    if (!in) throw MissingArtifact("cannot open '" + o.input + "'");
    const auto table = read_table_tsv(in, !o.no_canonical, parse_alphabet(o.alphabet));
    with_output(o.out, out, [&](std::ostream& s) { write_histogram_tsv(s, kmer_histogram(table)); });
}

struct ContigOpts {
    std::string input;
    std::vector<unsigned> k{21};
    GraphParams graph;
    std::string order = "count";
    std::string out;
};

void run_contigs(const ContigOpts& o, const Global& g, std::ostream& out) {
    const auto reads = read_file(o.input);
    CountConfig cfg;
    cfg.min_count = o.graph.min_count;
    cfg.hash_seed = g.seed;
    std::vector<Contig> contigs;
    if (o.k.size() == 1) {
        const auto table = count_kmers(reads, o.k.front(), cfg);
        contigs = generate_contigs(build_dbg(table, o.graph),
                                   o.order == "lex" ? SeedOrder::Deterministic : SeedOrder::DescendingCount);
    } else {
        contigs = assemble_multi_k(reads, o.k, cfg, o.graph);
    }
    with_output(o.out, out, [&](std::ostream& s) { write_contigs_fasta(s, contigs); });
}

struct OverlapOpts {
    std::string input;
    std::string target;
    unsigned k = 17;
    std::size_t max_occ = kDefaultMaxOcc;
    std::string method = "spgemm";
    bool no_canonical = false;
    std::string out;
};

void run_overlap(const OverlapOpts& o, const Global& g, std::ostream& out) {
    const auto reads = read_file(o.input);
    const auto seqs = sequences_of(reads);
    const auto ids = ids_of(reads);
    std::vector<CandidatePair> pairs;
    std::vector<std::string> tids = ids;
    if (o.target.empty()) {
        const auto index = build_kmer_seq_matrix(seqs, o.k, o.max_occ, !o.no_canonical);
        pairs = o.method == "hashjoin" ? candidates_hashjoin(seqs, index, true) : candidates_spgemm(index, g.threads);
    } else {
        const auto treads = read_file(o.target);
        const auto tseqs = sequences_of(treads);
        tids = ids_of(treads);
        const auto tindex = build_kmer_seq_matrix(tseqs, o.k, o.max_occ, !o.no_canonical);
        if (o.method == "hashjoin") {
            pairs = candidates_hashjoin(seqs, tindex);
        } else {
            const auto sindex = build_kmer_seq_matrix(seqs, o.k, o.max_occ, !o.no_canonical);
            pairs = candidates_spgemm(sindex, tindex, g.threads);
        }
    }
    with_output(o.out, out, [&](std::ostream& s) { write_overlap_tsv(s, pairs, ids, tids); });
}

struct AlignOpts {
    std::string query;
    std::string target;
    std::string mode = "xdrop";
    std::string pairs;
    unsigned k = 17;
    std::size_t max_occ = kDefaultMaxOcc;
    int x_drop = 20;
    long long min_score = std::numeric_limits<long long>::min();
    ScoringScheme scoring;
    std::string out;
};

AlignMode parse_align_mode(const std::string& m) {
    if (m == "nw") return AlignMode::NW;
    if (m == "sw") return AlignMode::SW;
    if (m == "xdrop") return AlignMode::XDrop;
    throw InvalidParameter("unknown alignment mode '" + m + "'");
}

// Seed orientation is not stored in the overlap table; recover it from the sequences.
Strand seed_strand(const Sequence& a, const Sequence& b, std::size_t pa, std::size_t pb, unsigned k) {
    if (pa + k > a.size() || pb + k > b.size()) throw SeedMismatch("seed lies outside the sequences");
    const Sequence sa = a.subsequence(pa, k), sb = b.subsequence(pb, k);
    if (sa == sb) return Strand::Forward;
    if (sa == reverse_complement(sb)) return Strand::Reverse;
    throw SeedMismatch("seed substrings differ on both strands");
}

void run_align(const AlignOpts& o, const Global& g, std::ostream& out) {
    const AlignMode mode = parse_align_mode(o.mode);
    o.scoring.validate();
    const auto qreads = read_file(o.query);
    const bool self = o.target.empty();
    const auto treads = self ? qreads : read_file(o.target);
    const auto qs = sequences_of(qreads);
    const auto ts = sequences_of(treads);

    struct Job {
        std::size_t i, j;
    };
    std::vector<Job> jobs;
    std::vector<AlignPair> pairs;
    auto add = [&](std::size_t i, std::size_t j, std::optional<SeedPair> seed) {
        jobs.push_back({i, j});
        pairs.push_back(AlignPair{std::cref(qs[i]), std::cref(ts[j]), seed});
    };

    if (!o.pairs.empty()) {
        std::ifstream in(o.pairs);
        if (!in) throw MissingArtifact("cannot open '" + o.pairs + "'");
        absl::flat_hash_map<std::string, std::size_t> qi, ti;
        for (std::size_t i = 0; i < qreads.size(); ++i) qi.emplace(qreads[i].id, i);
        for (std::size_t j = 0; j < treads.size(); ++j) ti.emplace(treads[j].id, j);
        for (const auto& r : read_overlap_tsv(in)) {
            auto a = qi.find(r.id_a);
            auto b = ti.find(r.id_b);
            if (a == qi.end() || b == ti.end()) throw ParseError(0, "unknown sequence id in pair table: " + r.id_a);
            std::optional<SeedPair> seed;
            if (mode == AlignMode::XDrop) {
                seed = SeedPair{a->second, r.pos_a, b->second, r.pos_b, o.k,
                                seed_strand(qs[a->second], ts[b->second], r.pos_a, r.pos_b, o.k)};
            }
            add(a->second, b->second, seed);
        }
    } else if (mode == AlignMode::XDrop) {
        std::vector<CandidatePair> cands;
        if (self) {
            cands = candidates_spgemm(build_kmer_seq_matrix(qs, o.k, o.max_occ), g.threads);
        } else {
            cands = candidates_spgemm(build_kmer_seq_matrix(qs, o.k, o.max_occ),
                                      build_kmer_seq_matrix(ts, o.k, o.max_occ), g.threads);
        }
        for (const auto& c : cands) add(c.i, c.j, c.seed);
    } else {
        for (std::size_t i = 0; i < qs.size(); ++i) {
            for (std::size_t j = self ? i + 1 : 0; j < ts.size(); ++j) add(i, j, std::nullopt);
        }
    }

    const auto results = batch_align(pairs, o.scoring, mode, o.x_drop, g.threads);
    std::size_t failures = 0;
    with_output(o.out, out, [&](std::ostream& s) {
        for (std::size_t n = 0; n < results.size(); ++n) {
            if (!results[n].ok()) {
                ++failures;
                continue;
            }
            if (results[n].result.score < o.min_score) continue;
            const auto& j = jobs[n];
            write_alignment_tsv(s, AlignmentRecord{qreads[j.i].id, qs[j.i].size(), treads[j.j].id, ts[j.j].size(),
                                                   results[n].result, mode});
        }
    });
    if (failures > 0) throw Error(std::to_string(failures) + " alignment(s) failed");
}

struct ClusterOpts {
    std::string input;
    MclParams mcl;
    std::string out;
};

void run_cluster(const ClusterOpts& o, const Global& g, std::ostream& out) {
    std::ifstream in(o.input);
    if (!in) throw MissingArtifact("cannot open '" + o.input + "'");
    MclParams p = o.mcl;
    p.threads = g.threads;
    std::vector<std::string> ids;
    SparseMatrix<double> graph;
    const int first = in.peek();
    if (ends_with(o.input, ".mtx") || first == '%') {
        graph = read_matrix_market(in).matrix;
        for (std::size_t v = 0; v < graph.rows(); ++v) ids.push_back(std::to_string(v + 1));
    } else {
        std::vector<WeightedEdge> edges;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ss(line);
            std::vector<std::string> f;
            for (std::string tok; ss >> tok;) f.push_back(tok);
            try {
                if (f.size() == 5) {
                    edges.push_back({f[0], f[1], std::stod(f[2])});
                } else if (f.size() == 11) {
                    edges.push_back({f[0], f[5], std::max(0.0, std::stod(f[9]))});
                } else {
                    throw ParseError(line_no, "expected an overlap (5 column) or alignment (11 column) row");
                }
            } catch (const std::invalid_argument&) {
                throw ParseError(line_no, "non-numeric weight");
            }
        }
        graph = graph_from_edges(edges, ids);
    }
    const Clustering c = mcl_cluster(graph, p);
    with_output(o.out, out, [&](std::ostream& s) { write_clusters_tsv(s, c, ids); });
}

struct SketchOpts {
    std::vector<std::string> inputs;
    std::string type = "minhash";
    unsigned k = 21;
    std::size_t size = 1000;
    unsigned precision = 14;
    std::string out;
};

std::string stem(const std::string& path) { return fs::path(path).filename().string(); }

void run_sketch(const SketchOpts& o, const Global& g, std::ostream& out) {
    with_output(o.out, out, [&](std::ostream& s) {
        for (const auto& path : o.inputs) {
            const auto seqs = sequences_of(read_file(path));
            if (o.type == "hll") {
                s << nlohmann::json::parse(to_json(hll_build(seqs, o.k, o.precision, g.seed), stem(path))).dump()
                  << '\n';
            } else if (o.type == "minhash") {
                s << nlohmann::json::parse(to_json(minhash_build(seqs, o.k, o.size, g.seed), stem(path))).dump()
                  << '\n';
            } else {
                throw InvalidParameter("unknown sketch type '" + o.type + "'");
            }
        }
    });
}

struct DistOpts {
    std::vector<std::string> inputs;
    unsigned k = 21;
    std::size_t size = 1000;
    std::string out;
};

void run_dist(const DistOpts& o, const Global& g, std::ostream& out) {
    std::vector<MinHashSketch> sketches;
    std::vector<std::string> names;
    for (const auto& path : o.inputs) {
        if (ends_with(path, ".json") || ends_with(path, ".jsonl")) {
            std::ifstream in(path);
            if (!in) throw MissingArtifact("cannot open '" + path + "'");
            std::string line;
            std::size_t n = 0;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                sketches.push_back(minhash_from_json(line));
                const auto j = nlohmann::json::parse(line);
                names.push_back(j.contains("name") ? j["name"].get<std::string>()
                                                   : stem(path) + "#" + std::to_string(n));
                ++n;
            }
        } else {
            sketches.push_back(minhash_build(sequences_of(read_file(path)), o.k, o.size, g.seed));
            names.push_back(stem(path));
        }
    }
    const auto d = all_pairs_jaccard(sketches, names);
    with_output(o.out, out, [&](std::ostream& s) { write_distance_tsv(s, d); });
}

struct SimOpts {
    std::string input;
    unsigned k = 21;
    DistConfig dcfg;
    std::string mode = "async";
    std::uint32_t min_count = 2;
    std::vector<std::size_t> sweep;
    std::string out;
};

void run_simdist(const SimOpts& o, const Global& g, std::ostream& out) {
    const auto reads = read_file(o.input);
    DistConfig d = o.dcfg;
    d.mode = parse_comm_mode(o.mode);
    d.owner_seed = g.seed;
    CountConfig c;
    c.min_count = o.min_count;
    c.hash_seed = g.seed;
    if (o.sweep.empty()) {
        const auto r = run_dist_count(reads, o.k, d, c);
        with_output(o.out, out, [&](std::ostream& s) { s << metrics_json(r.metrics) << '\n'; });
        return;
    }
    with_output(o.out, out, [&](std::ostream& s) {
        s << "B\tmessages\tbytes\tremote_fraction\tphases\tpeak_buffered\timbalance\tcombiner_hits\n";
        for (const auto b : o.sweep) {
            d.buffer = b;
            const auto r = run_dist_count(reads, o.k, d, c);
            const auto& m = r.metrics;
            std::uint64_t traffic = 0;
            for (const auto x : m.received) traffic += x;
            s << b << '\t' << m.messages << '\t' << m.bytes << '\t' << m.remote_fraction() << '\t' << m.phases << '\t'
              << m.peak_buffered << '\t';
            if (traffic == 0) {
                s << "NA";
            } else {
                s << imbalance_factor(m);
            }
            s << '\t' << m.combiner_hits << '\n';
        }
    });
}

struct PipelineOpts {
    PipelineConfig cfg;
    std::string placement = "tiled";
    std::string out = "pipeline_out";
};

void run_pipeline_cmd(const PipelineOpts& o, const Global& g, std::ostream& out) {
    PipelineConfig cfg = o.cfg;
    cfg.synth.seed = g.seed;
    cfg.synth.placement = o.placement == "random" ? Placement::Random : Placement::Tiled;
    cfg.count.hash_seed = g.seed;
    cfg.count.min_count = cfg.graph.min_count;
    cfg.threads = g.threads;
    const Summary s = run_pipeline(cfg, o.out);
    out << summary_json(s);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"genomotif: k-mer counting, assembly, overlap, alignment, clustering and sketching"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value configuration file");
    Global g;
    auto* seed_opt = app.add_option("--seed", g.seed, "Seed for all randomness (default 1, or $GENOMOTIF_SEED)");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 1024u));

    GenerateOpts gen;
    auto* generate = app.add_subcommand("generate", "Synthetic genome, reads and truth table");
    generate->add_option("--genome-len", gen.p.genome_len)->check(CLI::PositiveNumber);
    generate->add_option("--read-len", gen.p.read_len)->check(CLI::PositiveNumber);
    generate->add_option("--depth", gen.p.depth)->check(CLI::NonNegativeNumber);
    generate->add_option("--error", gen.p.error_rate)->check(CLI::Range(0.0, 1.0));
    generate->add_option("--placement", gen.placement)->check(CLI::IsMember({"random", "tiled"}));
    generate->add_option("--prefix,-o", gen.prefix, "Output prefix");

    CountOpts cnt;
    auto* count = app.add_subcommand("count", "Count k-mers into a TSV table");
    count->add_option("reads", cnt.input)->required()->check(CLI::ExistingFile);
    count->add_option("--k", cnt.k);
    count->add_option("--min-count", cnt.cfg.min_count);
    count->add_option("--bloom-bits", cnt.cfg.bloom_bits);
    count->add_option("--bloom-hashes", cnt.cfg.bloom_hashes);
    count->add_option("--max-entries", cnt.cfg.max_entries);
    count->add_flag("--no-canonical", cnt.no_canonical);
    count->add_option("--alphabet", cnt.alphabet)->check(CLI::IsMember({"dna", "protein"}));
    count->add_option("--ambiguity", cnt.ambiguity)->check(CLI::IsMember({"reject", "split"}));
    count->add_option("--out", cnt.out);

    HistOpts hst;
    auto* hist = app.add_subcommand("hist", "Histogram of a count table");
    hist->add_option("table", hst.input)->required()->check(CLI::ExistingFile);
    hist->add_flag("--no-canonical", hst.no_canonical);
    hist->add_option("--alphabet", hst.alphabet)->check(CLI::IsMember({"dna", "protein"}));
    hist->add_option("--out", hst.out);

    ContigOpts ctg;
    auto* contigs = app.add_subcommand("contigs", "Assemble contigs from reads");
    contigs->add_option("reads", ctg.input)->required()->check(CLI::ExistingFile);
    contigs->add_option("--k", ctg.k, "One k, or a comma list for multi-k assembly")->delimiter(',');
    contigs->add_option("--hi", ctg.graph.hi);
    contigs->add_option("--lo", ctg.graph.lo);
    contigs->add_option("--min-count", ctg.graph.min_count);
    contigs->add_option("--seed-order", ctg.order)->check(CLI::IsMember({"count", "lex"}));
    contigs->add_option("--out", ctg.out);

    OverlapOpts ovl;
    auto* overlap = app.add_subcommand("overlap", "Candidate pairs sharing a k-mer");
    overlap->add_option("reads", ovl.input)->required()->check(CLI::ExistingFile);
    overlap->add_option("--target", ovl.target)->check(CLI::ExistingFile);
    overlap->add_option("--k", ovl.k);
    overlap->add_option("--max-occ", ovl.max_occ);
    overlap->add_option("--method", ovl.method)->check(CLI::IsMember({"spgemm", "hashjoin"}));
    overlap->add_flag("--no-canonical", ovl.no_canonical);
    overlap->add_option("--out", ovl.out);

    AlignOpts aln;
    auto* align = app.add_subcommand("align", "Pairwise alignment");
    align->add_option("query", aln.query)->required()->check(CLI::ExistingFile);
    align->add_option("target", aln.target)->check(CLI::ExistingFile);
    align->add_option("--mode", aln.mode)->check(CLI::IsMember({"nw", "sw", "xdrop"}));
    align->add_option("--pairs", aln.pairs, "Overlap TSV selecting the pairs to align")->check(CLI::ExistingFile);
    align->add_option("--k", aln.k);
    align->add_option("--max-occ", aln.max_occ);
    align->add_option("--x-drop", aln.x_drop);
    align->add_option("--min-score", aln.min_score);
    align->add_option("--match", aln.scoring.match);
    align->add_option("--mismatch", aln.scoring.mismatch);
    align->add_option("--gap", aln.scoring.gap);
    align->add_option("--out", aln.out);

    ClusterOpts cls;
    auto* cluster = app.add_subcommand("cluster", "Markov clustering of a similarity graph");
    cluster->add_option("graph", cls.input, "Matrix Market, overlap TSV or alignment TSV")
        ->required()
        ->check(CLI::ExistingFile);
    cluster->add_option("--inflation", cls.mcl.inflation);
    cluster->add_option("--expansion", cls.mcl.expansion);
    cluster->add_option("--prune", cls.mcl.prune);
    cluster->add_option("--max-iter", cls.mcl.max_iterations);
    cluster->add_option("--epsilon", cls.mcl.epsilon);
    cluster->add_option("--out", cls.out);

    SketchOpts skt;
    auto* sketch = app.add_subcommand("sketch", "MinHash or HyperLogLog sketch per input file");
    sketch->add_option("inputs", skt.inputs)->required()->check(CLI::ExistingFile);
    sketch->add_option("--type", skt.type)->check(CLI::IsMember({"minhash", "hll"}));
    sketch->add_option("--k", skt.k);
    sketch->add_option("--size", skt.size);
    sketch->add_option("--precision", skt.precision);
    sketch->add_option("--out", skt.out);

    DistOpts dst;
    auto* dist = app.add_subcommand("dist", "All-pairs MinHash Jaccard matrix");
    dist->add_option("inputs", dst.inputs, "Sequence files or MinHash JSON lines")->required()->check(CLI::ExistingFile);
    dist->add_option("--k", dst.k);
    dist->add_option("--size", dst.size);
    dist->add_option("--out", dst.out);

    SimOpts sim;
    auto* simdist = app.add_subcommand("simdist", "Simulated distributed k-mer counting");
    simdist->add_option("reads", sim.input)->required()->check(CLI::ExistingFile);
    simdist->add_option("--k", sim.k);
    simdist->add_option("--p", sim.dcfg.p)->check(CLI::PositiveNumber);
    simdist->add_option("--mode", sim.mode)->check(CLI::IsMember({"bulk", "async"}));
    simdist->add_option("--buffer", sim.dcfg.buffer)->check(CLI::PositiveNumber);
    simdist->add_option("--combiner", sim.dcfg.combiner);
    simdist->add_option("--phase-cap", sim.dcfg.phase_cap);
    simdist->add_option("--min-count", sim.min_count);
    simdist->add_option("--sweep", sim.sweep, "Comma list of buffer sizes; prints a TSV row per size")->delimiter(',');
    simdist->add_option("--out", sim.out);

    PipelineOpts pip;
    auto* pipeline = app.add_subcommand("pipeline", "generate, count, contigs, overlap, align, cluster, summary");
    pipeline->add_option("--out", pip.out, "Output directory");
    pipeline->add_option("--genome-len", pip.cfg.synth.genome_len)->check(CLI::PositiveNumber);
    pipeline->add_option("--read-len", pip.cfg.synth.read_len)->check(CLI::PositiveNumber);
    pipeline->add_option("--depth", pip.cfg.synth.depth)->check(CLI::NonNegativeNumber);
    pipeline->add_option("--error", pip.cfg.synth.error_rate)->check(CLI::Range(0.0, 1.0));
    pipeline->add_option("--placement", pip.placement)->check(CLI::IsMember({"random", "tiled"}));
    pipeline->add_option("--k", pip.cfg.k)->delimiter(',');
    pipeline->add_option("--min-count", pip.cfg.graph.min_count);
    pipeline->add_option("--hi", pip.cfg.graph.hi);
    pipeline->add_option("--lo", pip.cfg.graph.lo);
    pipeline->add_option("--overlap-k", pip.cfg.overlap_k);
    pipeline->add_option("--max-occ", pip.cfg.max_occ);
    pipeline->add_option("--min-shared", pip.cfg.min_shared);
    pipeline->add_option("--min-overlap", pip.cfg.min_overlap);
    pipeline->add_option("--x-drop", pip.cfg.x_drop);
    pipeline->add_option("--min-score", pip.cfg.min_score);
    pipeline->add_option("--inflation", pip.cfg.mcl.inflation);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (seed_opt->count() == 0) {
        if (const char* env = std::getenv("GENOMOTIF_SEED"); env != nullptr && *env != '\0') {
            try {
                g.seed = std::stoull(env);
            } catch (const std::exception&) {
                err << "error: GENOMOTIF_SEED must be an unsigned integer\n";
                return kExitUsage;
            }
        }
    }

    try {
        if (*generate) run_generate(gen, g, out);
        else if (*count) run_count(cnt, g, out);
        else if (*hist) run_hist(hst, out);
        else if (*contigs) run_contigs(ctg, g, out);
        else if (*overlap) run_overlap(ovl, g, out);
        else if (*align) run_align(aln, g, out);
        else if (*cluster) run_cluster(cls, g, out);
        else if (*sketch) run_sketch(skt, g, out);
        else if (*dist) run_dist(dst, g, out);
        else if (*simdist) run_simdist(sim, g, out);
        else if (*pipeline) run_pipeline_cmd(pip, g, out);
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidPrecision& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace genomotif::cli
