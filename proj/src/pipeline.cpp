#include "genomotif/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>
#include <json.hpp>

namespace genomotif {

namespace fs = std::filesystem;

std::size_t n50(std::span<const std::size_t> lengths) {
    std::vector<std::size_t> sorted(lengths.begin(), lengths.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::size_t total = 0;
    for (const auto l : sorted) total += l;
    if (total == 0) return 0;
    std::size_t acc = 0;
    for (const auto l : sorted) {
        acc += l;
        if (2 * acc >= total) return l;
    }
    return 0;
}

double contig_identity(const Sequence& contig, const Sequence& genome) {
    if (contig.empty() || genome.empty()) return 0.0;
    const std::string c = contig.to_string();
    const std::string g = genome.to_string();
    const Sequence rc = reverse_complement(contig);
    if (g.find(c) != std::string::npos || g.find(rc.to_string()) != std::string::npos) return 1.0;

    const ScoringScheme s;
    const AlignmentResult fwd = smith_waterman(contig, genome, s);
    const AlignmentResult rev = smith_waterman(rc, genome, s);
    const bool use_rev = rev.score > fwd.score;
    const AlignmentResult& best = use_rev ? rev : fwd;
    const Sequence window = genome.subsequence(best.tstart, best.tend - best.tstart);
    const AlignmentResult global = needleman_wunsch(use_rev ? rc : contig, window, s, true);
    return path_stats(*global.edit_path).identity();
}

std::vector<std::pair<std::size_t, std::size_t>> true_overlaps(std::span<const ReadOrigin> truth,
                                                               std::size_t min_overlap) {
    std::vector<std::size_t> order(truth.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return truth[a].offset != truth[b].offset ? truth[a].offset < truth[b].offset : a < b;
    });
    std::vector<std::pair<std::size_t, std::size_t>> out;
    // Sweep by start offset; a later read can only overlap while it starts
    // before the earlier one ends.
    for (std::size_t x = 0; x < order.size(); ++x) {
        const auto& a = truth[order[x]];
        const std::size_t a_end = a.offset + a.length;
        for (std::size_t y = x + 1; y < order.size(); ++y) {
            const auto& b = truth[order[y]];
            if (b.offset >= a_end) break;
            const std::size_t ov = std::min(a_end, b.offset + b.length) - b.offset;
            if (ov >= min_overlap && min_overlap > 0) {
                out.emplace_back(std::min(order[x], order[y]), std::max(order[x], order[y]));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Contig> assemble_multi_k(std::span<const Read> reads, std::span<const unsigned> ks,
                                     const CountConfig& count, const GraphParams& graph) {
    if (ks.empty()) throw InvalidParameter("at least one k is required");
    std::vector<unsigned> sorted(ks.begin(), ks.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<Read> input(reads.begin(), reads.end());
    std::vector<Contig> contigs;
    for (std::size_t round = 0; round < sorted.size(); ++round) {
        std::vector<Read> round_reads = input;
        for (const auto& c : contigs) round_reads.emplace_back(c.id, c.seq);
        const KmerCountTable table = count_kmers(round_reads, sorted[round], count);
        contigs = generate_contigs(build_dbg(table, graph));
    }
    return contigs;
}

std::vector<ReadOrigin> read_truth(std::istream& in) {
    std::vector<ReadOrigin> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.rfind("read_id\t", 0) == 0) continue;
        std::istringstream ss(line);
        ReadOrigin o;
        char strand = 0;
        if (!(ss >> o.read_id >> o.offset >> o.length >> strand >> o.substitutions) || (strand != '+' && strand != '-')) {
            throw ParseError(line_no, "expected read_id offset length strand substitutions");
        }
        o.strand = strand == '+' ? Strand::Forward : Strand::Reverse;
        out.push_back(std::move(o));
    }
    return out;
}

namespace {

std::ifstream open_artifact(const fs::path& dir, const char* name) {
    const fs::path p = dir / name;
    std::ifstream in(p);
    if (!in) throw MissingArtifact("missing pipeline artifact " + p.string());
    return in;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
}

}  // namespace

Summary emit_summary(const fs::path& dir, std::size_t min_overlap) {
    Summary s;
    {
        auto in = open_artifact(dir, artifact::kGenome);
        const auto genome = parse_reads(in, ReadFormat::Fasta);
        Sequence g = genome.empty() ? Sequence{} : genome.front().seq;
        s.genome_length = g.size();

        auto cin = open_artifact(dir, artifact::kContigs);
        const auto contigs = parse_reads(cin, ReadFormat::Fasta);
        std::vector<std::size_t> lengths;
        const Sequence* longest = nullptr;
        for (const auto& c : contigs) {
            lengths.push_back(c.seq.size());
            s.total_contig_bases += c.seq.size();
            if (longest == nullptr || c.seq.size() > longest->size()) longest = &c.seq;
        }
        s.contigs = contigs.size();
        s.n50 = n50(lengths);
        if (longest != nullptr) {
            s.longest_contig = longest->size();
            s.identity = contig_identity(*longest, g);
        }
    }
    {
        auto in = open_artifact(dir, artifact::kReads);
        s.reads = in.peek() == std::char_traits<char>::eof() ? 0 : parse_reads(in, detect_format(in)).size();
    }
    std::vector<ReadOrigin> truth;
    {
        auto in = open_artifact(dir, artifact::kTruth);
        truth = read_truth(in);
    }
    {
        auto in = open_artifact(dir, artifact::kOverlaps);
        const auto records = read_overlap_tsv(in);
        s.candidate_pairs = records.size();
        absl::flat_hash_map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < truth.size(); ++i) index.emplace(truth[i].read_id, i);
        absl::flat_hash_set<std::pair<std::size_t, std::size_t>> found;
        for (const auto& r : records) {
            auto a = index.find(r.id_a), b = index.find(r.id_b);
            if (a == index.end() || b == index.end()) continue;
            found.emplace(std::min(a->second, b->second), std::max(a->second, b->second));
        }
        const auto expected = true_overlaps(truth, min_overlap);
        s.true_overlaps = expected.size();
        for (const auto& pr : expected) s.recovered_overlaps += found.contains(pr) ? 1 : 0;
        s.recall = expected.empty() ? 0.0
                                    : static_cast<double>(s.recovered_overlaps) / static_cast<double>(expected.size());
    }
    {
        auto in = open_artifact(dir, artifact::kAlignments);
        s.alignments = read_alignment_tsv(in).size();
    }
    {
        auto in = open_artifact(dir, artifact::kClusters);
        absl::flat_hash_set<std::string> labels;
        std::string vertex, label;
        while (in >> vertex >> label) labels.insert(label);
        s.clusters = labels.size();
    }
    return s;
}

std::string summary_json(const Summary& s) {
    nlohmann::ordered_json j;
    j["genome_length"] = s.genome_length;
    j["reads"] = s.reads;
    j["contigs"] = s.contigs;
    j["total_contig_bases"] = s.total_contig_bases;
    j["longest_contig"] = s.longest_contig;
    j["n50"] = s.n50;
    j["identity"] = s.identity;
    j["candidate_pairs"] = s.candidate_pairs;
    j["true_overlaps"] = s.true_overlaps;
    j["recovered_overlaps"] = s.recovered_overlaps;
    j["recall"] = s.recall;
    j["alignments"] = s.alignments;
    j["clusters"] = s.clusters;
    return j.dump(2) + "\n";
}

SparseMatrix<double> graph_from_edges(std::span<const WeightedEdge> edges, std::vector<std::string>& ids) {
    absl::flat_hash_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
    auto id_of = [&](const std::string& name) {
        auto [it, inserted] = index.try_emplace(name, ids.size());
        if (inserted) ids.push_back(name);
        return it->second;
    };
    absl::flat_hash_map<std::pair<std::size_t, std::size_t>, double> weights;
    for (const auto& e : edges) {
        if (e.weight < 0.0) throw NegativeWeight("edge " + e.a + " - " + e.b + " has negative weight");
        const std::size_t a = id_of(e.a), b = id_of(e.b);
        if (a == b || e.weight == 0.0) continue;
        for (const auto& key : {std::pair{a, b}, std::pair{b, a}}) {
            auto [it, inserted] = weights.try_emplace(key, e.weight);
            if (!inserted) it->second = std::max(it->second, e.weight);
        }
    }
    std::vector<Triple<double>> triples;
    triples.reserve(weights.size());
    for (const auto& [key, w] : weights) triples.push_back({key.first, key.second, w});
    return sparse_from_triples<ArithmeticSemiring>(ids.size(), ids.size(), triples);
}

Summary run_pipeline(const PipelineConfig& cfg, const fs::path& dir, std::vector<StageTiming>* timings) {
    fs::create_directories(dir);
    std::vector<StageTiming> local;
    auto& times = timings != nullptr ? *timings : local;
    auto clock_start = std::chrono::steady_clock::now();
    auto lap = [&](const char* stage) {
        const auto now = std::chrono::steady_clock::now();
        times.push_back({stage, std::chrono::duration<double>(now - clock_start).count()});
        clock_start = now;
    };

    const SynthData data = synth_generate(cfg.synth);
    {
        std::ostringstream g, r, t;
        write_fasta(g, Read("genome", data.genome));
        write_reads(r, data.reads, ReadFormat::Fastq);
        write_truth(t, data.truth);
        write_file(dir / artifact::kGenome, g.str());
        write_file(dir / artifact::kReads, r.str());
        write_file(dir / artifact::kTruth, t.str());
    }
    lap("generate");

    {
        const unsigned k0 = *std::min_element(cfg.k.begin(), cfg.k.end());
        const KmerCountTable table = count_kmers(data.reads, k0, cfg.count);
        std::ostringstream c, h;
        write_table_tsv(c, table);
        write_histogram_tsv(h, kmer_histogram(table));
        write_file(dir / artifact::kCounts, c.str());
        write_file(dir / artifact::kHistogram, h.str());
    }
    lap("count");

    {
        const auto contigs = data.reads.empty() ? std::vector<Contig>{}
                                                : assemble_multi_k(data.reads, cfg.k, cfg.count, cfg.graph);
        std::ostringstream out;
        write_contigs_fasta(out, contigs);
        write_file(dir / artifact::kContigs, out.str());
    }
    lap("contigs");

    std::vector<Sequence> seqs;
    std::vector<std::string> ids;
    for (const auto& r : data.reads) {
        seqs.push_back(r.seq);
        ids.push_back(r.id);
    }
    const KmerSeqMatrix index = build_kmer_seq_matrix(seqs, cfg.overlap_k, cfg.max_occ);
    const auto pairs = candidates_spgemm(index, cfg.threads);
    {
        std::ostringstream out;
        write_overlap_tsv(out, pairs, ids, ids);
        write_file(dir / artifact::kOverlaps, out.str());
    }
    lap("overlap");

    const auto extended =
        seed_extend_all(pairs, seqs, seqs, cfg.scoring, cfg.x_drop, cfg.min_score, cfg.min_shared, cfg.threads);
    std::vector<WeightedEdge> edges;
    {
        std::ostringstream out;
        for (const auto& e : extended) {
            const auto& p = pairs[e.pair_index];
            AlignmentRecord rec{ids[p.i], seqs[p.i].size(), ids[p.j], seqs[p.j].size(), e.outcome.result,
                                AlignMode::XDrop};
            write_alignment_tsv(out, rec);
            edges.push_back({ids[p.i], ids[p.j], static_cast<double>(e.outcome.result.score)});
        }
        write_file(dir / artifact::kAlignments, out.str());
    }
    lap("align");

    {
        std::vector<std::string> vertex_ids = ids;
        const auto graph = graph_from_edges(edges, vertex_ids);
        MclParams mp = cfg.mcl;
        mp.threads = cfg.threads;
        const Clustering c = mcl_cluster(graph, mp);
        std::ostringstream out;
        write_clusters_tsv(out, c, vertex_ids);
        write_file(dir / artifact::kClusters, out.str());
    }
    lap("cluster");

    const Summary s = emit_summary(dir, cfg.min_overlap);
    write_file(dir / artifact::kSummary, summary_json(s));
    lap("summary");

    nlohmann::ordered_json tj;
    double total = 0.0;
    for (const auto& t : times) {
        tj[t.stage] = t.seconds;
        total += t.seconds;
    }
    tj["total"] = total;
    write_file(dir / artifact::kTiming, tj.dump(2) + "\n");
    return s;
}

}  // namespace genomotif
