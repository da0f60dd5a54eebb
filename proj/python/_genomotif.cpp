#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "genomotif/distsim.hpp"
#include "genomotif/pipeline.hpp"
#include "genomotif/sketch.hpp"

namespace py = pybind11;
using namespace genomotif;

namespace {

std::vector<Read> to_reads(const std::vector<std::string>& texts) {
    std::vector<Read> reads;
    reads.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) reads.emplace_back("r" + std::to_string(i), encode_sequence(texts[i]));
    return reads;
}

std::vector<Sequence> to_seqs(const std::vector<std::string>& texts) {
    std::vector<Sequence> seqs;
    seqs.reserve(texts.size());
    for (const auto& t : texts) seqs.push_back(encode_sequence(t));
    return seqs;
}

py::dict alignment_dict(const AlignmentResult& r) {
    py::dict d;
    d["score"] = r.score;
    d["qstart"] = r.qstart;
    d["qend"] = r.qend;
    d["tstart"] = r.tstart;
    d["tend"] = r.tend;
    d["strand"] = std::string(1, strand_char(r.strand));
    d["edit_path"] = r.edit_path;
    return d;
}

}  // namespace

PYBIND11_MODULE(_genomotif, m) {
    m.doc() = "k-mer counting, assembly, alignment, sparse semirings, clustering and sketches";

    py::register_exception<Error>(m, "GenomotifError", PyExc_ValueError);

    m.def("reverse_complement", [](const std::string& s) { return reverse_complement(encode_sequence(s)).to_string(); });
    m.def("kmerize", [](const std::string& s, unsigned k) {
        std::vector<std::string> out;
        for (const auto& km : kmerize(encode_sequence(s), k)) out.push_back(kmer_to_string(km));
        return out;
    }, py::arg("seq"), py::arg("k"));

    m.def("count_kmers", [](const std::vector<std::string>& reads, unsigned k, std::uint32_t min_count, bool canonical) {
        CountConfig cfg;
        cfg.min_count = min_count;
        cfg.canonical = canonical;
        const auto table = count_kmers(to_reads(reads), k, cfg);
        py::dict out;
        for (const auto& [packed, e] : table.sorted()) {
            out[py::str(kmer_to_string(Kmer{packed, static_cast<std::uint8_t>(k), Alphabet::Dna}))] = e.count;
        }
        return out;
    }, py::arg("reads"), py::arg("k"), py::arg("min_count") = 2, py::arg("canonical") = true);

    m.def("assemble", [](const std::vector<std::string>& reads, unsigned k) {
        std::vector<std::string> out;
        for (const auto& c : generate_contigs(build_dbg(count_kmers(to_reads(reads), k)))) out.push_back(c.seq.to_string());
        return out;
    }, py::arg("reads"), py::arg("k") = 21);

    m.def("needleman_wunsch", [](const std::string& a, const std::string& b, int match, int mismatch, int gap) {
        return alignment_dict(needleman_wunsch(encode_sequence(a), encode_sequence(b), {match, mismatch, gap}, true));
    }, py::arg("a"), py::arg("b"), py::arg("match") = 1, py::arg("mismatch") = -1, py::arg("gap") = -1);
    m.def("smith_waterman", [](const std::string& a, const std::string& b, int match, int mismatch, int gap) {
        return alignment_dict(smith_waterman(encode_sequence(a), encode_sequence(b), {match, mismatch, gap}, true));
    }, py::arg("a"), py::arg("b"), py::arg("match") = 1, py::arg("mismatch") = -1, py::arg("gap") = -1);

    m.def("overlap_candidates", [](const std::vector<std::string>& seqs, unsigned k, std::size_t max_occ) {
        const auto s = to_seqs(seqs);
        std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
        for (const auto& p : candidates_spgemm(build_kmer_seq_matrix(s, k, max_occ))) out.emplace_back(p.i, p.j, p.shared);
        return out;
    }, py::arg("seqs"), py::arg("k") = 17, py::arg("max_occ") = kDefaultMaxOcc);

    m.def("mcl", [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges, double inflation) {
        std::vector<Triple<double>> t;
        for (const auto& [a, b, w] : edges) {
            t.push_back({a, b, w});
            t.push_back({b, a, w});
        }
        MclParams p;
        p.inflation = inflation;
        return mcl_cluster(sparse_from_triples<ArithmeticSemiring>(n, n, t), p).labels;
    }, py::arg("n"), py::arg("edges"), py::arg("inflation") = 2.0);

    m.def("minhash_jaccard", [](const std::string& a, const std::string& b, unsigned k, std::size_t s, std::uint64_t seed) {
        return minhash_jaccard(minhash_build(encode_sequence(a), k, s, seed), minhash_build(encode_sequence(b), k, s, seed));
    }, py::arg("a"), py::arg("b"), py::arg("k") = 21, py::arg("s") = 1000, py::arg("seed") = 1);
    m.def("hll_estimate", [](const std::vector<std::string>& seqs, unsigned k, unsigned b, std::uint64_t seed) {
        const auto s = to_seqs(seqs);
        return hll_estimate(hll_build(s, k, b, seed));
    }, py::arg("seqs"), py::arg("k") = 21, py::arg("b") = 14, py::arg("seed") = 1);

    m.def("simulate_dist_count", [](const std::vector<std::string>& reads, unsigned k, std::size_t p,
                                    const std::string& mode, std::size_t buffer, std::size_t combiner) {
        DistConfig d;
        d.p = p;
        d.mode = parse_comm_mode(mode);
        d.buffer = buffer;
        d.combiner = combiner;
        return metrics_json(run_dist_count(to_reads(reads), k, d).metrics);
    }, py::arg("reads"), py::arg("k") = 21, py::arg("p") = 4, py::arg("mode") = "async", py::arg("buffer") = 1024,
       py::arg("combiner") = 0);

    m.def("run_pipeline", [](const std::filesystem::path& out, std::size_t genome_len, double depth, double error,
                             std::uint64_t seed) {
        PipelineConfig cfg;
        cfg.synth.genome_len = genome_len;
        cfg.synth.depth = depth;
        cfg.synth.error_rate = error;
        cfg.synth.seed = seed;
        return summary_json(run_pipeline(cfg, out));
    }, py::arg("out"), py::arg("genome_len") = 10000, py::arg("depth") = 10.0, py::arg("error") = 0.0,
       py::arg("seed") = 1);
}
