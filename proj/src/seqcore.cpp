#include "genomotif/seqcore.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "genomotif/hash.hpp"

namespace genomotif {

namespace {

constexpr const AlphabetInfo& kDna = kDnaAlphabet;
constexpr const AlphabetInfo& kProtein = kProteinAlphabet;

struct CodeTable {
    std::array<std::int8_t, 256> dna{};
    std::array<std::int8_t, 256> protein{};

    CodeTable() {
        dna.fill(-1);
        protein.fill(-1);
        for (std::size_t i = 0; i < kDna.symbols.size(); ++i) {
            const auto c = static_cast<unsigned char>(kDna.symbols[i]);
            dna[c] = dna[std::tolower(c)] = static_cast<std::int8_t>(i);
        }
        for (std::size_t i = 0; i < kProtein.symbols.size(); ++i) {
            const auto c = static_cast<unsigned char>(kProtein.symbols[i]);
            protein[c] = protein[std::tolower(c)] = static_cast<std::int8_t>(i);
        }
    }
};

const CodeTable& code_table() {
    static const CodeTable table;
    return table;
}

void require_dna(Alphabet a, const char* what) {
    if (a != Alphabet::Dna) throw UnsupportedAlphabet(std::string(what) + " requires the DNA alphabet");
}

}  // namespace

int encode_symbol(Alphabet a, char c) noexcept {
    const auto& t = code_table();
    const auto idx = static_cast<unsigned char>(c);
    return a == Alphabet::Dna ? t.dna[idx] : t.protein[idx];
}

char decode_symbol(Alphabet a, std::uint8_t code) noexcept {
    return alphabet_info(a).symbols[code];
}

// ---------------------------------------------------------------------------

Sequence Sequence::from_codes(Alphabet alphabet, std::span<const std::uint8_t> codes) {
    Sequence s(alphabet);
    const unsigned bits = alphabet_info(alphabet).bits_per_symbol;
    const unsigned per_word = 64 / bits;
    s.words_.assign((codes.size() + per_word - 1) / per_word, 0);
    for (std::size_t i = 0; i < codes.size(); ++i) {
        s.words_[i / per_word] |= std::uint64_t{codes[i]} << ((i % per_word) * bits);
    }
    s.length_ = codes.size();
    return s;
}

void Sequence::push_back(std::uint8_t code) {
    const unsigned bits = alphabet_info(alphabet_).bits_per_symbol;
    const unsigned per_word = 64 / bits;
    if (length_ % per_word == 0) words_.push_back(0);
    words_.back() |= std::uint64_t{code} << ((length_ % per_word) * bits);
    ++length_;
}

std::vector<std::uint8_t> Sequence::codes() const {
    std::vector<std::uint8_t> out(length_);
    for (std::size_t i = 0; i < length_; ++i) out[i] = at(i);
    return out;
}

std::string Sequence::to_string() const {
    std::string out(length_, '\0');
    for (std::size_t i = 0; i < length_; ++i) out[i] = decode_symbol(alphabet_, at(i));
    return out;
}

Sequence Sequence::subsequence(std::size_t pos, std::size_t len) const {
    if (pos > length_) throw IndexOutOfRange("subsequence start past end");
    len = std::min(len, length_ - pos);
    Sequence s(alphabet_);
    for (std::size_t i = 0; i < len; ++i) s.push_back(at(pos + i));
    return s;
}

Read::Read(std::string id_, Sequence seq_, std::optional<std::string> quality_)
    : id(std::move(id_)), seq(std::move(seq_)), quality(std::move(quality_)) {
    if (quality && quality->size() != seq.size()) {
        throw InvalidParameter("quality length " + std::to_string(quality->size()) +
                               " differs from sequence length " + std::to_string(seq.size()) +
                               " in record '" + id + "'");
    }
}

Sequence encode_sequence(std::string_view text, Alphabet alphabet) {
    std::vector<std::uint8_t> codes(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const int c = encode_symbol(alphabet, text[i]);
        if (c < 0) throw InvalidSymbol(i, text[i]);
        codes[i] = static_cast<std::uint8_t>(c);
    }
    return Sequence::from_codes(alphabet, codes);
}

std::string decode_sequence(const Sequence& s) { return s.to_string(); }

Sequence reverse_complement(const Sequence& s) {
    require_dna(s.alphabet(), "reverse_complement");
    std::vector<std::uint8_t> codes(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) codes[s.size() - 1 - i] = complement_code(s.at(i));
    return Sequence::from_codes(Alphabet::Dna, codes);
}

// ---------------------------------------------------------------------------

void check_k(Alphabet alphabet, unsigned k) {
    const unsigned max_k = alphabet_info(alphabet).max_k;
    if (k < 1 || k > max_k) {
        throw InvalidParameter("k must be in [1, " + std::to_string(max_k) + "] for " +
                               std::string(alphabet_info(alphabet).name) + ", got " +
                               std::to_string(k));
    }
}

Kmer make_kmer(std::string_view text, Alphabet alphabet) {
    check_k(alphabet, static_cast<unsigned>(text.size()));
    const unsigned bits = alphabet_info(alphabet).bits_per_symbol;
    Kmer m{0, static_cast<std::uint8_t>(text.size()), alphabet};
    for (std::size_t i = 0; i < text.size(); ++i) {
        const int c = encode_symbol(alphabet, text[i]);
        if (c < 0) throw InvalidSymbol(i, text[i]);
        m.packed = (m.packed << bits) | static_cast<std::uint64_t>(c);
    }
    return m;
}

std::uint8_t kmer_symbol(const Kmer& m, unsigned i) noexcept {
    const unsigned bits = alphabet_info(m.alphabet).bits_per_symbol;
    return static_cast<std::uint8_t>((m.packed >> ((m.k - 1 - i) * bits)) & ((1u << bits) - 1));
}

std::string kmer_to_string(const Kmer& m) {
    std::string out(m.k, '\0');
    for (unsigned i = 0; i < m.k; ++i) out[i] = decode_symbol(m.alphabet, kmer_symbol(m, i));
    return out;
}

std::uint64_t reverse_complement_packed(std::uint64_t x, unsigned k) noexcept {
    // Complement all 2-bit codes, then reverse the order of the 2-bit groups.
    x = ~x;
    x = ((x >> 2) & 0x3333333333333333ULL) | ((x & 0x3333333333333333ULL) << 2);
    x = ((x >> 4) & 0x0f0f0f0f0f0f0f0fULL) | ((x & 0x0f0f0f0f0f0f0f0fULL) << 4);
    x = ((x >> 8) & 0x00ff00ff00ff00ffULL) | ((x & 0x00ff00ff00ff00ffULL) << 8);
    x = ((x >> 16) & 0x0000ffff0000ffffULL) | ((x & 0x0000ffff0000ffffULL) << 16);
    x = (x >> 32) | (x << 32);
    return x >> (64 - 2 * k);
}

Kmer reverse_complement(const Kmer& m) {
    require_dna(m.alphabet, "reverse_complement");
    return Kmer{reverse_complement_packed(m.packed, m.k), m.k, m.alphabet};
}

Kmer canonical(const Kmer& m) {
    require_dna(m.alphabet, "canonical");
    return Kmer{canonical_packed(m.packed, m.k), m.k, m.alphabet};
}

std::vector<Kmer> kmerize(const Sequence& s, unsigned k) {
    check_k(s.alphabet(), k);
    std::vector<Kmer> out;
    if (s.size() >= k) out.reserve(s.size() - k + 1);
    for_each_kmer(s, k, [&](std::size_t, std::uint64_t packed) {
        out.push_back(Kmer{packed, static_cast<std::uint8_t>(k), s.alphabet()});
    });
    return out;
}

// ---------------------------------------------------------------------------

ReadParser::ReadParser(std::istream& in, ReadFormat format, Alphabet alphabet, AmbiguityPolicy policy)
    : in_(in), format_(format), alphabet_(alphabet), policy_(policy) {}

bool ReadParser::read_line(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

void ReadParser::emit(std::string id, const std::string& text, std::optional<std::string> quality) {
    if (policy_ == AmbiguityPolicy::Reject) {
        try {
            ready_.emplace_back(std::move(id), encode_sequence(text, alphabet_), std::move(quality));
        } catch (const InvalidSymbol& e) {
            throw InvalidSymbol(e.position(), e.symbol(), id);
        }
        return;
    }
    // Split at every out-of-alphabet symbol; fragments are numbered in order.
    std::size_t part = 0;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        if (end > start) {
            std::optional<std::string> q;
            if (quality) q = quality->substr(start, end - start);
            ready_.emplace_back(id + "_part" + std::to_string(part++),
                                encode_sequence(std::string_view(text).substr(start, end - start), alphabet_),
                                std::move(q));
        }
    };
    bool split = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (encode_symbol(alphabet_, text[i]) < 0) {
            split = true;
            flush(i);
            start = i + 1;
        }
    }
    if (!split) {
        ready_.emplace_back(std::move(id), encode_sequence(text, alphabet_), std::move(quality));
        return;
    }
    flush(text.size());
}

std::optional<Read> ReadParser::next() {
    while (ready_.empty()) {
        const bool more = format_ == ReadFormat::Fasta ? next_fasta().has_value() : next_fastq().has_value();
        if (!more) break;
    }
    if (ready_.empty()) return std::nullopt;
    Read r = std::move(ready_.front());
    ready_.pop_front();
    return r;
}

// The two record readers return a non-empty optional when a record was
// consumed (it may have produced zero reads under the split policy).
std::optional<Read> ReadParser::next_fasta() {
    std::string line;
    std::string header;
    if (pending_header_) {
        header = std::move(*pending_header_);
        pending_header_.reset();
    } else {
        for (;;) {
            if (!read_line(line)) return std::nullopt;
            if (line.empty()) continue;
            if (line[0] != '>') throw ParseError(line_no_, "expected '>' header");
            header = line.substr(1);
            break;
        }
    }
    std::string text;
    while (read_line(line)) {
        if (!line.empty() && line[0] == '>') {
            pending_header_ = line.substr(1);
            break;
        }
        text += line;
    }
    emit(std::move(header), text, std::nullopt);
    return Read{};
}

std::optional<Read> ReadParser::next_fastq() {
    std::string header;
    for (;;) {
        if (!read_line(header)) return std::nullopt;
        if (!header.empty()) break;
    }
    if (header[0] != '@') throw ParseError(line_no_, "expected '@' header");
    std::string text, plus, quality;
    if (!read_line(text)) throw ParseError(line_no_, "truncated FASTQ record (missing sequence)");
    if (!read_line(plus)) throw ParseError(line_no_, "truncated FASTQ record (missing '+')");
    if (plus.empty() || plus[0] != '+') throw ParseError(line_no_, "expected '+' separator");
    if (!read_line(quality)) throw ParseError(line_no_, "truncated FASTQ record (missing quality)");
    if (quality.size() != text.size()) throw ParseError(line_no_, "quality length differs from sequence length");
    emit(header.substr(1), text, std::move(quality));
    return Read{};
}

std::vector<Read> parse_reads(std::istream& in, ReadFormat format, Alphabet alphabet, AmbiguityPolicy policy) {
    ReadParser parser(in, format, alphabet, policy);
    std::vector<Read> out;
    while (auto r = parser.next()) out.push_back(std::move(*r));
    return out;
}

ReadFormat detect_format(std::istream& in) {
    for (;;) {
        const int c = in.peek();
        if (c == std::char_traits<char>::eof()) return ReadFormat::Fasta;
        if (c == '>') return ReadFormat::Fasta;
        if (c == '@') return ReadFormat::Fastq;
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        throw ParseError(1, "input is neither FASTA nor FASTQ");
    }
}

std::vector<Read> read_file(const std::string& path, Alphabet alphabet, AmbiguityPolicy policy) {
    std::ifstream in(path);
    if (!in) throw MissingArtifact("cannot open '" + path + "'");
    const ReadFormat format = detect_format(in);
    return parse_reads(in, format, alphabet, policy);
}

void write_fasta(std::ostream& out, const Read& r) {
    out << '>' << r.id << '\n' << r.seq.to_string() << '\n';
}

void write_fastq(std::ostream& out, const Read& r) {
    out << '@' << r.id << '\n' << r.seq.to_string() << "\n+\n";
    if (r.quality) {
        out << *r.quality << '\n';
    } else {
        out << std::string(r.seq.size(), 'I') << '\n';
    }
}

void write_reads(std::ostream& out, std::span<const Read> reads, ReadFormat format) {
    for (const auto& r : reads) {
        if (format == ReadFormat::Fasta) {
            write_fasta(out, r);
        } else {
            write_fastq(out, r);
        }
    }
}

// ---------------------------------------------------------------------------

Sequence random_sequence(std::size_t length, std::uint64_t seed, Alphabet alphabet) {
    SplitMix64 rng(seed);
    const unsigned sigma = alphabet_size(alphabet);
    std::vector<std::uint8_t> codes(length);
    for (auto& c : codes) c = static_cast<std::uint8_t>(rng.below(sigma));
    return Sequence::from_codes(alphabet, codes);
}

SynthData synth_generate(const SynthParams& p) {
    if (p.genome_len == 0) throw InvalidParameter("genome_len must be positive");
    if (p.read_len == 0 || p.read_len > p.genome_len) throw InvalidParameter("read_len must be in [1, genome_len]");
    if (!(p.depth >= 0.0) || !std::isfinite(p.depth)) throw InvalidParameter("depth must be finite and >= 0");
    if (!(p.error_rate >= 0.0 && p.error_rate < 1.0)) throw InvalidParameter("error_rate must be in [0, 1)");

    SplitMix64 rng(p.seed);
    SynthData data;
    std::vector<std::uint8_t> genome(p.genome_len);
    for (auto& c : genome) c = static_cast<std::uint8_t>(rng.below(4));
    data.genome = Sequence::from_codes(Alphabet::Dna, genome);

    auto make_read = [&](std::size_t offset, std::size_t len) {
        ReadOrigin origin;
        origin.read_id = "read_" + std::to_string(data.reads.size());
        origin.offset = offset;
        origin.length = len;
        origin.strand = rng.coin() ? Strand::Reverse : Strand::Forward;
        std::vector<std::uint8_t> codes(genome.begin() + static_cast<std::ptrdiff_t>(offset),
                                        genome.begin() + static_cast<std::ptrdiff_t>(offset + len));
        if (origin.strand == Strand::Reverse) {
            std::reverse(codes.begin(), codes.end());
            for (auto& c : codes) c = complement_code(c);
        }
        for (auto& c : codes) {
            if (rng.uniform() < p.error_rate) {
                // Substitute with one of the three other bases.
                c = static_cast<std::uint8_t>((c + 1 + rng.below(3)) % 4);
                ++origin.substitutions;
            }
        }
        data.reads.emplace_back(origin.read_id, Sequence::from_codes(Alphabet::Dna, codes),
                                std::string(len, 'I'));
        data.truth.push_back(std::move(origin));
    };

    if (p.depth == 0.0) return data;
    if (p.placement == Placement::Random) {
        const auto n = static_cast<std::size_t>(std::llround(p.depth * static_cast<double>(p.genome_len) /
                                                             static_cast<double>(p.read_len)));
        for (std::size_t i = 0; i < n; ++i) {
            make_read(rng.below(p.genome_len - p.read_len + 1), p.read_len);
        }
    } else {
        const auto stride = std::max<std::ptrdiff_t>(
            1, std::llround(static_cast<double>(p.read_len) / p.depth));
        const auto len = static_cast<std::ptrdiff_t>(p.read_len);
        const auto glen = static_cast<std::ptrdiff_t>(p.genome_len);
        for (std::ptrdiff_t start = std::min<std::ptrdiff_t>(0, stride - len); start < glen; start += stride) {
            const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, start);
            const std::ptrdiff_t hi = std::min(glen, start + len);
            make_read(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi - lo));
        }
    }
    return data;
}

void write_truth(std::ostream& out, std::span<const ReadOrigin> truth) {
    out << "read_id\toffset\tlength\tstrand\tsubstitutions\n";
    for (const auto& t : truth) {
        out << t.read_id << '\t' << t.offset << '\t' << t.length << '\t' << strand_char(t.strand) << '\t'
            << t.substitutions << '\n';
    }
}

}  // namespace genomotif
