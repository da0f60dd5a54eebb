#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genomotif/error.hpp"

namespace genomotif {

enum class Alphabet : std::uint8_t { Dna, Protein };

struct AlphabetInfo {
    std::string_view name;
    std::string_view symbols;  // symbol for code i is symbols[i]
    unsigned bits_per_symbol;
    unsigned max_k;            // longest k-mer that fits one 64-bit word
    bool has_complement;
};

// 20 standard amino acids plus selenocysteine for the protein alphabet.
inline constexpr AlphabetInfo kDnaAlphabet{"DNA", "ACGT", 2, 32, true};
inline constexpr AlphabetInfo kProteinAlphabet{"PROTEIN", "ACDEFGHIKLMNPQRSTVWYU", 5, 12, false};

constexpr const AlphabetInfo& alphabet_info(Alphabet a) noexcept {
    return a == Alphabet::Dna ? kDnaAlphabet : kProteinAlphabet;
}

inline unsigned alphabet_size(Alphabet a) noexcept {
    return static_cast<unsigned>(alphabet_info(a).symbols.size());
}

// Returns the code for `c` (case-insensitive) or -1 if `c` is not a symbol.
int encode_symbol(Alphabet a, char c) noexcept;
char decode_symbol(Alphabet a, std::uint8_t code) noexcept;

// DNA codes are A=0,C=1,G=2,T=3, so the complement is 3 - code.
constexpr std::uint8_t complement_code(std::uint8_t code) noexcept {
    return static_cast<std::uint8_t>(3 - code);
}

enum class Strand : std::uint8_t { Forward, Reverse };

constexpr char strand_char(Strand s) noexcept { return s == Strand::Forward ? '+' : '-'; }

// Bit-packed symbol string. Symbols are stored little-endian inside 64-bit
// words; bits past the last symbol are always zero, so equality is a plain
// word comparison.
class Sequence {
public:
    Sequence() = default;
    explicit Sequence(Alphabet alphabet) : alphabet_(alphabet) {}

    static Sequence from_codes(Alphabet alphabet, std::span<const std::uint8_t> codes);

    Alphabet alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return length_; }
    bool empty() const noexcept { return length_ == 0; }

    std::uint8_t at(std::size_t i) const noexcept {
        const unsigned bits = alphabet_info(alphabet_).bits_per_symbol;
        const unsigned per_word = 64 / bits;
        const unsigned shift = static_cast<unsigned>(i % per_word) * bits;
        return static_cast<std::uint8_t>((words_[i / per_word] >> shift) & ((1u << bits) - 1));
    }

    void push_back(std::uint8_t code);

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::vector<std::uint8_t> codes() const;
    std::string to_string() const;
    Sequence subsequence(std::size_t pos, std::size_t len) const;

    friend bool operator==(const Sequence&, const Sequence&) = default;

private:
    Alphabet alphabet_ = Alphabet::Dna;
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

// Fixed-length substring packed into one word, first symbol most significant,
// so the packed order equals lexicographic order of the spelled k-mer.
struct Kmer {
    std::uint64_t packed = 0;
    std::uint8_t k = 0;
    Alphabet alphabet = Alphabet::Dna;

    friend bool operator==(const Kmer&, const Kmer&) = default;
    friend auto operator<=>(const Kmer& a, const Kmer& b) noexcept {
        if (auto c = a.k <=> b.k; c != 0) return c;
        return a.packed <=> b.packed;
    }
};

struct Read {
    std::string id;
    Sequence seq;
    std::optional<std::string> quality;

    Read() = default;
    Read(std::string id_, Sequence seq_, std::optional<std::string> quality_ = std::nullopt);

    friend bool operator==(const Read&, const Read&) = default;
};

Sequence encode_sequence(std::string_view text, Alphabet alphabet = Alphabet::Dna);
std::string decode_sequence(const Sequence& s);

Sequence reverse_complement(const Sequence& s);

void check_k(Alphabet alphabet, unsigned k);

inline std::uint64_t kmer_mask(Alphabet alphabet, unsigned k) noexcept {
    const unsigned bits = alphabet_info(alphabet).bits_per_symbol * k;
    return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

Kmer make_kmer(std::string_view text, Alphabet alphabet = Alphabet::Dna);
std::string kmer_to_string(const Kmer& m);
std::uint8_t kmer_symbol(const Kmer& m, unsigned i) noexcept;

// Reverse complement of a packed DNA k-mer value.
std::uint64_t reverse_complement_packed(std::uint64_t packed, unsigned k) noexcept;
Kmer reverse_complement(const Kmer& m);
Kmer canonical(const Kmer& m);

inline std::uint64_t canonical_packed(std::uint64_t packed, unsigned k) noexcept {
    const std::uint64_t rc = reverse_complement_packed(packed, k);
    return rc < packed ? rc : packed;
}

// Calls fn(position, packed) for every k-length window of `s`, left to right.
template <typename Fn>
void for_each_kmer(const Sequence& s, unsigned k, Fn&& fn) {
    if (k == 0 || s.size() < k) return;
    const unsigned bits = alphabet_info(s.alphabet()).bits_per_symbol;
    const std::uint64_t mask = kmer_mask(s.alphabet(), k);
    std::uint64_t packed = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        packed = ((packed << bits) | s.at(i)) & mask;
        if (i + 1 >= k) fn(i + 1 - k, packed);
    }
}

std::vector<Kmer> kmerize(const Sequence& s, unsigned k);

// ---------------------------------------------------------------------------
// FASTA / FASTQ

enum class ReadFormat { Fasta, Fastq };

// What the parser does with symbols outside the alphabet (N and friends).
enum class AmbiguityPolicy { Reject, Split };

class ReadParser {
public:
    ReadParser(std::istream& in, ReadFormat format, Alphabet alphabet = Alphabet::Dna,
               AmbiguityPolicy policy = AmbiguityPolicy::Reject);

    // Next record in file order, or nullopt at end of stream.
    std::optional<Read> next();

private:
    bool read_line(std::string& line);
    std::optional<Read> next_fasta();
    std::optional<Read> next_fastq();
    void emit(std::string id, const std::string& text, std::optional<std::string> quality);

    std::istream& in_;
    ReadFormat format_;
    Alphabet alphabet_;
    AmbiguityPolicy policy_;
    std::size_t line_no_ = 0;
    std::optional<std::string> pending_header_;
    std::deque<Read> ready_;
};

std::vector<Read> parse_reads(std::istream& in, ReadFormat format,
                              Alphabet alphabet = Alphabet::Dna,
                              AmbiguityPolicy policy = AmbiguityPolicy::Reject);

// Peeks at the first non-blank character: '>' is FASTA, '@' is FASTQ.
ReadFormat detect_format(std::istream& in);

std::vector<Read> read_file(const std::string& path, Alphabet alphabet = Alphabet::Dna,
                            AmbiguityPolicy policy = AmbiguityPolicy::Reject);

void write_fasta(std::ostream& out, const Read& r);
// Records without quality are written with 'I' (Phred 40) for every base.
void write_fastq(std::ostream& out, const Read& r);
void write_reads(std::ostream& out, std::span<const Read> reads, ReadFormat format);

// ---------------------------------------------------------------------------
// Synthetic ground truth

enum class Placement {
    Random,  // offsets uniform over the genome
    Tiled,   // fixed stride read_len/depth, reads clipped at genome ends so every base has equal depth
};

struct SynthParams {
    std::size_t genome_len = 10000;
    std::size_t read_len = 150;
    double depth = 10.0;
    double error_rate = 0.0;
    std::uint64_t seed = 1;
    Placement placement = Placement::Random;
};

struct ReadOrigin {
    std::string read_id;
    std::size_t offset = 0;  // forward-strand start in the genome
    std::size_t length = 0;
    Strand strand = Strand::Forward;
    std::size_t substitutions = 0;
};

struct SynthData {
    Sequence genome;
    std::vector<Read> reads;
    std::vector<ReadOrigin> truth;
};

SynthData synth_generate(const SynthParams& params);

Sequence random_sequence(std::size_t length, std::uint64_t seed, Alphabet alphabet = Alphabet::Dna);

void write_truth(std::ostream& out, std::span<const ReadOrigin> truth);

}  // namespace genomotif
