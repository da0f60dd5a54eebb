#include "genomotif/distsim.hpp"

#include <algorithm>
#include <list>

#include <absl/container/flat_hash_map.h>
#include <json.hpp>

#include "genomotif/hash.hpp"

namespace genomotif {

const char* comm_mode_name(CommMode m) noexcept {
    return m == CommMode::BulkAllToAll ? "bulk" : "async";
}

CommMode parse_comm_mode(const std::string& name) {
    if (name == "bulk") return CommMode::BulkAllToAll;
    if (name == "async") return CommMode::AsyncOneSided;
    throw InvalidParameter("unknown communication mode '" + name + "' (bulk or async)");
}

void DistConfig::validate() const {
    if (p < 1) throw InvalidParameter("rank count must be at least 1");
    if (buffer < 1) throw InvalidParameter("buffer capacity must be at least 1");
}

std::size_t owner_of(std::uint64_t packed, std::size_t p, std::uint64_t seed) {
    if (p == 0) throw InvalidParameter("rank count must be at least 1");
    return static_cast<std::size_t>(hash_packed(packed, seed) % p);
}

double imbalance_factor(std::span<const std::uint64_t> received) {
    std::uint64_t total = 0, peak = 0;
    for (const auto r : received) {
        total += r;
        peak = std::max(peak, r);
    }
    if (received.empty() || total == 0) throw NoTraffic("no k-mers were received by any rank");
    const double mean = static_cast<double>(total) / static_cast<double>(received.size());
    return static_cast<double>(peak) / mean;
}

double imbalance_factor(const CommMetrics& m) { return imbalance_factor(m.received); }

namespace {

struct Record {
    std::uint64_t key = 0;
    std::uint32_t count = 0;
    std::array<std::uint32_t, 4> left{};
    std::array<std::uint32_t, 4> right{};
};

Record single(const KmerOccurrence& occ) {
    Record r;
    r.key = occ.key;
    r.count = 1;
    if (occ.left >= 0) r.left[static_cast<std::size_t>(occ.left)] = 1;
    if (occ.right >= 0) r.right[static_cast<std::size_t>(occ.right)] = 1;
    return r;
}

std::size_t record_bytes(const Record& r) { return r.count > 1 ? kCombinedRecordBytes : kSingleRecordBytes; }

// Least-recently-updated combiner for remote-bound records.
class Combiner {
public:
    explicit Combiner(std::size_t capacity) : capacity_(capacity) {}

    // Returns the evicted record, if any.
    std::optional<Record> add(const Record& r, std::uint64_t& hits) {
        auto it = index_.find(r.key);
        if (it != index_.end()) {
            Record& e = *it->second;
            e.count += r.count;
            for (std::size_t c = 0; c < 4; ++c) {
                e.left[c] += r.left[c];
                e.right[c] += r.right[c];
            }
            order_.splice(order_.begin(), order_, it->second);
            ++hits;
            return std::nullopt;
        }
        std::optional<Record> evicted;
        if (index_.size() == capacity_) evicted = pop_oldest();
        order_.push_front(r);
        index_.emplace(r.key, order_.begin());
        return evicted;
    }

    bool empty() const noexcept { return order_.empty(); }

    Record pop_oldest() {
        Record r = order_.back();
        index_.erase(r.key);
        order_.pop_back();
        return r;
    }

private:
    std::size_t capacity_;
    std::list<Record> order_;
    absl::flat_hash_map<std::uint64_t, std::list<Record>::iterator> index_;
};

class Simulation {
public:
    Simulation(std::span<const Read> reads, unsigned k, const DistConfig& dcfg, const CountConfig& ccfg)
        : k_(k), dcfg_(dcfg), ccfg_(ccfg), p_(dcfg.p), occ_(dcfg.p) {
        // Round-robin sharding; each rank's occurrences in read-major order.
        for (std::size_t i = 0; i < reads.size(); ++i) {
            for_each_occurrence(reads[i].seq, k, ccfg.canonical,
                                [&](const KmerOccurrence& o) { occ_[i % p_].push_back(o); });
        }
        const std::uint64_t total_bits = ccfg.bloom_bits != 0
            ? ccfg.bloom_bits
            : default_bloom_bits(estimate_distinct_kmers(reads, k, ccfg.canonical, ccfg.hash_seed));
        for (std::size_t r = 0; r < p_; ++r) {
            blooms_.emplace_back(std::max<std::uint64_t>(64, total_bits / p_), ccfg.bloom_hashes, ccfg.hash_seed);
        }
        tables_.resize(p_);
        m_.p = p_;
        m_.mode = dcfg.mode;
        m_.buffer = dcfg.buffer;
        m_.combiner = dcfg.combiner;
        m_.received.assign(p_, 0);
        m_.pair_messages.assign(p_ * p_, 0);
        m_.pass_pair_messages.assign(p_ * p_, 0);
        m_.pair_records.assign(p_ * p_, 0);
    }

    void run_pass(int pass) {
        pass_ = pass;
        buffers_.assign(p_, std::vector<std::vector<Record>>(p_));
        buffered_.assign(p_, 0);
        combiners_.clear();
        for (std::size_t r = 0; r < p_; ++r) combiners_.emplace_back(dcfg_.combiner);

        if (dcfg_.mode == CommMode::AsyncOneSided) {
            for (std::size_t r = 0; r < p_; ++r) {
                for (const auto& o : occ_[r]) process(r, o);
                drain(r);
            }
            return;
        }
        std::size_t most = 0;
        for (const auto& list : occ_) most = std::max(most, list.size());
        const std::size_t cap = dcfg_.phase_cap == 0 ? std::max<std::size_t>(most, 1) : dcfg_.phase_cap;
        const std::size_t phases = (most + cap - 1) / cap;
        for (std::size_t ph = 0; ph < phases; ++ph) {
            for (std::size_t r = 0; r < p_; ++r) {
                const std::size_t begin = std::min(occ_[r].size(), ph * cap);
                const std::size_t end = std::min(occ_[r].size(), begin + cap);
                for (std::size_t i = begin; i < end; ++i) process(r, occ_[r][i]);
            }
            for (std::size_t r = 0; r < p_; ++r) drain(r);
            ++m_.phases;
        }
        m_.phases_per_pass = phases;
    }

    void check_capacity() const {
        if (ccfg_.max_entries == 0) return;
        std::size_t admitted = 0;
        for (const auto& t : tables_) admitted += t.size();
        if (admitted > ccfg_.max_entries) {
            throw CapacityExceeded("k-mer table exceeds " + std::to_string(ccfg_.max_entries) + " entries");
        }
    }

    KmerCountTable merged(Alphabet alphabet) {
        KmerCountTable table(k_, alphabet, ccfg_.canonical);
        auto& map = table.mutable_entries();
        const std::uint32_t threshold = std::max<std::uint32_t>(2, ccfg_.min_count);
        for (auto& t : tables_) {
            for (auto& [key, e] : t) {
                if (e.count >= threshold) map.emplace(key, e);
            }
        }
        return table;
    }

    CommMetrics& metrics() { return m_; }

private:
    void process(std::size_t r, const KmerOccurrence& o) {
        ++m_.occurrences;
        const std::size_t dest = owner_of(o.key, p_, dcfg_.owner_seed);
        const Record rec = single(o);
        if (dest == r) {
            ++m_.local_kmers;
            deliver(dest, rec);
            return;
        }
        ++m_.remote_kmers;
        if (dcfg_.combiner == 0) {
            enqueue(r, dest, rec);
            return;
        }
        if (auto evicted = combiners_[r].add(rec, m_.combiner_hits)) {
            enqueue(r, owner_of(evicted->key, p_, dcfg_.owner_seed), *evicted);
        }
    }

    void enqueue(std::size_t r, std::size_t dest, const Record& rec) {
        buffers_[r][dest].push_back(rec);
        ++buffered_[r];
        m_.peak_buffered = std::max<std::uint64_t>(m_.peak_buffered, buffered_[r]);
        if (dcfg_.mode == CommMode::AsyncOneSided && buffers_[r][dest].size() >= dcfg_.buffer) flush(r, dest);
    }

    void flush(std::size_t r, std::size_t dest) {
        auto& buf = buffers_[r][dest];
        if (buf.empty()) return;
        const std::uint64_t n = buf.size();
        const std::uint64_t msgs = dcfg_.mode == CommMode::AsyncOneSided ? 1 : (n + dcfg_.buffer - 1) / dcfg_.buffer;
        m_.messages += msgs;
        m_.pair_messages[r * p_ + dest] += msgs;
        if (pass_ == 1) m_.pass_pair_messages[r * p_ + dest] += msgs;
        m_.pair_records[r * p_ + dest] += n;
        m_.records_sent += n;
        m_.received[dest] += n;
        for (const auto& rec : buf) {
            m_.bytes += record_bytes(rec);
            deliver(dest, rec);
        }
        buffered_[r] -= n;
        buf.clear();
    }

    // Empties the combiner (oldest first) and then every outgoing buffer.
    void drain(std::size_t r) {
        while (!combiners_[r].empty()) {
            const Record rec = combiners_[r].pop_oldest();
            enqueue(r, owner_of(rec.key, p_, dcfg_.owner_seed), rec);
        }
        for (std::size_t d = 0; d < p_; ++d) flush(r, d);
    }

    void deliver(std::size_t dest, const Record& rec) {
        auto& table = tables_[dest];
        if (pass_ == 1) {
            // A record standing for two or more occurrences admits the k-mer outright.
            const std::uint32_t probes = std::min<std::uint32_t>(rec.count, 2);
            for (std::uint32_t i = 0; i < probes; ++i) {
                if (blooms_[dest].test_and_set(rec.key)) table.try_emplace(rec.key);
            }
            return;
        }
        auto it = table.find(rec.key);
        if (it == table.end()) return;
        it->second.count += rec.count;
        for (std::size_t c = 0; c < 4; ++c) {
            it->second.left[c] += rec.left[c];
            it->second.right[c] += rec.right[c];
        }
    }

    unsigned k_;
    DistConfig dcfg_;
    CountConfig ccfg_;
    std::size_t p_;
    int pass_ = 1;
    std::vector<std::vector<KmerOccurrence>> occ_;
    std::vector<BloomFilter> blooms_;
    std::vector<absl::flat_hash_map<std::uint64_t, KmerEntry>> tables_;
    std::vector<std::vector<std::vector<Record>>> buffers_;
    std::vector<std::uint64_t> buffered_;
    std::vector<Combiner> combiners_;
    CommMetrics m_;
};

}  // namespace

DistResult run_dist_count(std::span<const Read> reads, unsigned k, const DistConfig& dcfg, const CountConfig& ccfg) {
    dcfg.validate();
    const Alphabet alphabet = reads.empty() ? Alphabet::Dna : reads.front().seq.alphabet();
    check_k(alphabet, k);
    if (ccfg.canonical && alphabet != Alphabet::Dna) {
        throw UnsupportedAlphabet("canonical counting requires the DNA alphabet");
    }
    for (const auto& r : reads) {
        if (r.seq.alphabet() != alphabet) throw UnsupportedAlphabet("reads mix alphabets");
    }
    if (reads.empty()) {
        DistResult out{KmerCountTable(k, alphabet, ccfg.canonical), CommMetrics{}};
        out.metrics.p = dcfg.p;
        out.metrics.mode = dcfg.mode;
        out.metrics.buffer = dcfg.buffer;
        out.metrics.combiner = dcfg.combiner;
        out.metrics.received.assign(dcfg.p, 0);
        out.metrics.pair_messages.assign(dcfg.p * dcfg.p, 0);
        out.metrics.pass_pair_messages.assign(dcfg.p * dcfg.p, 0);
        out.metrics.pair_records.assign(dcfg.p * dcfg.p, 0);
        return out;
    }
    Simulation sim(reads, k, dcfg, ccfg);
    sim.run_pass(1);
    sim.check_capacity();
    sim.run_pass(2);
    return DistResult{sim.merged(alphabet), std::move(sim.metrics())};
}

std::string metrics_json(const CommMetrics& m) {
    nlohmann::ordered_json j;
    j["p"] = m.p;
    j["mode"] = comm_mode_name(m.mode);
    j["B"] = m.buffer;
    j["H"] = m.combiner;
    j["messages"] = m.messages;
    j["bytes"] = m.bytes;
    j["remote_fraction"] = m.remote_fraction();
    j["phases"] = m.phases;
    j["peak_buffered"] = m.peak_buffered;
    std::uint64_t traffic = 0;
    for (const auto r : m.received) traffic += r;
    if (traffic == 0) {
        j["imbalance"] = nullptr;
    } else {
        j["imbalance"] = imbalance_factor(m);
    }
    j["combiner_hits"] = m.combiner_hits;
    return j.dump(2);
}

}  // namespace genomotif
