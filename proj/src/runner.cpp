#include "ggv/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace ggv {
namespace {

struct ShardRange {
    std::uint64_t first = 0;  // first even, inclusive; 0 = empty shard
    std::uint64_t last = 0;   // last even, inclusive
};

std::vector<ShardRange> split_range(std::uint64_t start, std::uint64_t end,
                                    unsigned shards) {
    const std::uint64_t evens = (end - start) / 2 + 1;
    std::vector<ShardRange> out(shards);
    std::uint64_t cursor = start;
    for (unsigned i = 0; i < shards; ++i) {
        std::uint64_t take = evens / shards + (i < evens % shards ? 1 : 0);
        if (take == 0) continue;
        out[i].first = cursor;
        out[i].last = cursor + 2 * (take - 1);
        cursor = out[i].last + 2;
    }
    return out;
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::vector<std::uint64_t> split_u64(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoull(item));
    return out;
}

// key=value file parsing shared by report and checkpoint readers.
std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("malformed key=value line: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failure on " + path);
}

const std::string& require(const std::map<std::string, std::string>& kv,
                           const std::string& key, const std::string& context) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw std::runtime_error(context + ": missing key " + key);
    return it->second;
}

std::string shard_spill_path(const std::string& checkpoint_path, unsigned shard) {
    return checkpoint_path + ".shard" + std::to_string(shard) + ".samples";
}

struct ShardState {
    ShardRange range;
    std::uint64_t hwm = 0;  // last fully verified even t; 0 = none
    std::vector<SampleRow> rows;
    std::vector<std::uint64_t> exceptions;
    std::uint64_t upper = 0, lower = 0, fallback = 0;
    unsigned max_expansions = 0;
    std::uint64_t max_gamma = 0;
    std::size_t flushed_rows = 0;  // rows already persisted to the spill file
};

std::string checkpoint_text(const RunConfig& cfg, const std::vector<ShardState>& shards,
                            bool complete) {
    std::ostringstream out;
    out << "format=ggv-checkpoint-1\n";
    out << "config_digest=" << cfg.digest() << "\n";
    out << "complete=" << (complete ? 1 : 0) << "\n";
    out << cfg.canonical();
    for (std::size_t i = 0; i < shards.size(); ++i)
        out << "shard." << i << ".hwm=" << shards[i].hwm << "\n";
    std::vector<std::uint64_t> exceptions;
    for (const auto& s : shards)
        exceptions.insert(exceptions.end(), s.exceptions.begin(), s.exceptions.end());
    std::sort(exceptions.begin(), exceptions.end());
    out << "exceptions=" << join_u64(exceptions) << "\n";
    return out.str();
}

class Merger {
public:
    explicit Merger(const RunConfig& cfg) : cfg_(cfg) {}

    // Persist a shard's pending rows and the current global checkpoint.
    void flush(std::vector<ShardState>& shards, unsigned shard_idx) {
        std::lock_guard lock(mu_);
        if (cfg_.checkpoint_path.empty()) return;
        ShardState& s = shards[shard_idx];
        std::ofstream spill(shard_spill_path(cfg_.checkpoint_path, shard_idx),
                            std::ios::app);
        for (std::size_t i = s.flushed_rows; i < s.rows.size(); ++i)
            spill << format_sample_row(s.rows[i]) << "\n";
        s.flushed_rows = s.rows.size();
        spill.close();
        write_file(cfg_.checkpoint_path, checkpoint_text(cfg_, shards, false));
    }

private:
    const RunConfig& cfg_;
    std::mutex mu_;
};

void verify_one(std::uint64_t t, const RunConfig& cfg, const PrimeTable& table,
                ShardState& s) {
    // SGC baseline first; a miss here falsifies the standing assumption and
    // must abort the whole run.
    unconstrained_goldbach(t, table);

    auto d = find_decomposition(t, table, cfg.search, cfg.b_seed, cfg.columns);
    if (!d) {
        s.exceptions.push_back(t);
        return;
    }
    switch (d->strategy) {
        case Strategy::UpperWindow: ++s.upper; break;
        case Strategy::LowerWindow: ++s.lower; break;
        case Strategy::FallbackScan: ++s.fallback; break;
    }
    s.max_expansions = std::max(s.max_expansions, d->expansions);
    s.max_gamma = std::max(s.max_gamma, d->gamma_obs);
    const NatCell nc = nat_to_cell(t, cfg.columns);
    s.rows.push_back({t, nc.n, nc.alpha, d->col_prime.p, d->delta_obs,
                      d->other_prime.p, d->gamma_obs, d->strategy, d->expansions});
}

RunReport execute(const RunConfig& cfg, const PrimeTable& table,
                  std::vector<ShardState>& shards, std::vector<SampleRow>* rows_out) {
    const auto t0 = std::chrono::steady_clock::now();
    Merger merger(cfg);
    std::atomic<bool> stop{false};
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto worker = [&](unsigned idx) {
        ShardState& s = shards[idx];
        if (s.range.first == 0) return;
        std::uint64_t t = s.hwm ? s.hwm + 2 : s.range.first;
        std::uint64_t since_flush = 0;
        try {
            for (; t <= s.range.last; t += 2) {
                if (stop.load(std::memory_order_relaxed)) break;
                verify_one(t, cfg, table, s);
                s.hwm = t;
                if (cfg.interrupt_after && t >= cfg.interrupt_after)
                    stop.store(true, std::memory_order_relaxed);
                if (++since_flush >= cfg.checkpoint_interval) {
                    merger.flush(shards, idx);
                    since_flush = 0;
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            stop.store(true, std::memory_order_relaxed);
        }
        merger.flush(shards, idx);
    };

    std::vector<std::thread> threads;
    threads.reserve(shards.size());
    for (unsigned i = 0; i < shards.size(); ++i) threads.emplace_back(worker, i);
    for (auto& th : threads) th.join();
    if (failure) std::rethrow_exception(failure);

    RunReport report;
    report.start = cfg.start;
    report.end = cfg.end;
    report.complete = true;
    std::vector<SampleRow> merged;
    for (const ShardState& s : shards) {
        if (s.range.first != 0 && s.hwm != s.range.last) report.complete = false;
        merged.insert(merged.end(), s.rows.begin(), s.rows.end());
        report.exceptions.insert(report.exceptions.end(), s.exceptions.begin(),
                                 s.exceptions.end());
        report.upper_window_hits += s.upper;
        report.lower_window_hits += s.lower;
        report.fallback_hits += s.fallback;
        report.max_expansions_observed = std::max(report.max_expansions_observed,
                                                  s.max_expansions);
        report.max_gamma = std::max(report.max_gamma, s.max_gamma);
    }
    // Shards cover contiguous ascending blocks; a stable sort by t gives the
    // canonical merged order either way.
    std::sort(merged.begin(), merged.end(),
              [](const SampleRow& a, const SampleRow& b) { return a.t < b.t; });
    std::sort(report.exceptions.begin(), report.exceptions.end());
    report.evens_tested = merged.size() + report.exceptions.size();
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (report.complete) {
        if (!cfg.samples_path.empty()) write_samples_tsv(cfg.samples_path, merged);
        if (!cfg.report_path.empty()) write_file(cfg.report_path, format_report(report));
        if (!cfg.checkpoint_path.empty()) {
            std::string text = checkpoint_text(cfg, shards, true);
            if (!cfg.report_path.empty())
                text += "final_report=" + cfg.report_path + "\n";
            else
                write_file(cfg.checkpoint_path + ".report", format_report(report));
            write_file(cfg.checkpoint_path, text);
        }
    }
    if (rows_out)
        rows_out->insert(rows_out->end(), merged.begin(), merged.end());
    std::cerr << "verified [" << cfg.start << ", " << cfg.end << "] in "
              << report.seconds << "s, " << report.exceptions.size()
              << " exception(s)" << (report.complete ? "" : " [interrupted]") << "\n";
    return report;
}

RunConfig config_from_kv(const std::map<std::string, std::string>& kv,
                         const std::string& context) {
    RunConfig cfg;
    cfg.start = std::stoull(require(kv, "start", context));
    cfg.end = std::stoull(require(kv, "end", context));
    cfg.sieve_bound = std::stoull(require(kv, "sieve_bound", context));
    cfg.shard_count = static_cast<unsigned>(std::stoul(require(kv, "shards", context)));
    cfg.columns = static_cast<unsigned>(std::stoul(require(kv, "columns", context)));
    cfg.b_seed = std::stod(require(kv, "b_seed", context));
    cfg.search.sup = std::stoull(require(kv, "sup", context));
    cfg.search.inf = std::stoull(require(kv, "inf", context));
    cfg.search.beta = std::stoull(require(kv, "beta", context));
    cfg.search.growth_factor = std::stod(require(kv, "growth", context));
    cfg.search.max_expansions =
        static_cast<unsigned>(std::stoul(require(kv, "max_expansions", context)));
    cfg.search.fallback_enabled = require(kv, "fallback", context) == "1";
    cfg.search.one_sided_upper = require(kv, "one_sided_upper", context) == "1";
    cfg.checkpoint_interval = std::stoull(require(kv, "checkpoint_interval", context));
    cfg.report_path = kv.count("report_path") ? kv.at("report_path") : "";
    cfg.samples_path = kv.count("samples_path") ? kv.at("samples_path") : "";
    return cfg;
}

}  // namespace

void RunConfig::validate() const {
    if (start < 4 || start % 2 != 0)
        throw std::invalid_argument("run config: start must be an even integer >= 4");
    if (end < start || end % 2 != 0)
        throw std::invalid_argument("run config: end must be an even integer >= start");
    if (sieve_bound < end)
        throw std::invalid_argument("run config: sieve bound " + std::to_string(sieve_bound) +
                                    " smaller than range end " + std::to_string(end));
    if (shard_count < 1)
        throw std::invalid_argument("run config: need at least one shard");
    if (columns < 2)
        throw std::invalid_argument("run config: need at least 2 columns");
}

std::string RunConfig::canonical() const {
    std::ostringstream out;
    out << "start=" << start << "\n"
        << "end=" << end << "\n"
        << "sieve_bound=" << sieve_bound << "\n"
        << "shards=" << shard_count << "\n"
        << "columns=" << columns << "\n"
        << "b_seed=" << b_seed << "\n"
        << "sup=" << search.sup << "\n"
        << "inf=" << search.inf << "\n"
        << "beta=" << search.beta << "\n"
        << "growth=" << search.growth_factor << "\n"
        << "max_expansions=" << search.max_expansions << "\n"
        << "fallback=" << (search.fallback_enabled ? 1 : 0) << "\n"
        << "one_sided_upper=" << (search.one_sided_upper ? 1 : 0) << "\n"
        << "checkpoint_interval=" << checkpoint_interval << "\n";
    if (!report_path.empty()) out << "report_path=" << report_path << "\n";
    if (!samples_path.empty()) out << "samples_path=" << samples_path << "\n";
    return out.str();
}

std::uint64_t RunConfig::digest() const { return fnv1a(canonical()); }

std::string format_report(const RunReport& report) {
    std::ostringstream out;
    out << "range_start=" << report.start << "\n"
        << "range_end=" << report.end << "\n"
        << "evens_tested=" << report.evens_tested << "\n"
        << "exceptions=" << join_u64(report.exceptions) << "\n"
        << "upper_window_hits=" << report.upper_window_hits << "\n"
        << "lower_window_hits=" << report.lower_window_hits << "\n"
        << "fallback_hits=" << report.fallback_hits << "\n"
        << "max_expansions_observed=" << report.max_expansions_observed << "\n"
        << "max_gamma=" << report.max_gamma << "\n"
        << "complete=" << (report.complete ? 1 : 0) << "\n";
    return out.str();
}

RunReport parse_report(const std::string& text) {
    const auto kv = parse_kv(text);
    RunReport r;
    r.start = std::stoull(require(kv, "range_start", "report"));
    r.end = std::stoull(require(kv, "range_end", "report"));
    r.evens_tested = std::stoull(require(kv, "evens_tested", "report"));
    r.exceptions = split_u64(require(kv, "exceptions", "report"));
    r.upper_window_hits = std::stoull(require(kv, "upper_window_hits", "report"));
    r.lower_window_hits = std::stoull(require(kv, "lower_window_hits", "report"));
    r.fallback_hits = std::stoull(require(kv, "fallback_hits", "report"));
    r.max_expansions_observed =
        static_cast<unsigned>(std::stoul(require(kv, "max_expansions_observed", "report")));
    r.max_gamma = std::stoull(require(kv, "max_gamma", "report"));
    r.complete = require(kv, "complete", "report") == "1";
    return r;
}

const char* const kSamplesHeader =
    "t\tn\talpha\tcol_prime\tdelta_obs\tother_prime\tgamma_obs\tstrategy\texpansions";

std::string format_sample_row(const SampleRow& row) {
    std::ostringstream out;
    out << row.t << '\t' << row.n << '\t' << row.alpha << '\t' << row.col_prime << '\t'
        << row.delta_obs << '\t' << row.other_prime << '\t' << row.gamma_obs << '\t'
        << strategy_name(row.strategy) << '\t' << row.expansions;
    return out.str();
}

namespace {

SampleRow parse_sample_row(const std::string& line, const std::string& context) {
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() != 9)
        throw std::runtime_error(context + ": bad sample row: " + line);
    SampleRow row;
    row.t = std::stoull(fields[0]);
    row.n = static_cast<unsigned>(std::stoul(fields[1]));
    row.alpha = std::stoull(fields[2]);
    row.col_prime = std::stoull(fields[3]);
    row.delta_obs = std::stoull(fields[4]);
    row.other_prime = std::stoull(fields[5]);
    row.gamma_obs = std::stoull(fields[6]);
    auto strat = strategy_from_name(fields[7]);
    if (!strat)
        throw std::runtime_error(context + ": unknown strategy: " + fields[7]);
    row.strategy = *strat;
    row.expansions = static_cast<unsigned>(std::stoul(fields[8]));
    return row;
}

}  // namespace

void write_samples_tsv(const std::string& path, const std::vector<SampleRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << kSamplesHeader << "\n";
    for (const SampleRow& row : rows) out << format_sample_row(row) << "\n";
    if (!out) throw std::runtime_error("write failure on " + path);
}

std::vector<SampleRow> read_samples_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kSamplesHeader)
        throw std::runtime_error(path + ": missing or unexpected TSV header");
    std::vector<SampleRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(parse_sample_row(line, path));
    }
    return rows;
}

std::vector<DeltaSample> to_delta_samples(const std::vector<SampleRow>& rows) {
    std::vector<DeltaSample> out;
    out.reserve(rows.size());
    for (const SampleRow& r : rows) out.push_back({r.alpha, r.delta_obs, r.gamma_obs});
    return out;
}

RunReport run_verification(const RunConfig& cfg, const PrimeTable& table,
                           std::vector<SampleRow>* rows) {
    cfg.validate();
    if (table.bound() < cfg.sieve_bound)
        throw std::invalid_argument("run config: table bound below configured sieve bound");

    std::vector<ShardState> shards(cfg.shard_count);
    const auto ranges = split_range(cfg.start, cfg.end, cfg.shard_count);
    for (unsigned i = 0; i < cfg.shard_count; ++i) shards[i].range = ranges[i];

    if (!cfg.checkpoint_path.empty()) {
        // Fresh run: clear any stale spill files.
        for (unsigned i = 0; i < cfg.shard_count; ++i)
            std::filesystem::remove(shard_spill_path(cfg.checkpoint_path, i));
        write_file(cfg.checkpoint_path, checkpoint_text(cfg, shards, false));
    }
    return execute(cfg, table, shards, rows);
}

RunReport resume(const std::string& checkpoint_path, std::vector<SampleRow>* rows) {
    const auto kv = parse_kv(read_file(checkpoint_path));
    if (require(kv, "format", checkpoint_path) != "ggv-checkpoint-1")
        throw std::runtime_error(checkpoint_path + ": unknown checkpoint format");

    RunConfig cfg = config_from_kv(kv, checkpoint_path);
    cfg.checkpoint_path = checkpoint_path;
    if (std::stoull(require(kv, "config_digest", checkpoint_path)) != cfg.digest())
        throw std::runtime_error(checkpoint_path +
                                 ": config digest mismatch, refusing to resume");
    cfg.validate();

    if (require(kv, "complete", checkpoint_path) == "1") {
        const std::string report_file =
            kv.count("final_report") ? kv.at("final_report") : checkpoint_path + ".report";
        RunReport report = parse_report(read_file(report_file));
        if (rows && !cfg.samples_path.empty())
            *rows = read_samples_tsv(cfg.samples_path);
        std::cerr << "checkpoint already complete, reloaded report from "
                  << report_file << "\n";
        return report;
    }

    const PrimeTable table = PrimeTable::build(cfg.sieve_bound);
    std::vector<ShardState> shards(cfg.shard_count);
    const auto ranges = split_range(cfg.start, cfg.end, cfg.shard_count);
    std::vector<std::uint64_t> prior_exceptions =
        split_u64(require(kv, "exceptions", checkpoint_path));
    for (unsigned i = 0; i < cfg.shard_count; ++i) {
        ShardState& s = shards[i];
        s.range = ranges[i];
        s.hwm = std::stoull(
            require(kv, "shard." + std::to_string(i) + ".hwm", checkpoint_path));
        if (s.hwm != 0 &&
            (s.range.first == 0 || s.hwm < s.range.first || s.hwm > s.range.last))
            throw std::runtime_error(checkpoint_path + ": shard " + std::to_string(i) +
                                     " high-water mark outside its range");
        const std::string spill = shard_spill_path(checkpoint_path, i);
        if (std::filesystem::exists(spill)) {
            std::ifstream in(spill);
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                SampleRow row = parse_sample_row(line, spill);
                if (row.t > s.hwm)
                    throw std::runtime_error(spill + ": sample beyond high-water mark");
                s.rows.push_back(row);
            }
        }
        s.flushed_rows = s.rows.size();
        // Recover per-shard counters from the reloaded rows.
        for (const SampleRow& row : s.rows) {
            switch (row.strategy) {
                case Strategy::UpperWindow: ++s.upper; break;
                case Strategy::LowerWindow: ++s.lower; break;
                case Strategy::FallbackScan: ++s.fallback; break;
            }
            s.max_expansions = std::max(s.max_expansions, row.expansions);
            s.max_gamma = std::max(s.max_gamma, row.gamma_obs);
        }
        for (std::uint64_t e : prior_exceptions)
            if (s.range.first != 0 && e >= s.range.first && e <= s.range.last)
                s.exceptions.push_back(e);
    }
    // Verified-count consistency: rows + exceptions must cover [first, hwm].
    for (const ShardState& s : shards) {
        if (s.range.first == 0) continue;
        const std::uint64_t done = s.hwm ? (s.hwm - s.range.first) / 2 + 1 : 0;
        if (s.rows.size() + s.exceptions.size() != done)
            throw std::runtime_error(checkpoint_path +
                                     ": spilled samples inconsistent with high-water mark");
    }
    return execute(cfg, table, shards, rows);
}

}  // namespace ggv
