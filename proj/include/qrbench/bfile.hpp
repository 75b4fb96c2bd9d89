#pragma once

// Integer sequences indexed by odd primes, written as "index value" lines.

#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qrbench/arith.hpp"
#include "qrbench/classfield.hpp"
#include "qrbench/perms.hpp"

namespace qrbench::bfile {

using arith::i64;
using arith::u64;

struct Sequence {
    std::string name;
    std::optional<arith::ResidueFilter> filter; // restricts the primes indexed
    i64 (*value)(u64 p);
};

inline const std::vector<Sequence>& sequences() {
    static const std::vector<Sequence> all = {
        {"s_p", std::nullopt, [](u64 p) { return static_cast<i64>(perms::sp_stats(p).s); }},
        {"t_p", std::nullopt, [](u64 p) { return static_cast<i64>(perms::sp_stats(p).t); }},
        {"sign_sp", std::nullopt, [](u64 p) { return static_cast<i64>(perms::sp_stats(p).sign); }},
        {"h_minus", arith::ResidueFilter{3, 4}, [](u64 p) { return static_cast<i64>(classfield::class_number_imag(p)); }},
        {"h_plus", arith::ResidueFilter{1, 4}, [](u64 p) { return static_cast<i64>(*classfield::class_data(p).h_plus); }},
    };
    return all;
}

inline const Sequence& find_sequence(const std::string& name) {
    for (const auto& s : sequences())
        if (s.name == name) return s;
    throw std::invalid_argument("unknown sequence " + name);
}

/// Odd primes from lo upward that the sequence indexes: all up to hi, or the
/// first count of them when count is given.
inline std::vector<u64> indexed_primes(const Sequence& seq, u64 lo, std::optional<u64> hi, std::optional<u64> count) {
    std::vector<u64> out;
    if (count && *count == 0) return out;
    u64 chunk_lo = std::max<u64>(lo, 3);
    const u64 chunk = 4096;
    for (;;) {
        u64 chunk_hi = chunk_lo + chunk;
        if (hi) chunk_hi = std::min(chunk_hi, *hi);
        if (chunk_lo <= chunk_hi) {
            for (const u64 p : arith::sieve_primes(chunk_lo, chunk_hi, seq.filter)) {
                out.push_back(p);
                if (count && out.size() == *count) return out;
            }
        }
        if (hi && chunk_hi >= *hi) return out;
        if (!hi && !count) throw std::invalid_argument("indexed_primes: need an upper bound or a count");
        chunk_lo = chunk_hi + 1;
    }
}

/// The b-file text: line i is "i value(p_i)".
inline std::string render(const Sequence& seq, const std::vector<u64>& primes, unsigned jobs = 1) {
    std::vector<i64> values(primes.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < primes.size(); ++i) values[i] = seq.value(primes[i]);
    } else {
        // Strided split; each slot is written by exactly one thread.
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < primes.size(); i += jobs) values[i] = seq.value(primes[i]);
            });
        for (auto& th : pool) th.join();
    }
    std::string text;
    for (std::size_t i = 0; i < values.size(); ++i) text += std::to_string(i + 1) + " " + std::to_string(values[i]) + "\n";
    return text;
}

}  // namespace qrbench::bfile
