/*
 * Copyright 2026 The SAR Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sar/random.hpp"

namespace sar {

/// One observed rating, dense 0-based indices, value in [1, rating_max].
struct Rating {
    int user;
    int item;
    int value;
};

enum class RatingFormat { ml100k, ml1m };

/// Sparse rating matrix as triples plus raw-ID <-> dense-index bijections.
/// Immutable after construction; safe for concurrent reads.
struct RatingDataset {
    std::vector<Rating> triples;
    std::vector<std::int64_t> user_ids;  // dense index -> raw ID
    std::vector<std::int64_t> item_ids;
    std::unordered_map<std::int64_t, int> user_index;  // raw ID -> dense index
    std::unordered_map<std::int64_t, int> item_index;
    int num_users = 0;
    int num_items = 0;
    int rating_max = 0;

    std::int64_t num_ratings() const { return static_cast<std::int64_t>(triples.size()); }

    std::optional<int> user_of(std::int64_t raw_id) const {
        auto it = user_index.find(raw_id);
        if (it == user_index.end()) return std::nullopt;
        return it->second;
    }
    std::optional<int> item_of(std::int64_t raw_id) const {
        auto it = item_index.find(raw_id);
        if (it == item_index.end()) return std::nullopt;
        return it->second;
    }

    double mean_rating() const {
        if (triples.empty()) return 0.0;
        double s = 0.0;
        for (const auto& t : triples) s += t.value;
        return s / static_cast<double>(triples.size());
    }
};

struct DatasetStats {
    int num_users = 0;
    int num_items = 0;
    std::int64_t num_ratings = 0;
    double sparsity = 0.0;                  // fraction of empty matrix cells
    std::vector<std::int64_t> histogram;    // histogram[v] = count of rating v, v in [1, rating_max]
};

struct Split {
    RatingDataset train;
    RatingDataset test;
    double rho = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline void split_fields(std::string_view line, std::string_view sep,
                         std::vector<std::string_view>& out) {
    out.clear();
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(line.substr(pos));
            return;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + sep.size();
    }
}

inline std::int64_t parse_int_field(std::string_view field, std::size_t line_no,
                                    const std::string& path) {
    std::int64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": malformed integer field '" + std::string(field) + "'");
    }
    return value;
}

// Shared triple-file reader: `sep`-separated integer columns, `n_fields` per
// line, rating in column 2. Reindexes users/items in first-appearance order.
inline RatingDataset read_triples(const std::string& path, std::string_view sep,
                                  std::size_t n_fields) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open rating file: " + path);

    RatingDataset ds;
    std::unordered_set<std::uint64_t> seen_pairs;
    std::vector<std::string_view> fields;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty line");
        }
        split_fields(line, sep, fields);
        if (fields.size() != n_fields) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(n_fields) +
                                     " fields, got " + std::to_string(fields.size()));
        }
        const std::int64_t raw_user = parse_int_field(fields[0], line_no, path);
        const std::int64_t raw_item = parse_int_field(fields[1], line_no, path);
        const std::int64_t rating = parse_int_field(fields[2], line_no, path);
        if (n_fields == 4) parse_int_field(fields[3], line_no, path);  // timestamp, discarded
        if (rating < 1 || rating > 5) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": rating " + std::to_string(rating) +
                                     " outside [1, 5]");
        }

        auto [uit, u_new] = ds.user_index.try_emplace(raw_user, ds.num_users);
        if (u_new) {
            ds.user_ids.push_back(raw_user);
            ++ds.num_users;
        }
        auto [iit, i_new] = ds.item_index.try_emplace(raw_item, ds.num_items);
        if (i_new) {
            ds.item_ids.push_back(raw_item);
            ++ds.num_items;
        }
        const int u = uit->second;
        const int i = iit->second;
        const std::uint64_t key =
            (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(i);
        if (!seen_pairs.insert(key).second) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": duplicate (user, item) pair " +
                                     std::to_string(raw_user) + "," + std::to_string(raw_item));
        }
        ds.triples.push_back({u, i, static_cast<int>(rating)});
        ds.rating_max = std::max(ds.rating_max, static_cast<int>(rating));
    }
    if (ds.triples.empty()) throw std::runtime_error("empty rating file: " + path);
    return ds;
}

}  // namespace detail

/// Parse a MovieLens-format rating file. ml100k lines are
/// `user\titem\trating\ttimestamp`, ml1m lines are `user::item::rating::timestamp`.
/// Users and items are reindexed densely in first-appearance order; timestamps
/// are discarded; rating_max is the maximum observed rating.
inline RatingDataset parse_ratings(const std::string& path, RatingFormat format) {
    switch (format) {
        case RatingFormat::ml100k: return detail::read_triples(path, "\t", 4);
        case RatingFormat::ml1m: return detail::read_triples(path, "::", 4);
    }
    throw std::invalid_argument("unknown rating format");
}

inline DatasetStats stats(const RatingDataset& ds) {
    DatasetStats s;
    s.num_users = ds.num_users;
    s.num_items = ds.num_items;
    s.num_ratings = ds.num_ratings();
    const double cells = static_cast<double>(ds.num_users) * static_cast<double>(ds.num_items);
    s.sparsity = cells > 0 ? 1.0 - static_cast<double>(s.num_ratings) / cells : 0.0;
    s.histogram.assign(static_cast<std::size_t>(ds.rating_max) + 1, 0);
    for (const auto& t : ds.triples) ++s.histogram[static_cast<std::size_t>(t.value)];
    return s;
}

namespace detail {

// Copy of `ds` with a subset of triples; shares the ID space (and therefore
// num_users/num_items) so cold entities after a split stay representable.
inline RatingDataset subset(const RatingDataset& ds, const std::vector<std::size_t>& order,
                            std::size_t begin, std::size_t end) {
    RatingDataset out;
    out.user_ids = ds.user_ids;
    out.item_ids = ds.item_ids;
    out.user_index = ds.user_index;
    out.item_index = ds.item_index;
    out.num_users = ds.num_users;
    out.num_items = ds.num_items;
    out.rating_max = ds.rating_max;
    out.triples.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) out.triples.push_back(ds.triples[order[k]]);
    return out;
}

}  // namespace detail

/// Seeded train/test split: uniform shuffle of all triples, first
/// round(rho * N) go to train. Deterministic given seed.
inline Split split(const RatingDataset& ds, double rho, std::uint64_t seed) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw std::invalid_argument("split: rho must be in (0, 1), got " + std::to_string(rho));
    }
    const std::size_t n = ds.triples.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng::Engine eng(seed);
    rng::shuffle(order, eng);

    const auto n_train = static_cast<std::size_t>(std::llround(rho * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n) {
        throw std::invalid_argument("split: rho=" + std::to_string(rho) +
                                    " yields an empty train or test set");
    }
    Split s;
    s.train = detail::subset(ds, order, 0, n_train);
    s.test = detail::subset(ds, order, n_train, n);
    s.rho = rho;
    s.seed = seed;
    return s;
}

/// Persist one dataset side as `user_raw item_raw rating` lines.
inline void write_raw_triples(const RatingDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& t : ds.triples) {
        out << ds.user_ids[static_cast<std::size_t>(t.user)] << ' '
            << ds.item_ids[static_cast<std::size_t>(t.item)] << ' ' << t.value << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// Read a file written by write_raw_triples. Dense indices are re-derived in
/// first-appearance order of this file.
inline RatingDataset read_raw_triples(const std::string& path) {
    return detail::read_triples(path, " ", 3);
}

inline void save_split(const Split& s, const std::string& train_path,
                       const std::string& test_path) {
    write_raw_triples(s.train, train_path);
    write_raw_triples(s.test, test_path);
}

}  // namespace sar
