#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "extdep/core.hpp"

namespace extdep {

// ---------------------------------------------------------------------------
// Price ingestion and return construction. Input is a long-format CSV with
// the exact header
//
//   asset_id,market,sector,date,adjusted_close
//
// dates in ISO-8601 YYYY-MM-DD (so lexicographic order is chronological).
// Rows with missing or non-positive prices are dropped and counted; true
// malformation (wrong field count, bad date, unparsable price) is an error.
// ---------------------------------------------------------------------------

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PricePoint {
    std::string date;
    double adjusted_close = 0.0;
};

struct PriceSeries {
    std::string asset_id;
    std::string market;
    std::string sector;
    std::vector<PricePoint> points;   // strictly increasing dates
};

struct ReturnPoint {
    std::string date;
    double value = 0.0;   // absolute log return, >= 0
};

struct ReturnSeries {
    std::string asset_id;
    std::string market;
    std::string sector;
    std::vector<ReturnPoint> points;

    std::vector<double> values() const {
        std::vector<double> out;
        out.reserve(points.size());
        for (const ReturnPoint& p : points) out.push_back(p.value);
        return out;
    }
};

struct LoadResult {
    std::vector<PriceSeries> series;   // in first-appearance order
    std::size_t dropped_rows = 0;      // missing/non-positive prices, duplicate dates
};

namespace detail {

inline constexpr std::string_view kPricesHeader = "asset_id,market,sector,date,adjusted_close";

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline bool iso_date_shaped(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (const std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

inline void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

[[noreturn]] inline void fail_at_line(std::size_t line_no, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line_no << ": " << what;
    throw parse_error(msg.str());
}

}  // namespace detail

inline LoadResult load_prices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw parse_error(path + ": empty file");
    detail::strip_cr(line);
    if (line != detail::kPricesHeader)
        detail::fail_at_line(1, "header must be exactly '" +
                                    std::string(detail::kPricesHeader) + "'");

    LoadResult result;
    std::unordered_map<std::string, std::size_t> index_of;   // asset_id -> series slot

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        detail::strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string_view> f = detail::split_fields(line);
        if (f.size() != 5) detail::fail_at_line(line_no, "expected 5 fields");
        if (f[0].empty()) detail::fail_at_line(line_no, "empty asset_id");
        if (!detail::iso_date_shaped(f[3]))
            detail::fail_at_line(line_no, "date must be YYYY-MM-DD");

        if (f[4].empty()) {   // missing price: drop
            ++result.dropped_rows;
            continue;
        }
        double price = 0.0;
        const auto [ptr, ec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), price);
        if (ec != std::errc{} || ptr != f[4].data() + f[4].size())
            detail::fail_at_line(line_no, "unparsable price");
        if (!(price > 0.0) || !std::isfinite(price)) {   // non-positive: drop
            ++result.dropped_rows;
            continue;
        }

        const auto [it, inserted] = index_of.try_emplace(std::string(f[0]), result.series.size());
        if (inserted) {
            result.series.push_back(
                PriceSeries{std::string(f[0]), std::string(f[1]), std::string(f[2]), {}});
        }
        result.series[it->second].points.push_back(PricePoint{std::string(f[3]), price});
    }

    // Normalize: ascending dates, duplicates dropped (first occurrence wins).
    for (PriceSeries& s : result.series) {
        std::stable_sort(s.points.begin(), s.points.end(),
                         [](const PricePoint& a, const PricePoint& b) { return a.date < b.date; });
        std::vector<PricePoint> unique;
        unique.reserve(s.points.size());
        for (PricePoint& p : s.points) {
            if (!unique.empty() && unique.back().date == p.date) {
                ++result.dropped_rows;
                continue;
            }
            unique.push_back(std::move(p));
        }
        s.points = std::move(unique);
    }
    return result;
}

// Keep points at positions offset, offset+2, ... of the date-sorted series.
inline PriceSeries every_other_day(const PriceSeries& series, int offset) {
    if (offset != 0 && offset != 1)
        throw std::invalid_argument("every_other_day: offset must be 0 or 1");
    PriceSeries out{series.asset_id, series.market, series.sector, {}};
    for (std::size_t i = static_cast<std::size_t>(offset); i < series.points.size(); i += 2)
        out.points.push_back(series.points[i]);
    return out;
}

// r_t = |log(P_t / P_{t-1})| over consecutive retained points, dated by the
// later point.
inline ReturnSeries abs_log_returns(const PriceSeries& series) {
    if (series.points.size() < 2)
        throw std::invalid_argument("abs_log_returns: need at least 2 points");
    ReturnSeries out{series.asset_id, series.market, series.sector, {}};
    out.points.reserve(series.points.size() - 1);
    for (std::size_t i = 1; i < series.points.size(); ++i) {
        const double ratio = series.points[i].adjusted_close / series.points[i - 1].adjusted_close;
        out.points.push_back(ReturnPoint{series.points[i].date, std::abs(std::log(ratio))});
    }
    return out;
}

// Inner join on date, ascending; x comes from `a`, y from `b`. The caller
// fixes the orientation (lexicographically smaller asset id first). Joint
// zero observations survive here and are dropped by to_polar downstream.
inline std::vector<BivariateObservation> align_pair(const ReturnSeries& a,
                                                    const ReturnSeries& b) {
    std::vector<BivariateObservation> out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.points.size() && j < b.points.size()) {
        const int cmp = a.points[i].date.compare(b.points[j].date);
        if (cmp == 0) {
            out.push_back({a.points[i].value, b.points[j].value});
            ++i;
            ++j;
        } else if (cmp < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    return out;
}

}  // namespace extdep
