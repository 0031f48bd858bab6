#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "extdep/matrix.hpp"
#include "extdep/returns.hpp"

namespace extdep {

// ---------------------------------------------------------------------------
// Upper-triangular SVG heatmap of a dependence matrix, rows and columns
// ordered by (market, sector, asset). Cell color is the convex blend of the
// class colors weighted by the dependence vector, so unanimous full
// dependence is solid blue and mixed outcomes wash toward white. Unclassified
// pairs are hatched. Output bytes are a pure function of the inputs.
// ---------------------------------------------------------------------------

struct Rgb {
    int r = 255, g = 255, b = 255;
};

inline constexpr Rgb kFullColor{33, 102, 172};          // blue
inline constexpr Rgb kStrongColor{252, 202, 48};        // yellow
inline constexpr Rgb kWeakColor{140, 140, 140};         // gray
inline constexpr Rgb kIndependenceColor{255, 255, 255}; // white

inline Rgb blend_color(const DependenceVector& v) {
    const std::array<Rgb, 4> palette{kIndependenceColor, kWeakColor, kStrongColor, kFullColor};
    double r = 0.0, g = 0.0, b = 0.0;
    for (int c = 0; c < 4; ++c) {
        r += v.weights[c] * palette[c].r;
        g += v.weights[c] * palette[c].g;
        b += v.weights[c] * palette[c].b;
    }
    return Rgb{static_cast<int>(std::llround(r)), static_cast<int>(std::llround(g)),
               static_cast<int>(std::llround(b))};
}

struct SectorMeta {
    struct Entry {
        std::string market;
        std::string sector;
    };
    std::map<std::string, Entry> entries;
};

inline SectorMeta load_sector_meta(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw parse_error(path + ": empty file");
    detail::strip_cr(line);
    if (line != "asset_id,market,sector")
        detail::fail_at_line(1, "header must be exactly 'asset_id,market,sector'");
    SectorMeta meta;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        detail::strip_cr(line);
        if (line.empty()) continue;
        const auto f = detail::split_fields(line);
        if (f.size() != 3) detail::fail_at_line(line_no, "expected 3 fields");
        meta.entries[std::string(f[0])] = SectorMeta::Entry{std::string(f[1]), std::string(f[2])};
    }
    return meta;
}

inline SectorMeta sector_meta_from_assets(const std::vector<AssetStats>& assets) {
    SectorMeta meta;
    for (const AssetStats& a : assets)
        meta.entries[a.asset_id] = SectorMeta::Entry{a.market, a.sector};
    return meta;
}

namespace detail {

inline std::string rgb_attr(const Rgb& c) {
    return "rgb(" + std::to_string(c.r) + "," + std::to_string(c.g) + "," +
           std::to_string(c.b) + ")";
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

inline std::string render_heatmap(const DependenceMatrix& matrix, const SectorMeta& meta) {
    struct Row {
        std::string asset_id;
        std::string market;
        std::string sector;
    };
    std::vector<Row> rows;
    rows.reserve(matrix.assets.size());
    for (const AssetStats& a : matrix.assets) {
        const auto it = meta.entries.find(a.asset_id);
        if (it == meta.entries.end())
            throw std::runtime_error("render_heatmap: asset '" + a.asset_id +
                                     "' missing from sector metadata");
        rows.push_back(Row{a.asset_id, it->second.market, it->second.sector});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.market != b.market) return a.market < b.market;
        if (a.sector != b.sector) return a.sector < b.sector;
        return a.asset_id < b.asset_id;
    });

    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < rows.size(); ++i) position[rows[i].asset_id] = i;

    std::map<std::pair<std::string, std::string>, const PairResult*> lookup;
    for (const PairResult& p : matrix.pairs) lookup[{p.asset_a, p.asset_b}] = &p;

    const int n = static_cast<int>(rows.size());
    const int cell = 14;
    std::size_t longest_label = 0;
    for (const Row& r : rows)
        longest_label = std::max(longest_label, r.asset_id.size() + r.sector.size() + 3);
    const int label_px = 10 + 6 * static_cast<int>(longest_label);
    const int margin_left = std::max(130, label_px);
    const int margin_top = std::max(130, label_px);
    const int legend_h = 40;
    const int width = margin_left + n * cell + 20;
    const int height = margin_top + n * cell + legend_h + 20;

    std::string svg;
    svg.reserve(4096 + static_cast<std::size_t>(n) * n * 64);
    auto num = [](int v) { return std::to_string(v); };

    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    svg += "<defs>\n<pattern id=\"unclassified\" width=\"6\" height=\"6\" "
           "patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">\n"
           "<rect width=\"6\" height=\"6\" fill=\"white\"/>\n"
           "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#b04040\" stroke-width=\"2\"/>\n"
           "</pattern>\n</defs>\n";
    svg += "<rect width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";
    svg += "<g font-family=\"monospace\" font-size=\"9\">\n";

    // Cells (upper triangle only).
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const std::string& id_i = rows[i].asset_id;
            const std::string& id_j = rows[j].asset_id;
            const auto key = id_i < id_j ? std::make_pair(id_i, id_j) : std::make_pair(id_j, id_i);
            const auto it = lookup.find(key);
            if (it == lookup.end()) continue;
            const PairResult& p = *it->second;

            const int x = margin_left + j * cell;
            const int y = margin_top + i * cell;
            std::string fill;
            std::string title;
            if (p.vector) {
                fill = detail::rgb_attr(blend_color(*p.vector));
                title = detail::xml_escape(id_i) + " x " + detail::xml_escape(id_j) +
                        ": ind=" + format_double(p.vector->weight(DependenceClass::Independence)) +
                        " weak=" + format_double(p.vector->weight(DependenceClass::Weak)) +
                        " strong=" + format_double(p.vector->weight(DependenceClass::Strong)) +
                        " full=" + format_double(p.vector->weight(DependenceClass::Full));
            } else {
                fill = "url(#unclassified)";
                title = detail::xml_escape(id_i) + " x " + detail::xml_escape(id_j) +
                        ": unclassified";
            }
            svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cell) +
                   "\" height=\"" + num(cell) + "\" fill=\"" + fill +
                   "\" stroke=\"#dddddd\" stroke-width=\"1\"><title>" + title +
                   "</title></rect>\n";
        }
    }

    // Sector and market rulings across the grid band.
    for (int i = 1; i < n; ++i) {
        const bool market_break = rows[i].market != rows[i - 1].market;
        const bool sector_break = market_break || rows[i].sector != rows[i - 1].sector;
        if (!sector_break) continue;
        const std::string style = market_break ? "stroke=\"#000000\" stroke-width=\"2\""
                                               : "stroke=\"#666666\" stroke-width=\"1\"";
        const int vx = margin_left + i * cell;
        const int hy = margin_top + i * cell;
        svg += "<line x1=\"" + num(vx) + "\" y1=\"" + num(margin_top) + "\" x2=\"" + num(vx) +
               "\" y2=\"" + num(margin_top + n * cell) + "\" " + style + "/>\n";
        svg += "<line x1=\"" + num(margin_left) + "\" y1=\"" + num(hy) + "\" x2=\"" +
               num(margin_left + n * cell) + "\" y2=\"" + num(hy) + "\" " + style + "/>\n";
    }

    // Labels.
    for (int i = 0; i < n; ++i) {
        const std::string label =
            detail::xml_escape(rows[i].asset_id) + " (" + detail::xml_escape(rows[i].sector) + ")";
        const int ty = margin_top + i * cell + cell - 4;
        svg += "<text x=\"" + num(margin_left - 4) + "\" y=\"" + num(ty) +
               "\" text-anchor=\"end\">" + label + "</text>\n";
        const int cx = margin_left + i * cell + cell - 4;
        svg += "<text x=\"" + num(cx) + "\" y=\"" + num(margin_top - 4) +
               "\" text-anchor=\"start\" transform=\"rotate(-90 " + num(cx) + " " +
               num(margin_top - 4) + ")\">" + label + "</text>\n";
    }

    // Legend.
    {
        const int ly = margin_top + n * cell + 16;
        const struct {
            const char* name;
            std::string fill;
        } legend[] = {
            {"full", detail::rgb_attr(kFullColor)},
            {"strong", detail::rgb_attr(kStrongColor)},
            {"weak", detail::rgb_attr(kWeakColor)},
            {"independence", detail::rgb_attr(kIndependenceColor)},
            {"unclassified", "url(#unclassified)"},
        };
        int lx = margin_left;
        for (const auto& item : legend) {
            svg += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly) +
                   "\" width=\"12\" height=\"12\" fill=\"" + item.fill +
                   "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
            svg += "<text x=\"" + num(lx + 16) + "\" y=\"" + num(ly + 10) + "\">" +
                   std::string(item.name) + "</text>\n";
            lx += 16 + 9 * static_cast<int>(std::string(item.name).size()) + 24;
        }
    }

    svg += "</g>\n</svg>\n";
    return svg;
}

inline void write_heatmap_svg(const DependenceMatrix& matrix, const SectorMeta& meta,
                              const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << render_heatmap(matrix, meta);
}

}  // namespace extdep
