// Development tool: writes the bundled 6-asset synthetic price fixture
// (data/synthetic6.csv) and its sector metadata (data/synthetic6_meta.csv).
//
// Six assets over 1645 consecutive days (823 retained at offset 0, so 822
// every-other-day returns, mirroring the intended sample size):
//   UEN1/UEN2  share one Pareto radius on a fixed ray      (full pair)
//   CTK1/UTK1  share a radius with angles in [0.35, 0.65]  (strong pair)
//   CUT1/CUT2  independent Pareto magnitudes               (independence)
// Daily prices are built so that the every-other-day absolute log returns
// equal the generated magnitudes exactly (up to print round-trip).

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "extdep/core.hpp"
#include "extdep/matrix.hpp"
#include "extdep/rng.hpp"

namespace {

// Howard Hinnant's civil-date algorithm.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::string civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u",
                  static_cast<long long>(y + (m <= 2)), m, d);
    return buf;
}

double capped_pareto(double alpha, extdep::RandomStream& rng) {
    const double r = std::pow(rng.next_open_unit(), -1.0 / alpha);
    return std::min(r, 400.0);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string out_dir = argc > 1 ? argv[1] : "data";
    const std::size_t n_returns = 822;
    const double scale = 0.005;

    extdep::RandomStream root(20160104);
    std::array<std::vector<double>, 6> returns;
    for (auto& r : returns) r.reserve(n_returns);

    extdep::RandomStream full_rng = root.substream(1);
    extdep::RandomStream strong_rng = root.substream(2);
    extdep::RandomStream indep_rng = root.substream(3);
    for (std::size_t i = 0; i < n_returns; ++i) {
        const double r_full = capped_pareto(1.3, full_rng) * scale;
        returns[0].push_back(r_full * 0.45);
        returns[1].push_back(r_full * 0.55);

        const double r_strong = capped_pareto(1.6, strong_rng) * scale;
        const double theta = 0.35 + 0.3 * strong_rng.next_unit();
        returns[2].push_back(r_strong * theta);
        returns[3].push_back(r_strong * (1.0 - theta));

        returns[4].push_back(capped_pareto(1.3, indep_rng) * scale);
        returns[5].push_back(capped_pareto(1.3, indep_rng) * scale);
    }

    struct Asset {
        const char* id;
        const char* market;
        const char* sector;
    };
    const std::array<Asset, 6> assets{{{"UEN1", "US", "Energy"},
                                       {"UEN2", "US", "Energy"},
                                       {"CTK1", "CN", "Technology"},
                                       {"UTK1", "US", "Technology"},
                                       {"CUT1", "CN", "Utilities"},
                                       {"CUT2", "CN", "Utilities"}}};

    const std::int64_t start = days_from_civil(2016, 1, 4);
    extdep::RandomStream sign_rng = root.substream(4);

    std::ofstream prices(out_dir + "/synthetic6.csv", std::ios::binary);
    if (!prices) {
        std::fprintf(stderr, "cannot write %s/synthetic6.csv\n", out_dir.c_str());
        return 1;
    }
    prices << "asset_id,market,sector,date,adjusted_close\n";
    for (std::size_t a = 0; a < assets.size(); ++a) {
        extdep::RandomStream signs = sign_rng.substream(a);
        double log_price = std::log(100.0 + 10.0 * static_cast<double>(a));
        std::vector<double> log_prices;
        log_prices.reserve(2 * n_returns + 1);
        log_prices.push_back(log_price);
        for (std::size_t k = 0; k < n_returns; ++k) {
            const double step = (signs.next_u64() & 1u) ? returns[a][k] : -returns[a][k];
            log_prices.push_back(log_price + 0.5 * step);   // intermediate day
            log_price += step;
            log_prices.push_back(log_price);
        }
        for (std::size_t d = 0; d < log_prices.size(); ++d) {
            prices << assets[a].id << ',' << assets[a].market << ',' << assets[a].sector << ','
                   << civil_from_days(start + static_cast<std::int64_t>(d)) << ','
                   << extdep::format_double(std::exp(log_prices[d])) << '\n';
        }
    }
    prices.close();

    std::ofstream meta(out_dir + "/synthetic6_meta.csv", std::ios::binary);
    meta << "asset_id,market,sector\n";
    for (const Asset& a : assets)
        meta << a.id << ',' << a.market << ',' << a.sector << '\n';
    meta.close();

    std::printf("wrote %s/synthetic6.csv and %s/synthetic6_meta.csv\n", out_dir.c_str(),
                out_dir.c_str());
    return 0;
}
