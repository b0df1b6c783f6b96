// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo sweeps over (N, SNR, trial) with paired channel draws, CSV
// emission and parsing, per-point summaries and SVG line charts.
//
// Config files are flat `key = value` text; see configs/README.md for the
// grammar and the list of keys.

#ifndef MILAC_EXPERIMENTS_HPP
#define MILAC_EXPERIMENTS_HPP

#include "milac/channels.hpp"
#include "milac/linalg.hpp"
#include "milac/wmmse.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

namespace milac {

enum class Scheme { milac, milac_fulldim, digital };

inline std::string to_string(Scheme s) {
    switch (s) {
    case Scheme::milac: return "milac";
    case Scheme::milac_fulldim: return "milac_fulldim";
    case Scheme::digital: return "digital";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view name) {
    if (name == "milac") return Scheme::milac;
    if (name == "milac_fulldim") return Scheme::milac_fulldim;
    if (name == "digital") return Scheme::digital;
    throw ValidationError("unknown scheme '" + std::string(name) + "'");
}

struct ScenarioConfig {
    int N = 64;
    int K = 4;
    ChannelModel channel = ChannelModel::rayleigh;
    GeometricChannelParams geometry;
    std::vector<double> snr_grid_db{0.0};
    std::vector<int> n_grid;  // empty: use {N}
    int trials = 100;
    std::uint64_t seed = 1;
    std::vector<Scheme> schemes{Scheme::milac, Scheme::digital};
    SolverConfig solver;      // noise is overwritten per SNR point
    bool warm_start = false;  // reuse the previous SNR point's solution
    bool timing = false;      // record wall_time_ms; off keeps output reproducible
    bool export_channels = false;
    std::string output = "results.csv";

    std::vector<int> antenna_grid() const { return n_grid.empty() ? std::vector<int>{N} : n_grid; }

    void validate() const {
        if (trials < 1) throw ValidationError("config: trials must be >= 1");
        if (K < 1) throw ValidationError("config: K must be >= 1");
        if (snr_grid_db.empty()) throw ValidationError("config: snr_db grid is empty");
        if (schemes.empty()) throw ValidationError("config: no schemes requested");
        const auto grid = antenna_grid();
        if (grid.empty()) throw ValidationError("config: antenna grid is empty");
        for (int n : grid)
            if (n < K) throw ValidationError("config: every antenna count must be >= K");
        for (double s : snr_grid_db)
            if (!std::isfinite(s)) throw ValidationError("config: SNR values must be finite");
        if (geometry.paths < 1) throw ValidationError("config: paths must be >= 1");
        if (!(solver.budget > 0.0)) throw ValidationError("config: budget must be positive");
        if (!(solver.eps_out > 0.0) || !(solver.eps_in > 0.0))
            throw ValidationError("config: tolerances must be positive");
        if (solver.max_outer < 1 || solver.max_inner < 1)
            throw ValidationError("config: iteration caps must be >= 1");
        std::set<Scheme> seen(schemes.begin(), schemes.end());
        if (seen.size() != schemes.size()) throw ValidationError("config: duplicate scheme");
    }
};

// ---------------------------------------------------------------------------
// Config parsing.

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& value, const std::string& key) {
    std::string v = trim(value);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ValidationError("config: '" + key + "' expects a list like [a, b]");
    std::vector<std::string> items;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ValidationError("config: empty entry in list '" + key + "'");
        items.push_back(item);
    }
    return items;
}

template <class T>
T parse_number(const std::string& text, const std::string& key) {
    T out{};
    const std::string t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ValidationError("config: '" + key + "' has invalid value '" + t + "'");
    return out;
}

inline bool parse_bool(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ValidationError("config: '" + key + "' expects true or false");
}

// Scalar or list: "5" and "[5]" both give {5}.
inline std::vector<std::string> scalar_or_list(const std::string& value, const std::string& key) {
    const std::string v = trim(value);
    if (!v.empty() && v.front() == '[') return split_list(v, key);
    return {v};
}

} // namespace detail

inline ScenarioConfig parse_config(std::istream& in) {
    using namespace detail;
    ScenarioConfig c;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError("config line " + std::to_string(lineno) + ": empty key or value");
        if (!seen.insert(key).second) throw ValidationError("config: duplicate key '" + key + "'");

        if (key == "N") {
            c.N = parse_number<int>(value, key);
        } else if (key == "K") {
            c.K = parse_number<int>(value, key);
        } else if (key == "channel") {
            if (value == "rayleigh") {
                c.channel = ChannelModel::rayleigh;
            } else if (value == "clustered") {
                c.channel = ChannelModel::clustered;
            } else if (value.rfind("clustered(", 0) == 0 && value.back() == ')') {
                c.channel = ChannelModel::clustered;
                c.geometry.paths = parse_number<int>(value.substr(10, value.size() - 11), key);
            } else {
                throw ValidationError("config: channel must be rayleigh, clustered or clustered(L)");
            }
        } else if (key == "paths") {
            c.geometry.paths = parse_number<int>(value, key);
        } else if (key == "snr_db") {
            c.snr_grid_db.clear();
            for (const auto& s : scalar_or_list(value, key)) c.snr_grid_db.push_back(parse_number<double>(s, key));
        } else if (key == "n_grid") {
            c.n_grid.clear();
            for (const auto& s : scalar_or_list(value, key)) c.n_grid.push_back(parse_number<int>(s, key));
        } else if (key == "trials") {
            c.trials = parse_number<int>(value, key);
        } else if (key == "seed") {
            c.seed = parse_number<std::uint64_t>(value, key);
        } else if (key == "schemes") {
            c.schemes.clear();
            for (const auto& s : scalar_or_list(value, key)) c.schemes.push_back(parse_scheme(s));
        } else if (key == "budget") {
            c.solver.budget = parse_number<double>(value, key);
        } else if (key == "eps_out") {
            c.solver.eps_out = parse_number<double>(value, key);
        } else if (key == "eps_in") {
            c.solver.eps_in = parse_number<double>(value, key);
        } else if (key == "max_outer") {
            c.solver.max_outer = parse_number<int>(value, key);
        } else if (key == "max_inner") {
            c.solver.max_inner = parse_number<int>(value, key);
        } else if (key == "warm_start") {
            c.warm_start = parse_bool(value, key);
        } else if (key == "timing") {
            c.timing = parse_bool(value, key);
        } else if (key == "export_channels") {
            c.export_channels = parse_bool(value, key);
        } else if (key == "output") {
            c.output = value;
        } else {
            throw ValidationError("config: unknown key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    return parse_config(in);
}

// ---------------------------------------------------------------------------
// Sweeps.

struct SweepRecord {
    std::string scheme;
    int N = 0;
    int K = 0;
    double snr_db = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double sum_rate_bits = 0.0;
    int iterations = 0;
    bool converged = false;
    double wall_time_ms = 0.0;

    bool operator==(const SweepRecord&) const = default;
};

struct ChannelDraw {
    int N = 0;
    int K = 0;
    int trial = 0;
    CMat H;
};

struct SweepOutput {
    std::vector<SweepRecord> records;
    std::vector<ChannelDraw> channels;   // filled when export_channels is set
    std::vector<std::string> failures;   // solver exceptions, one line each
};

inline ChannelMatrix draw_channel(const ScenarioConfig& c, int N, int trial) {
    const RngStreams streams(c.seed);
    const auto t = static_cast<std::uint32_t>(trial);
    return c.channel == ChannelModel::rayleigh ? rayleigh_channel(N, c.K, streams, t)
                                               : clustered_channel(N, c.K, c.geometry, streams, t);
}

/// Runs every (N, trial) unit on `threads` workers. Records come back in
/// (N, SNR, trial, scheme) order whatever the thread count. Channel draws
/// depend only on (seed, trial, user), so all schemes and SNR points of a
/// trial share one realisation.
inline SweepOutput run_sweep(const ScenarioConfig& c, unsigned threads = 1) {
    c.validate();
    const auto grid = c.antenna_grid();
    const std::size_t n_snr = c.snr_grid_db.size();
    const std::size_t n_sch = c.schemes.size();
    const std::size_t n_trials = static_cast<std::size_t>(c.trials);
    const std::size_t units = grid.size() * n_trials;

    SweepOutput out;
    out.records.resize(grid.size() * n_snr * n_trials * n_sch);
    if (c.export_channels) out.channels.resize(units);
    std::vector<std::vector<std::string>> unit_failures(units);

    auto slot = [&](std::size_t gi, std::size_t si, std::size_t t, std::size_t m) {
        return ((gi * n_snr + si) * n_trials + t) * n_sch + m;
    };

    auto run_unit = [&](std::size_t u) {
        const std::size_t gi = u / n_trials;
        const std::size_t t = u % n_trials;
        const int N = grid[gi];
        const int trial = static_cast<int>(t);
        const ChannelMatrix ch = draw_channel(c, N, trial);
        if (c.export_channels) out.channels[u] = {N, c.K, trial, ch.H};

        std::optional<ReducedChannel> rc;
        std::vector<std::optional<SplitInit>> split_warm(n_sch);
        std::vector<std::optional<CMat>> digital_warm(n_sch);
        try {
            rc = reduce_dimension(ch.H);
        } catch (const Error& e) {
            unit_failures[u].push_back("N=" + std::to_string(N) + " trial=" + std::to_string(trial) + ": " + e.what());
        }

        for (std::size_t si = 0; si < n_snr; ++si) {
            SolverConfig cfg = c.solver;
            cfg.noise = normalized_noise(c.snr_grid_db[si], cfg.budget);
            for (std::size_t m = 0; m < n_sch; ++m) {
                SweepRecord& r = out.records[slot(gi, si, t, m)];
                r.scheme = to_string(c.schemes[m]);
                r.N = N;
                r.K = c.K;
                r.snr_db = c.snr_grid_db[si];
                r.trial = trial;
                r.seed = c.seed;
                if (!rc) continue;
                const auto start = std::chrono::steady_clock::now();
                try {
                    SumRateResult res;
                    switch (c.schemes[m]) {
                    case Scheme::milac:
                        res = wmmse_lc(*rc, cfg, {}, split_warm[m]);
                        if (c.warm_start) split_warm[m] = SplitInit{res.state.Y, res.state.p};
                        break;
                    case Scheme::milac_fulldim:
                        res = wmmse_lc_fulldim(rc->H, cfg, {}, split_warm[m]);
                        if (c.warm_start) split_warm[m] = SplitInit{res.state.Y, res.state.p};
                        break;
                    case Scheme::digital:
                        res = digital_wmmse(*rc, cfg, digital_warm[m]);
                        if (c.warm_start) digital_warm[m] = res.W;
                        break;
                    }
                    r.sum_rate_bits = res.rate;
                    r.iterations = res.iterations;
                    r.converged = res.converged;
                } catch (const Error& e) {
                    r.converged = false;
                    unit_failures[u].push_back(r.scheme + " N=" + std::to_string(N) + " snr=" +
                                               std::to_string(r.snr_db) + " trial=" + std::to_string(trial) +
                                               ": " + e.what());
                }
                if (c.timing) {
                    const auto stop = std::chrono::steady_clock::now();
                    r.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
                }
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(units)));
    if (workers == 1) {
        for (std::size_t u = 0; u < units; ++u) run_unit(u);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t u = next++; u < units; u = next++) run_unit(u);
            });
        for (auto& th : pool) th.join();
    }
    for (auto& f : unit_failures) out.failures.insert(out.failures.end(), f.begin(), f.end());
    return out;
}

// ---------------------------------------------------------------------------
// CSV.

inline constexpr const char* kCsvHeader =
    "scheme,N,K,snr_db,trial,seed,sum_rate_bits,iterations,converged,wall_time_ms";

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
    os << kCsvHeader << '\n';
    for (const auto& r : records)
        os << r.scheme << ',' << r.N << ',' << r.K << ',' << format_double(r.snr_db) << ',' << r.trial << ','
           << r.seed << ',' << format_double(r.sum_rate_bits) << ',' << r.iterations << ','
           << (r.converged ? 1 : 0) << ',' << format_double(r.wall_time_ms) << '\n';
}

inline void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    if (records.empty()) throw ValidationError("emit_csv: no records");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("emit_csv: cannot write '" + path + "'");
    write_csv(os, records);
    if (!os) throw IoError("emit_csv: write failed for '" + path + "'");
}

inline std::vector<SweepRecord> parse_csv(std::istream& in) {
    using detail::parse_number;
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != kCsvHeader)
        throw ValidationError("csv: missing or unexpected header");
    std::vector<SweepRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(detail::trim(cell));
        if (f.size() != 10) throw ValidationError("csv line " + std::to_string(lineno) + ": expected 10 fields");
        SweepRecord r;
        r.scheme = f[0];
        r.N = parse_number<int>(f[1], "N");
        r.K = parse_number<int>(f[2], "K");
        r.snr_db = parse_number<double>(f[3], "snr_db");
        r.trial = parse_number<int>(f[4], "trial");
        r.seed = parse_number<std::uint64_t>(f[5], "seed");
        r.sum_rate_bits = parse_number<double>(f[6], "sum_rate_bits");
        r.iterations = parse_number<int>(f[7], "iterations");
        if (f[8] != "0" && f[8] != "1") throw ValidationError("csv: converged must be 0 or 1");
        r.converged = f[8] == "1";
        r.wall_time_ms = parse_number<double>(f[9], "wall_time_ms");
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<SweepRecord> load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("csv: cannot open '" + path + "'");
    return parse_csv(in);
}

// Complex entries are written as `re+imj` / `re-imj`.
inline std::string format_complex(cplx z) {
    std::string s = format_double(z.real());
    const double im = z.imag();
    s += (std::signbit(im) ? "-" : "+");
    s += format_double(std::abs(im));
    s += 'j';
    return s;
}

inline cplx parse_complex(std::string_view text) {
    const std::string t = detail::trim(text);
    if (t.size() < 2 || t.back() != 'j') throw ValidationError("complex: expected re+imj, got '" + t + "'");
    // The separating sign is the last '+' or '-' not belonging to an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size() - 1; i-- > 1;)
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    if (split == std::string::npos) throw ValidationError("complex: expected re+imj, got '" + t + "'");
    const double re = detail::parse_number<double>(t.substr(0, split), "re");
    double im = detail::parse_number<double>(t.substr(split + 1, t.size() - split - 2), "im");
    if (t[split] == '-') im = -im;
    return {re, im};
}

/// One line per draw: N,K,trial followed by the K x N entries of H in row-major order.
inline void write_channels(std::ostream& os, const std::vector<ChannelDraw>& draws) {
    os << "N,K,trial,H_row_major\n";
    for (const auto& d : draws) {
        os << d.N << ',' << d.K << ',' << d.trial;
        for (Index k = 0; k < d.H.rows(); ++k)
            for (Index n = 0; n < d.H.cols(); ++n) os << ',' << format_complex(d.H(k, n));
        os << '\n';
    }
}

inline std::vector<ChannelDraw> parse_channels(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "N,K,trial,H_row_major")
        throw ValidationError("channels: missing or unexpected header");
    std::vector<ChannelDraw> out;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() < 3) throw ValidationError("channels: short line");
        ChannelDraw d;
        d.N = detail::parse_number<int>(f[0], "N");
        d.K = detail::parse_number<int>(f[1], "K");
        d.trial = detail::parse_number<int>(f[2], "trial");
        if (d.N < 1 || d.K < 1 || f.size() != 3 + static_cast<std::size_t>(d.N) * static_cast<std::size_t>(d.K))
            throw ValidationError("channels: entry count does not match N x K");
        d.H.resize(d.K, d.N);
        std::size_t i = 3;
        for (int k = 0; k < d.K; ++k)
            for (int n = 0; n < d.N; ++n) d.H(k, n) = parse_complex(f[i++]);
        out.push_back(std::move(d));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Summaries.

struct SummaryRow {
    std::string scheme;
    int N = 0;
    double snr_db = 0.0;
    std::size_t count = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    double ratio_to_digital = std::nan("");  // NaN when no digital baseline
};

/// Groups by (scheme, N, snr_db); rows follow first appearance in `records`.
inline std::vector<SummaryRow> summarize(const std::vector<SweepRecord>& records) {
    using Key = std::tuple<std::string, int, double>;
    std::vector<Key> order;
    std::map<Key, std::vector<double>> groups;
    for (const auto& r : records) {
        Key k{r.scheme, r.N, r.snr_db};
        auto [it, fresh] = groups.try_emplace(k);
        if (fresh) order.push_back(k);
        it->second.push_back(r.sum_rate_bits);
    }
    std::vector<SummaryRow> rows;
    std::map<std::pair<int, double>, double> digital_mean;
    for (const auto& k : order) {
        const auto& v = groups[k];
        SummaryRow row{std::get<0>(k), std::get<1>(k), std::get<2>(k), v.size()};
        double s = 0.0;
        for (double x : v) s += x;
        row.mean = s / static_cast<double>(v.size());
        if (v.size() > 1) {
            double ss = 0.0;
            for (double x : v) ss += (x - row.mean) * (x - row.mean);
            row.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
        }
        if (row.scheme == "digital") digital_mean[{row.N, row.snr_db}] = row.mean;
        rows.push_back(row);
    }
    for (auto& row : rows) {
        const auto it = digital_mean.find({row.N, row.snr_db});
        if (it != digital_mean.end() && it->second > 0.0) row.ratio_to_digital = row.mean / it->second;
    }
    return rows;
}

inline void write_summary(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "scheme,N,snr_db,trials,mean_bits,stderr_bits,ratio_to_digital\n";
    for (const auto& r : rows)
        os << r.scheme << ',' << r.N << ',' << format_double(r.snr_db) << ',' << r.count << ','
           << format_double(r.mean) << ',' << format_double(r.stderr_) << ','
           << (std::isnan(r.ratio_to_digital) ? std::string() : format_double(r.ratio_to_digital)) << '\n';
}

// ---------------------------------------------------------------------------
// SVG line charts of the mean curves.

inline std::string format_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

inline std::string svg_line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                                  const std::vector<Series>& series, bool log_x = false) {
    const double W = 640, Hgt = 420, ml = 70, mr = 150, mt = 40, mb = 55;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    auto fx = [&](double x) { return log_x ? std::log2(x) : x; };
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            x0 = std::min(x0, fx(x));
            x1 = std::max(x1, fx(x));
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    y0 = std::min(0.0, y0);
    if (y1 <= y0) y1 = y0 + 1;
    y1 *= 1.05;
    auto px = [&](double x) { return ml + (fx(x) - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return Hgt - mb - (y - y0) / (y1 - y0) * (Hgt - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hgt
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << (W - mr + ml) / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
    o << "<line x1=\"" << ml << "\" y1=\"" << Hgt - mb << "\" x2=\"" << W - mr << "\" y2=\"" << Hgt - mb
      << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << Hgt - mb
      << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double yv = y0 + (y1 - y0) * i / 5.0;
        o << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << format_tick(yv)
          << "</text>\n";
        o << "<line x1=\"" << ml << "\" y1=\"" << py(yv) << "\" x2=\"" << W - mr << "\" y2=\"" << py(yv)
          << "\" stroke=\"#ddd\"/>\n";
    }
    std::set<double> xs;
    for (const auto& s : series)
        for (auto [x, y] : s.points) xs.insert(x);
    for (double x : xs)
        o << "<text x=\"" << px(x) << "\" y=\"" << Hgt - mb + 16 << "\" text-anchor=\"middle\">" << format_tick(x)
          << "</text>\n";
    o << "<text x=\"" << (W - mr + ml) / 2 << "\" y=\"" << Hgt - 12 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
    o << "<text transform=\"translate(18," << (Hgt - mb + mt) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << ylabel << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* col = colors[i % 7];
        o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
        for (auto [x, y] : series[i].points) o << px(x) << ',' << py(y) << ' ';
        o << "\"/>\n";
        for (auto [x, y] : series[i].points)
            o << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
        const double ly = mt + 10 + 18.0 * static_cast<double>(i);
        o << "<line x1=\"" << W - mr + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - mr + 32 << "\" y2=\"" << ly
          << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - mr + 38 << "\" y=\"" << ly + 4 << "\">" << series[i].label << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

/// Sum rate vs SNR (one chart per N) and, with several antenna counts, sum
/// rate vs N (one chart per SNR). Returns the written paths.
inline std::vector<std::string> write_plots(const std::vector<SummaryRow>& rows, const std::string& stem) {
    std::vector<std::string> written;
    std::set<int> Ns;
    std::set<double> snrs;
    std::vector<std::string> schemes;
    for (const auto& r : rows) {
        Ns.insert(r.N);
        snrs.insert(r.snr_db);
        if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end()) schemes.push_back(r.scheme);
    }
    auto emit = [&](const std::string& path, const std::string& svg) {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("plots: cannot write '" + path + "'");
        os << svg;
        written.push_back(path);
    };
    if (snrs.size() > 1) {
        for (int n : Ns) {
            std::vector<Series> series;
            for (const auto& s : schemes) {
                Series se{s, {}};
                for (const auto& r : rows)
                    if (r.scheme == s && r.N == n) se.points.emplace_back(r.snr_db, r.mean);
                std::sort(se.points.begin(), se.points.end());
                if (!se.points.empty()) series.push_back(se);
            }
            emit(stem + "_snr_N" + std::to_string(n) + ".svg",
                 svg_line_chart("Sum rate vs SNR, N = " + std::to_string(n), "SNR (dB)", "Sum rate (bits)", series));
        }
    }
    if (Ns.size() > 1) {
        for (double snr : snrs) {
            std::vector<Series> series;
            for (const auto& s : schemes) {
                Series se{s, {}};
                for (const auto& r : rows)
                    if (r.scheme == s && r.snr_db == snr) se.points.emplace_back(static_cast<double>(r.N), r.mean);
                std::sort(se.points.begin(), se.points.end());
                if (!se.points.empty()) series.push_back(se);
            }
            emit(stem + "_N_snr" + format_tick(snr) + ".svg",
                 svg_line_chart("Sum rate vs N, SNR = " + format_tick(snr) + " dB", "N", "Sum rate (bits)", series,
                                true));
        }
    }
    return written;
}

} // namespace milac

#endif // MILAC_EXPERIMENTS_HPP
