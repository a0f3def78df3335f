#include "exhawkes/pair_counts.hpp"

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "csv_util.hpp"
#include "exhawkes/errors.hpp"

namespace exhawkes {

PairCounts::PairCounts(int horizon_days, int max_lag)
    : horizon_days_(horizon_days), max_lag_(max_lag) {
    if (horizon_days < 1 || max_lag < 1)
        throw std::invalid_argument("PairCounts: horizon and max lag must be >= 1");
    values_.assign(static_cast<std::size_t>(horizon_days) * max_lag, 0.0);
}

double PairCounts::at(int u, int v) const {
    return at_lag(u, u - v);
}

double PairCounts::at_lag(int u, int lag) const {
    if (u < 1 || u > horizon_days_ || lag < 1 || lag > max_lag_ || lag >= u) return 0.0;
    return values_[static_cast<std::size_t>(u - 1) * max_lag_ + (lag - 1)];
}

void PairCounts::add(int u, int v, double count) {
    const int lag = u - v;
    if (v < 1 || u > horizon_days_ || lag < 1)
        throw std::invalid_argument("PairCounts::add: need 1 <= v < u <= horizon, got (" +
                                    std::to_string(u) + ", " + std::to_string(v) + ")");
    if (lag > max_lag_)
        throw std::invalid_argument("PairCounts::add: lag " + std::to_string(lag) +
                                    " exceeds support cutoff " + std::to_string(max_lag_));
    if (!(count >= 0.0) || !std::isfinite(count))
        throw std::invalid_argument("PairCounts::add: count must be finite and >= 0");
    values_[static_cast<std::size_t>(u - 1) * max_lag_ + (lag - 1)] += count;
}

std::span<const double> PairCounts::row(int u) const {
    return {values_.data() + static_cast<std::size_t>(u - 1) * max_lag_,
            static_cast<std::size_t>(max_lag_)};
}

std::span<double> PairCounts::row(int u) {
    return {values_.data() + static_cast<std::size_t>(u - 1) * max_lag_,
            static_cast<std::size_t>(max_lag_)};
}

double PairCounts::total() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum;
}

void PairCounts::write_csv(const std::filesystem::path& path) const {
    csv::AtomicWriter writer(path);
    auto& out = writer.stream();
    out << "offspring_day,parent_day,count\n";
    char buf[64];
    for_each([&](int u, int v, double count) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", u, v, count);
        out << buf;
    });
    writer.commit();
}

PairCounts PairCounts::read_csv(const std::filesystem::path& path, int horizon_days,
                                int max_lag) {
    auto in = csv::open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw data_error("empty file: " + path.string());

    std::vector<std::tuple<int, int, double>> triples;
    int max_u = 0, max_d = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        const auto fields = csv::split_line(line);
        if (fields.size() < 3)
            throw data_error("line " + std::to_string(line_no) + ": expected 3 fields in " +
                             path.string());
        try {
            const int u = std::stoi(csv::trim(fields[0]));
            const int v = std::stoi(csv::trim(fields[1]));
            const double count = std::stod(csv::trim(fields[2]));
            triples.emplace_back(u, v, count);
            max_u = std::max(max_u, u);
            max_d = std::max(max_d, u - v);
        } catch (const std::exception&) {
            throw data_error("line " + std::to_string(line_no) + ": bad pair row in " +
                             path.string());
        }
    }

    if (horizon_days <= 0) horizon_days = max_u;
    if (max_lag <= 0) max_lag = max_d;
    if (horizon_days <= 0 || max_lag <= 0)
        throw data_error("no pair rows in " + path.string());

    PairCounts pairs(horizon_days, max_lag);
    for (const auto& [u, v, count] : triples) {
        try {
            pairs.add(u, v, count);
        } catch (const std::invalid_argument& e) {
            throw data_error(std::string("bad pair in ") + path.string() + ": " + e.what());
        }
    }
    return pairs;
}

} // namespace exhawkes
