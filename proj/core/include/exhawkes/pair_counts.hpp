#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace exhawkes {

/// Counts of (offspring day u, parent day v) pairs with 1 <= v < u <= T and
/// u - v <= max_lag. Integer-valued when they come from the simulator,
/// real-valued when they are soft responsibilities. Stored dense by
/// (offspring day, lag) since the lag support is small.
class PairCounts {
public:
    PairCounts() = default;
    PairCounts(int horizon_days, int max_lag);

    int horizon() const { return horizon_days_; }
    int max_lag() const { return max_lag_; }
    bool empty() const { return horizon_days_ == 0; }

    /// Count for offspring day u, parent day v; zero outside the support.
    double at(int u, int v) const;
    double at_lag(int u, int lag) const;

    /// Adds count to (u, v); validates the key. Throws std::invalid_argument
    /// on v >= u, out-of-range days, lag > max_lag, or negative count.
    void add(int u, int v, double count);

    /// Row of lags 1..max_lag for offspring day u (index 0 is lag 1).
    std::span<const double> row(int u) const;
    std::span<double> row(int u);

    double total() const;

    /// f(u, v, count) for every nonzero cell, in (u, lag) order.
    template <typename F>
    void for_each(F&& f) const {
        for (int u = 1; u <= horizon_days_; ++u) {
            const double* r = values_.data() + static_cast<std::size_t>(u - 1) * max_lag_;
            for (int lag = 1; lag <= max_lag_ && lag < u; ++lag) {
                if (r[lag - 1] != 0.0) f(u, u - lag, r[lag - 1]);
            }
        }
    }

    /// CSV with header offspring_day,parent_day,count; one row per nonzero cell.
    void write_csv(const std::filesystem::path& path) const;

    /// Reads the CSV form; horizon and max lag are inferred from the keys
    /// unless explicit values are given (pass 0 to infer).
    static PairCounts read_csv(const std::filesystem::path& path, int horizon_days = 0,
                               int max_lag = 0);

private:
    int horizon_days_ = 0;
    int max_lag_ = 0;
    std::vector<double> values_; // (u-1)*max_lag + (lag-1)
};

} // namespace exhawkes
