#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace exhawkes {

/// Estimated intensity mu(t/T, w) stored on the (day t in 1..T,
/// lag w in 1..D) grid. Values are rates per day and non-negative; cells
/// whose local-linear denominator was not positive carry value 0 and an
/// unset evaluated flag. Values beyond lag D are implicitly zero.
struct IntensitySurface {
    int horizon_days = 0; // T
    int lag_cutoff = 0;   // D
    std::vector<double> values;
    std::vector<std::uint8_t> evaluated;
    std::int64_t clipped_cells = 0; // negative ratios clipped to 0 in the last fill

    static IntensitySurface zeros(int horizon_days, int lag_cutoff);
    static IntensitySurface uniform(int horizon_days, int lag_cutoff, double height);

    bool in_range(int t, int w) const {
        return t >= 1 && t <= horizon_days && w >= 1 && w <= lag_cutoff;
    }
    /// Zero outside the grid.
    double at(int t, int w) const {
        return in_range(t, w)
                   ? values[static_cast<std::size_t>(t - 1) * lag_cutoff + (w - 1)]
                   : 0.0;
    }
    bool is_evaluated(int t, int w) const {
        return in_range(t, w) &&
               evaluated[static_cast<std::size_t>(t - 1) * lag_cutoff + (w - 1)] != 0;
    }
    void set(int t, int w, double value, bool eval);

    std::span<const double> row(int t) const;
    double row_sum(int t) const;
    double max_value() const;
};

/// CSV form: day,lag,value,evaluated with one row per cell. Values are
/// written with enough digits to round-trip bit-exactly.
void write_surface_csv(const IntensitySurface& surface, const std::filesystem::path& path);
IntensitySurface read_surface_csv(const std::filesystem::path& path);

} // namespace exhawkes
