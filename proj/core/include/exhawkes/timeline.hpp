#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace exhawkes {

/// Calendar date stored as days since 1970-01-01 (proleptic Gregorian).
struct Date {
    int serial = 0;

    static Date from_iso(const std::string& text); // throws data_error on bad input
    static Date from_civil(int year, int month, int day);
    std::string to_iso() const;

    Date operator+(int days) const { return Date{serial + days}; }
    Date operator-(int days) const { return Date{serial - days}; }
    int operator-(Date other) const { return serial - other.serial; }
    auto operator<=>(const Date&) const = default;
};

/// Daily event counts on a contiguous day grid: counts[i] belongs to
/// start_date + i. Day index t (1-based) maps to counts[t-1].
struct CountSeries {
    Date start_date;
    std::vector<std::int64_t> counts;
    std::string label;

    int size() const { return static_cast<int>(counts.size()); }
    Date date_at(int index) const { return start_date + index; }
    Date last_date() const { return start_date + (size() - 1); }
    std::int64_t at_day(int t) const { return counts.at(static_cast<std::size_t>(t - 1)); }
    std::int64_t total() const;

    /// Counts as doubles, for the estimation kernels.
    std::vector<double> as_doubles() const;

    /// 1-based day index of a calendar date; throws data_error if outside range.
    int day_index(Date d) const;
};

struct Dataset {
    CountSeries infections;
    std::optional<CountSeries> hospitalizations;
    double n_scale = 1.0;
};

/// Maps CSV header names to the roles the loader needs.
struct ColumnMap {
    std::string date = "date";
    std::string positives = "new_positives";
    std::string hospitalized = "new_hospitalized";
};

/// Reads a comma-separated file with a header row into a Dataset. Rows are
/// sorted by date; duplicate dates and gaps are errors, as are negative or
/// non-numeric counts (reported with their line number). The hospitalized
/// column is optional.
Dataset load_counts(const std::filesystem::path& path, const ColumnMap& columns = {});

/// Inverse of load_counts for round-tripping and for simulator output.
void write_counts(const Dataset& data, const std::filesystem::path& path,
                  const ColumnMap& columns = {});

/// Truncates both series to the intersection of their date ranges.
/// Empty intersection is a data error.
Dataset align(const CountSeries& infections, const CountSeries& hospitalizations);

} // namespace exhawkes
