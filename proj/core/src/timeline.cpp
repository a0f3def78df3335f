#include "exhawkes/timeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>

#include "csv_util.hpp"
#include "exhawkes/errors.hpp"

namespace exhawkes {

namespace {

// Howard Hinnant's civil-date algorithms.
int days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

void civil_from_days(int z, int& y, int& m, int& d) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int yr = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = yr + (m <= 2);
}

int last_day_of_month(int y, int m) {
    static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m != 2) return lengths[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](unsigned char c) { return std::isdigit(c); });
}

} // namespace

Date Date::from_civil(int year, int month, int day) {
    return Date{days_from_civil(year, month, day)};
}

Date Date::from_iso(const std::string& text) {
    const std::string t = csv::trim(text);
    if (t.size() != 10 || t[4] != '-' || t[7] != '-' ||
        !all_digits(t.substr(0, 4)) || !all_digits(t.substr(5, 2)) ||
        !all_digits(t.substr(8, 2))) {
        throw data_error("bad date (expected YYYY-MM-DD): '" + text + "'");
    }
    const int y = std::stoi(t.substr(0, 4));
    const int m = std::stoi(t.substr(5, 2));
    const int d = std::stoi(t.substr(8, 2));
    if (m < 1 || m > 12 || d < 1 || d > last_day_of_month(y, m))
        throw data_error("bad date: '" + text + "'");
    return from_civil(y, m, d);
}

std::string Date::to_iso() const {
    int y, m, d;
    civil_from_days(serial, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

std::int64_t CountSeries::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::vector<double> CountSeries::as_doubles() const {
    return {counts.begin(), counts.end()};
}

int CountSeries::day_index(Date d) const {
    const int offset = d - start_date;
    if (offset < 0 || offset >= size())
        throw data_error("date " + d.to_iso() + " outside series " + start_date.to_iso() +
                         ".." + last_date().to_iso());
    return offset + 1;
}

namespace {

std::int64_t parse_count(const std::string& field, std::size_t line_no,
                         const std::string& column) {
    const std::string t = csv::trim(field);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw data_error("line " + std::to_string(line_no) + ": column '" + column +
                         "' is not a non-negative integer: '" + field + "'");
    if (value < 0)
        throw data_error("line " + std::to_string(line_no) + ": column '" + column +
                         "' is negative: " + t);
    return value;
}

struct Row {
    Date date;
    std::int64_t positives;
    std::int64_t hospitalized; // -1 when absent
};

} // namespace

Dataset load_counts(const std::filesystem::path& path, const ColumnMap& columns) {
    auto in = csv::open_input(path);

    std::string line;
    if (!std::getline(in, line)) throw data_error("empty file: " + path.string());
    const auto header = csv::split_line(line);

    auto find_col = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (csv::trim(header[i]) == name) return static_cast<int>(i);
        return -1;
    };
    const int date_col = find_col(columns.date);
    const int pos_col = find_col(columns.positives);
    if (date_col < 0)
        throw config_error("missing column '" + columns.date + "' in " + path.string());
    if (pos_col < 0)
        throw config_error("missing column '" + columns.positives + "' in " + path.string());
    const int hosp_col = find_col(columns.hospitalized); // optional

    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        const auto fields = csv::split_line(line);
        const int needed = std::max({date_col, pos_col, hosp_col});
        if (static_cast<int>(fields.size()) <= needed)
            throw data_error("line " + std::to_string(line_no) + ": too few fields");
        Row row;
        row.date = Date::from_iso(fields[date_col]);
        row.positives = parse_count(fields[pos_col], line_no, columns.positives);
        row.hospitalized =
            hosp_col >= 0 ? parse_count(fields[hosp_col], line_no, columns.hospitalized) : -1;
        rows.push_back(row);
    }
    if (rows.empty()) throw data_error("no data rows in " + path.string());

    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.date < b.date; });

    for (std::size_t i = 1; i < rows.size(); ++i) {
        const int step = rows[i].date - rows[i - 1].date;
        if (step == 0)
            throw data_error("duplicate date " + rows[i].date.to_iso() + " in " + path.string());
        if (step > 1) {
            const Date first_missing = rows[i - 1].date + 1;
            const Date last_missing = rows[i].date - 1;
            std::string range = first_missing.to_iso();
            if (last_missing - first_missing > 0) range += ".." + last_missing.to_iso();
            throw data_error("gap in dates: missing " + range + " in " + path.string());
        }
    }

    Dataset data;
    data.infections.start_date = rows.front().date;
    data.infections.label = columns.positives;
    data.infections.counts.reserve(rows.size());
    for (const auto& row : rows) data.infections.counts.push_back(row.positives);

    if (hosp_col >= 0) {
        CountSeries hosp;
        hosp.start_date = rows.front().date;
        hosp.label = columns.hospitalized;
        hosp.counts.reserve(rows.size());
        for (const auto& row : rows) hosp.counts.push_back(row.hospitalized);
        data.hospitalizations = std::move(hosp);
    }
    return data;
}

void write_counts(const Dataset& data, const std::filesystem::path& path,
                  const ColumnMap& columns) {
    csv::AtomicWriter writer(path);
    auto& out = writer.stream();
    const bool with_hosp = data.hospitalizations.has_value();
    out << columns.date << ',' << columns.positives;
    if (with_hosp) out << ',' << columns.hospitalized;
    out << '\n';
    for (int i = 0; i < data.infections.size(); ++i) {
        out << data.infections.date_at(i).to_iso() << ',' << data.infections.counts[i];
        if (with_hosp) out << ',' << data.hospitalizations->counts[i];
        out << '\n';
    }
    writer.commit();
}

Dataset align(const CountSeries& infections, const CountSeries& hospitalizations) {
    if (infections.counts.empty() || hospitalizations.counts.empty())
        throw data_error("align: both series must be non-empty");

    const Date lo = std::max(infections.start_date, hospitalizations.start_date);
    const Date hi = std::min(infections.last_date(), hospitalizations.last_date());
    if (hi < lo)
        throw data_error("align: date ranges do not overlap (" +
                         infections.start_date.to_iso() + ".." + infections.last_date().to_iso() +
                         " vs " + hospitalizations.start_date.to_iso() + ".." +
                         hospitalizations.last_date().to_iso() + ")");

    auto cut = [&](const CountSeries& s) {
        CountSeries out;
        out.start_date = lo;
        out.label = s.label;
        const int from = lo - s.start_date;
        const int len = hi - lo + 1;
        out.counts.assign(s.counts.begin() + from, s.counts.begin() + from + len);
        return out;
    };

    Dataset data;
    data.infections = cut(infections);
    data.hospitalizations = cut(hospitalizations);
    return data;
}

} // namespace exhawkes
