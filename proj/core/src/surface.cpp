#include "exhawkes/surface.hpp"

#include <algorithm>
#include <stdexcept>

#include "csv_util.hpp"
#include "exhawkes/errors.hpp"

namespace exhawkes {

IntensitySurface IntensitySurface::zeros(int horizon_days, int lag_cutoff) {
    if (horizon_days < 1 || lag_cutoff < 1)
        throw std::invalid_argument("IntensitySurface: horizon and lag cutoff must be >= 1");
    IntensitySurface s;
    s.horizon_days = horizon_days;
    s.lag_cutoff = lag_cutoff;
    s.values.assign(static_cast<std::size_t>(horizon_days) * lag_cutoff, 0.0);
    s.evaluated.assign(s.values.size(), 0);
    return s;
}

IntensitySurface IntensitySurface::uniform(int horizon_days, int lag_cutoff, double height) {
    IntensitySurface s = zeros(horizon_days, lag_cutoff);
    std::fill(s.values.begin(), s.values.end(), height);
    std::fill(s.evaluated.begin(), s.evaluated.end(), 1);
    return s;
}

void IntensitySurface::set(int t, int w, double value, bool eval) {
    if (!in_range(t, w)) throw std::invalid_argument("IntensitySurface::set out of range");
    const std::size_t i = static_cast<std::size_t>(t - 1) * lag_cutoff + (w - 1);
    values[i] = value;
    evaluated[i] = eval ? 1 : 0;
}

std::span<const double> IntensitySurface::row(int t) const {
    return {values.data() + static_cast<std::size_t>(t - 1) * lag_cutoff,
            static_cast<std::size_t>(lag_cutoff)};
}

double IntensitySurface::row_sum(int t) const {
    double sum = 0.0;
    for (double v : row(t)) sum += v;
    return sum;
}

double IntensitySurface::max_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

void write_surface_csv(const IntensitySurface& surface, const std::filesystem::path& path) {
    csv::AtomicWriter writer(path);
    auto& out = writer.stream();
    out << "day,lag,value,evaluated\n";
    char buf[80];
    for (int t = 1; t <= surface.horizon_days; ++t) {
        for (int w = 1; w <= surface.lag_cutoff; ++w) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%d\n", t, w, surface.at(t, w),
                          surface.is_evaluated(t, w) ? 1 : 0);
            out << buf;
        }
    }
    writer.commit();
}

IntensitySurface read_surface_csv(const std::filesystem::path& path) {
    auto in = csv::open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw data_error("empty file: " + path.string());

    struct Cell {
        int t, w;
        double value;
        bool eval;
    };
    std::vector<Cell> cells;
    int max_t = 0, max_w = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        const auto fields = csv::split_line(line);
        if (fields.size() < 3)
            throw data_error("line " + std::to_string(line_no) + ": expected day,lag,value in " +
                             path.string());
        try {
            Cell c;
            c.t = std::stoi(csv::trim(fields[0]));
            c.w = std::stoi(csv::trim(fields[1]));
            c.value = std::stod(csv::trim(fields[2]));
            c.eval = fields.size() > 3 ? std::stoi(csv::trim(fields[3])) != 0 : true;
            if (c.t < 1 || c.w < 1)
                throw data_error("line " + std::to_string(line_no) + ": bad cell index");
            cells.push_back(c);
            max_t = std::max(max_t, c.t);
            max_w = std::max(max_w, c.w);
        } catch (const data_error&) {
            throw;
        } catch (const std::exception&) {
            throw data_error("line " + std::to_string(line_no) + ": bad surface row in " +
                             path.string());
        }
    }
    if (cells.empty()) throw data_error("no surface rows in " + path.string());

    IntensitySurface s = IntensitySurface::zeros(max_t, max_w);
    for (const auto& c : cells) s.set(c.t, c.w, c.value, c.eval);
    return s;
}

} // namespace exhawkes
