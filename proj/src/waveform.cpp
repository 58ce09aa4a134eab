#include "wr/waveform.hpp"

#include "wr/errors.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <string>

namespace wr {

std::vector<double> uniform_grid(double tf, int n_steps) {
    if (n_steps < 1) throw ConfigError("a time grid needs at least one step");
    if (!(tf > 0.0)) throw ConfigError("final time must be positive");
    std::vector<double> grid(static_cast<std::size_t>(n_steps) + 1);
    for (int n = 0; n <= n_steps; ++n) grid[static_cast<std::size_t>(n)] = tf * n / n_steps;
    grid.back() = tf;
    return grid;
}

Waveform::Waveform(std::vector<double> times, std::vector<Vector> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() < 2) throw ConfigError("a waveform needs at least two time points");
    if (times_.size() != values_.size()) throw ConfigError("waveform needs one value per time point");
    if (times_.front() != 0.0) throw ConfigError("waveform grid must start at t = 0");
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) throw ConfigError("waveform grid must be strictly increasing");
        if (values_[i].size() != values_[0].size()) throw ConfigError("waveform values must share one width");
    }
}

Waveform Waveform::constant(std::vector<double> times, const Vector& value) {
    std::vector<Vector> values(times.size(), value);
    return Waveform(std::move(times), std::move(values));
}

Waveform Waveform::sample(std::vector<double> times, const std::function<Vector(double)>& f) {
    std::vector<Vector> values;
    values.reserve(times.size());
    for (double t : times) values.push_back(f(t));
    return Waveform(std::move(times), std::move(values));
}

Vector Waveform::evaluate(double t) const {
    const double tol = node_tolerance();
    if (!(t >= -tol && t <= times_.back() + tol)) {
        throw DomainError("waveform evaluated at t = " + std::to_string(t) + " outside [0, " +
                          std::to_string(times_.back()) + "]");
    }
    auto upper = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = upper == times_.begin() ? 0 : static_cast<std::size_t>(upper - times_.begin()) - 1;
    i = std::min(i, times_.size() - 2);
    if (std::abs(t - times_[i]) <= tol) return values_[i];
    if (std::abs(times_[i + 1] - t) <= tol) return values_[i + 1];
    const double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

Waveform Waveform::restrict_to(std::vector<double> grid) const {
    if (grid.empty() || std::abs(grid.back() - final_time()) > node_tolerance()) {
        throw ConfigError("restriction grid must cover the same interval");
    }
    return sample(std::move(grid), [this](double t) { return evaluate(t); });
}

Waveform relax(const Waveform& fresh, const Waveform& previous, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("relaxation parameter must lie in (0, 1]");
    if (fresh.width() != previous.width()) throw ConfigError("relaxed waveforms must share one width");
    if (theta == 1.0) return fresh;
    const bool same_grid = fresh.times() == previous.times();
    std::vector<Vector> values;
    values.reserve(fresh.size());
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        const Vector old = same_grid ? previous.value(i) : previous.evaluate(fresh.times()[i]);
        values.push_back(theta * fresh.value(i) + (1.0 - theta) * old);
    }
    return Waveform(fresh.times(), std::move(values));
}

double update_norm_at_final(const Waveform& a, const Waveform& b, double dx, int dim) {
    if (a.width() != b.width()) throw ConfigError("compared waveforms must share one width");
    return interface_norm(a.final_value() - b.final_value(), dx, dim);
}

StageWaveform::StageWaveform(std::span<const double> step_grid, double abscissa, const Vector& initial,
                             std::vector<Vector> stage_values, const Vector& final_value)
    : abscissa_(abscissa), wave_(build(step_grid, abscissa, initial, std::move(stage_values), final_value)) {}

std::vector<double> StageWaveform::stage_times(std::span<const double> step_grid, double abscissa) {
    if (!(abscissa > 0.0 && abscissa < 1.0)) throw ConfigError("stage abscissa must lie in (0, 1)");
    std::vector<double> times;
    times.reserve(step_grid.size() + 1);
    times.push_back(0.0);
    for (std::size_t n = 0; n + 1 < step_grid.size(); ++n) {
        times.push_back(step_grid[n] + abscissa * (step_grid[n + 1] - step_grid[n]));
    }
    times.push_back(step_grid.back());
    return times;
}

Waveform StageWaveform::build(std::span<const double> step_grid, double abscissa, const Vector& initial,
                              std::vector<Vector> stage_values, const Vector& final_value) {
    if (stage_values.size() + 1 != step_grid.size()) {
        throw ConfigError("need one stage value per step");
    }
    std::vector<Vector> values;
    values.reserve(stage_values.size() + 2);
    values.push_back(initial);
    for (auto& v : stage_values) values.push_back(std::move(v));
    values.push_back(final_value);
    return Waveform(stage_times(step_grid, abscissa), std::move(values));
}

void write_csv(std::ostream& out, const Waveform& w) {
    out << "t";
    for (Index j = 0; j < w.width(); ++j) out << ",v_" << (j + 1);
    out << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < w.size(); ++i) {
        out << w.times()[i];
        for (Index j = 0; j < w.width(); ++j) out << ',' << w.value(i)[j];
        out << '\n';
    }
}

}  // namespace wr
