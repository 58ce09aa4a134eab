#pragma once

#include "wr/fem_core.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace wr {

/// Equidistant grid t_n = n * tf / n_steps, with the last node exactly tf.
std::vector<double> uniform_grid(double tf, int n_steps);

/// Piecewise-linear function of time with vector values, defined on
/// [0, T_f] = [times.front(), times.back()].
///
/// Immutable after construction. Evaluation at a grid node (within a
/// relative 1e-12 of T_f) returns the stored value bit-exactly; evaluation
/// outside [0, T_f] throws DomainError.
class Waveform {
public:
    Waveform(std::vector<double> times, std::vector<Vector> values);

    static Waveform constant(std::vector<double> times, const Vector& value);
    static Waveform sample(std::vector<double> times, const std::function<Vector(double)>& f);

    const std::vector<double>& times() const { return times_; }
    const std::vector<Vector>& values() const { return values_; }
    const Vector& value(std::size_t i) const { return values_[i]; }
    const Vector& final_value() const { return values_.back(); }
    double final_time() const { return times_.back(); }
    std::size_t size() const { return times_.size(); }
    std::size_t steps() const { return times_.size() - 1; }
    Index width() const { return values_.front().size(); }

    Vector evaluate(double t) const;
    /// Sample this waveform on another grid covering the same interval.
    Waveform restrict_to(std::vector<double> grid) const;

private:
    double node_tolerance() const { return 1e-12 * times_.back(); }

    std::vector<double> times_;
    std::vector<Vector> values_;
};

/// theta * fresh + (1 - theta) * previous, on the grid of `fresh`;
/// `previous` is interpolated where the grids differ.
Waveform relax(const Waveform& fresh, const Waveform& previous, double theta);

/// || a(T_f) - b(T_f) ||_Gamma
double update_norm_at_final(const Waveform& a, const Waveform& b, double dx, int dim);

/// Flux sequence located at the first-stage abscissae t_n + c * dt_n of a
/// step grid. The value at t = 0 is the initial flux and the value at T_f is
/// taken from the last step so the sequence covers [0, T_f] without
/// extrapolation.
class StageWaveform {
public:
    StageWaveform(std::span<const double> step_grid, double abscissa, const Vector& initial,
                  std::vector<Vector> stage_values, const Vector& final_value);

    const Waveform& wave() const { return wave_; }
    Vector evaluate(double t) const { return wave_.evaluate(t); }
    double abscissa() const { return abscissa_; }

    /// {0, t_0 + c dt_0, ..., t_{N-1} + c dt_{N-1}, T_f}
    static std::vector<double> stage_times(std::span<const double> step_grid, double abscissa);

private:
    static Waveform build(std::span<const double> step_grid, double abscissa, const Vector& initial,
                          std::vector<Vector> stage_values, const Vector& final_value);

    double abscissa_;
    Waveform wave_;
};

/// CSV with header `t,v_1,...,v_s` and one row per grid node.
void write_csv(std::ostream& out, const Waveform& w);

}  // namespace wr
