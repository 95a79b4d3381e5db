#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sparsedom {

/// Function on the unit sphere S^{d-1}, uniformly sampled.
/// d = 1: two samples at directions -1, +1, each of measure 1.
/// d = 2: M samples at angles 2*pi*k/M, each of measure 2*pi/M.
struct SphericalFunction {
    int dim = 1;  // ambient dimension
    std::vector<double> values;

    SphericalFunction() = default;
    SphericalFunction(int dim_, std::vector<double> values_) : dim(dim_), values(std::move(values_)) {
        if (dim == 1) {
            if (values.size() != 2) throw std::invalid_argument("S^0 needs exactly 2 samples");
        } else if (dim == 2) {
            if (values.empty()) throw std::invalid_argument("S^1 needs samples");
        } else {
            throw std::invalid_argument("dim must be 1 or 2");
        }
    }

    double cell_measure() const {
        return dim == 1 ? 1.0 : 2.0 * std::numbers::pi / static_cast<double>(values.size());
    }

    double total_measure() const { return cell_measure() * static_cast<double>(values.size()); }

    double integral() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s * cell_measure();
    }

    /// Nearest-sample evaluation at the direction of (x, y) (y ignored for d=1).
    double at_direction(double x, double y = 0.0) const {
        if (dim == 1) return x < 0.0 ? values[0] : values[1];
        const double theta = std::atan2(y, x);  // [-pi, pi]
        const double step = 2.0 * std::numbers::pi / static_cast<double>(values.size());
        auto k = static_cast<long long>(std::llround(theta / step));
        const auto m = static_cast<long long>(values.size());
        return values[static_cast<std::size_t>(((k % m) + m) % m)];
    }

    /// Subtract the mean so the integral vanishes; returns the removed mean.
    double remove_mean() {
        const double mu = integral() / total_measure();
        for (double& v : values) v -= mu;
        return mu;
    }
};

}  // namespace sparsedom
