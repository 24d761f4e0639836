#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "graphhj/errors.hpp"

namespace graphhj {

/// Scalar function of the edge parameter y in [0, length]. Three shapes
/// cover every input source: a constant, an affine map a + b*y, or node
/// samples interpolated linearly. Cheap to evaluate in tight loops.
class EdgeField {
public:
    EdgeField() : kind_(Kind::Constant), a_(0.0), b_(0.0) {}

    static EdgeField constant(double c) {
        EdgeField f;
        f.kind_ = Kind::Constant;
        f.a_ = c;
        return f;
    }

    /// a + b*y in the edge parameter.
    static EdgeField affine(double a, double b) {
        EdgeField f;
        f.kind_ = Kind::Affine;
        f.a_ = a;
        f.b_ = b;
        return f;
    }

    /// Uniformly spaced samples over [0, length], size >= 2.
    static EdgeField samples(std::vector<double> values, double length) {
        require(values.size() >= 2, Errc::BadArgument, "sampled field needs at least 2 values");
        require(length > 0.0, Errc::BadArgument, "sampled field needs positive length");
        EdgeField f;
        f.kind_ = Kind::Samples;
        f.samples_ = std::move(values);
        f.a_ = length;
        return f;
    }

    double operator()(double y) const {
        switch (kind_) {
            case Kind::Constant: return a_;
            case Kind::Affine: return a_ + b_ * y;
            case Kind::Samples: {
                const auto n = samples_.size() - 1;
                const double t = y / a_ * static_cast<double>(n);
                if (t <= 0.0) return samples_.front();
                if (t >= static_cast<double>(n)) return samples_.back();
                const auto k = static_cast<std::size_t>(t);
                const double frac = t - static_cast<double>(k);
                return samples_[k] + frac * (samples_[k + 1] - samples_[k]);
            }
        }
        return 0.0;
    }

    bool is_constant() const { return kind_ == Kind::Constant; }
    bool is_affine() const { return kind_ == Kind::Affine; }
    bool is_samples() const { return kind_ == Kind::Samples; }
    const std::vector<double>& sample_values() const { return samples_; }
    std::pair<double, double> affine_coeffs() const { return {a_, b_}; }

    /// Same field seen from the opposite edge orientation (y -> length - y).
    EdgeField reversed(double length) const {
        switch (kind_) {
            case Kind::Constant: return *this;
            case Kind::Affine: return affine(a_ + b_ * length, -b_);
            case Kind::Samples: {
                std::vector<double> rev(samples_.rbegin(), samples_.rend());
                return samples(std::move(rev), a_);
            }
        }
        return *this;
    }

private:
    enum class Kind { Constant, Affine, Samples };
    Kind kind_;
    double a_;  // constant value / affine intercept / samples: edge length
    double b_;  // affine slope
    std::vector<double> samples_;
};

}  // namespace graphhj
