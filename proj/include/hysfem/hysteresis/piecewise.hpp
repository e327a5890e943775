#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hysfem/common.hpp"

namespace hysfem::hysteresis {

// Continuous nondecreasing scalar function made of C^2 pieces separated by kinks.
// Piece i covers (kinks[i-1], kinks[i]]; a point sitting exactly on a kink belongs
// to the piece on its left. Each piece evaluator must be valid on a neighborhood of
// its closed interval (the smoothing code evaluates slightly past the ends).
class ScalarPiecewiseC2 {
public:
    using PieceFn = std::function<Jet(std::size_t piece, double x)>;

    ScalarPiecewiseC2();
    ScalarPiecewiseC2(std::vector<double> kinks, PieceFn pieces, double lipschitz_bound,
                      double curvature_bound = 0.0);

    static ScalarPiecewiseC2 affine(double value_at_zero, double slope);

    const std::vector<double>& kinks() const noexcept { return kinks_; }
    std::size_t num_pieces() const noexcept { return kinks_.size() + 1; }
    double lipschitz_bound() const noexcept { return lipschitz_; }
    // bound on |second derivative| inside the pieces
    double curvature_bound() const noexcept { return curvature_; }

    std::size_t piece_index(double x) const noexcept;
    Jet piece(std::size_t index, double x) const { return pieces_(index, x); }
    Jet operator()(double x) const { return pieces_(piece_index(x), x); }
    double value(double x) const { return (*this)(x).value; }

    // One-sided derivatives; they differ only at kinks.
    double left_derivative(double x) const;
    double right_derivative(double x) const;

    // A point strictly inside piece i (used to pick the active branch of each piece).
    double piece_point(std::size_t index) const;

    // Largest |left value - right value| over all kinks.
    double max_continuity_defect() const;

private:
    std::vector<double> kinks_;
    PieceFn pieces_;
    double lipschitz_ = 0.0;
    double curvature_ = 0.0;
};

}  // namespace hysfem::hysteresis
