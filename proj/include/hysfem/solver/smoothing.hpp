#pragma once

#include <cstddef>
#include <memory>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "hysfem/fem/assembly.hpp"
#include "hysfem/hysteresis/piecewise.hpp"

namespace hysfem::solver {

using hysteresis::ScalarPiecewiseC2;

// Secant test: min(s_a, s_b) <= (f_b - f_a)/(b - a) <= max(s_a, s_b), where s_a is
// the right derivative at a and s_b the left derivative at b. The tolerance covers
// relative roundoff in the slopes and in the secant quotient.
bool tangent_extendable(double a, double f_a, double slope_a, double b, double f_b, double slope_b);

inline constexpr int kMaxWindowTrials = 10000;

// Half-width of a tangent-extendable window around kink `kink_index`: first
// delta = delta0' * contraction^n passing the secant test, where delta0' is delta0
// shrunk to at most half the distance to each neighboring kink.
double detect_window(const ScalarPiecewiseC2& phi, std::size_t kink_index, double delta0, double contraction);

// Two tangent lines y = y_k + s_k (x - x_k).
struct TangentPair {
    double left_x = 0.0, left_y = 0.0, left_slope = 0.0;
    double right_x = 0.0, right_y = 0.0, right_slope = 0.0;

    double left(double x) const { return left_y + left_slope * (x - left_x); }
    double right(double x) const { return right_y + right_slope * (x - right_x); }
    // abscissa where the lines meet (lines must not be parallel)
    double intersection() const;
};

struct Arc {
    double x1 = 0.0, x2 = 0.0;
    double xc = 0.0, yc = 0.0;
    double radius = 0.0;
    double sign = 1.0;  // +1 upper half circle (concave corner), -1 lower (convex corner)
    // (x - xc) / radius at x1 and x2, taken from the line slopes; evaluation maps x
    // linearly onto [u1, u2] so the end slopes hold to rounding even for tiny radii
    double u1 = 0.0, u2 = 0.0;
    double y1 = 0.0;
    double slope1 = 0.0, slope2 = 0.0;

    double value(double x) const;
    double derivative(double x) const;
};

// Arc tangent to the left line at x1 and to the right line at x2. Returns nullopt
// when the slopes coincide (nothing to smooth).
std::optional<Arc> build_arc(const TangentPair& lines, double x1, double x2);

struct SmoothingOptions {
    double initial_window = 1.0;
    double contraction = 0.5;
};

// Arc-smoothed version of a piecewise C^2 function, selected by a smoothing
// parameter epsilon. Each kink owns a ladder of window half-widths built lazily by
// detect_window; for a given epsilon the kink uses the largest rung <= epsilon (the
// first rung when epsilon exceeds it). Windows never overlap, so the smoothed
// function differs from the base only inside the active window of one kink.
// Evaluation mutates the lazily built ladders, so one instance must not be shared
// between threads.
class SmoothedNonlinearity {
public:
    explicit SmoothedNonlinearity(ScalarPiecewiseC2 base, SmoothingOptions options = {});

    void set_epsilon(double eps);
    double epsilon() const noexcept { return eps_; }
    const ScalarPiecewiseC2& base() const noexcept { return base_; }

    // value and derivative of the smoothed function at x
    std::pair<double, double> eval(double x) const;

    // active window half-width of kink j at the current epsilon (0 if the kink is not smoothed)
    double window(std::size_t kink) const;
    // the ladder built so far for kink j
    std::vector<double> ladder(std::size_t kink) const;
    // initial (pre-shrunk) window of kink j; bounds every rung
    double initial_window(std::size_t kink) const;
    // Approximation constant: |smoothed - base| <= mu * eps for all x and eps.
    double approximation_constant() const;

    struct Rung {
        double delta = 0.0;
        TangentPair lines;
        bool smoothed = false;  // false: window below resolution or straight corner
        double chord_slope = 0.0;
        std::optional<Arc> arc;
    };
    // rung data of kink j at the current epsilon (nullptr if the kink has no window)
    const Rung* active_rung(std::size_t kink) const;

private:
    // Rung j of a kink has width top * contraction^j; only passing windows become
    // rungs, so the ladder is the set of passing exponents and can be filled in any order.
    struct KinkCache {
        std::size_t kink = 0;
        double top = 0.0;
        std::vector<std::pair<int, int>> resolved;  // first exponent tried -> passing exponent
        std::vector<std::pair<int, Rung>> rungs;    // sorted by exponent
        int exhausted_at = std::numeric_limits<int>::max();
    };

    KinkCache& cache_for(std::size_t kink) const;
    Rung make_rung(std::size_t kink, double delta) const;
    double rung_width(const KinkCache& cache, int j) const;
    int resolve_exponent(KinkCache& cache, int m) const;
    std::pair<double, double> eval_in_rung(const Rung& rung, double x) const;

    ScalarPiecewiseC2 base_;
    SmoothingOptions options_;
    double eps_ = 1.0;
    mutable std::vector<KinkCache> caches_;
};

// One smoothed nonlinearity per component, all sharing epsilon.
class SmoothedSystem {
public:
    SmoothedSystem(const std::vector<ScalarPiecewiseC2>& phi, SmoothingOptions options = {});

    std::size_t size() const noexcept { return parts_.size(); }
    void set_epsilon(double eps);
    double epsilon() const noexcept { return eps_; }
    const SmoothedNonlinearity& operator[](std::size_t i) const { return parts_[i]; }

    // smoothed F(x) and its diagonal Jacobian
    void eval(const fem::Vector& x, fem::Vector& values, fem::Vector& derivatives) const;
    fem::Vector values(const fem::Vector& x) const;
    // Euclidean norm of the per-node approximation constants.
    double approximation_constant() const;

private:
    std::vector<SmoothedNonlinearity> parts_;
    double eps_ = 1.0;
};

SmoothedNonlinearity smooth_nonlinearity(const ScalarPiecewiseC2& phi, double eps, SmoothingOptions options = {});
std::pair<double, double> eval_smoothed(const SmoothedNonlinearity& s, double x);

// distance of a slope to the hull of the one-sided derivatives of phi at x
double slope_distance(const ScalarPiecewiseC2& phi, double x, double slope);
// Euclidean aggregate over components of the distance between the smoothed
// derivative and the Clarke hull of the base derivatives.
double cdist(const SmoothedSystem& s, const fem::Vector& x);
double cdist(const std::vector<SmoothedNonlinearity>& s, const fem::Vector& x);

}  // namespace hysfem::solver
