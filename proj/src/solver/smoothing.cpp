#include "hysfem/solver/smoothing.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

namespace hysfem::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// windows narrower than this (relative to the kink position) are not smoothed
constexpr double kMinRelativeWindow = 8.0 * DBL_EPSILON;
constexpr double kMinAbsoluteWindow = 1e-200;

bool window_resolvable(double a, double delta) {
    return delta > kMinRelativeWindow * std::abs(a) && delta > kMinAbsoluteWindow;
}

bool slopes_equal(double s1, double s2) {
    return std::abs(s1 - s2) <= 1e-14 * std::max({1.0, std::abs(s1), std::abs(s2)});
}

double arc_u(const Arc& arc, double x) {
    if (x <= arc.x1) return arc.u1;
    if (x >= arc.x2) return arc.u2;
    return arc.u1 + (arc.u2 - arc.u1) * ((x - arc.x1) / (arc.x2 - arc.x1));
}

double cos_of(double u) { return std::sqrt(std::max(0.0, (1.0 - u) * (1.0 + u))); }

// (x - xc) / radius where the circle has the given slope
double u_of_slope(double slope, double sign) { return -sign * slope / std::sqrt(1.0 + slope * slope); }

}  // namespace

bool tangent_extendable(double a, double f_a, double slope_a, double b, double f_b, double slope_b) {
    if (!(b > a)) throw InvalidArgument("tangent_extendable: requires a < b");
    const double secant = (f_b - f_a) / (b - a);
    const double lo = std::min(slope_a, slope_b);
    const double hi = std::max(slope_a, slope_b);
    const double tol = 1e-14 * std::max({1.0, std::abs(slope_a), std::abs(slope_b)}) +
                       4.0 * DBL_EPSILON * (std::abs(f_a) + std::abs(f_b)) / (b - a);
    return lo - tol <= secant && secant <= hi + tol;
}

double detect_window(const ScalarPiecewiseC2& phi, std::size_t kink_index, double delta0, double contraction) {
    const auto& kinks = phi.kinks();
    if (kink_index >= kinks.size()) throw InvalidArgument("detect_window: kink index out of range");
    if (!(delta0 > 0.0)) throw InvalidArgument("detect_window: delta0 must be positive");
    if (!(contraction > 0.0 && contraction < 1.0)) throw InvalidArgument("detect_window: contraction must lie in (0, 1)");

    const double a = kinks[kink_index];
    double delta = delta0;
    if (kink_index > 0) delta = std::min(delta, 0.5 * (a - kinks[kink_index - 1]));
    if (kink_index + 1 < kinks.size()) delta = std::min(delta, 0.5 * (kinks[kink_index + 1] - a));

    for (int trial = 0; trial < kMaxWindowTrials; ++trial) {
        const double lo = a - delta;
        const double hi = a + delta;
        if (!window_resolvable(a, delta) || !(hi > lo)) return delta;
        const Jet left = phi.piece(kink_index, lo);
        const Jet right = phi.piece(kink_index + 1, hi);
        if (tangent_extendable(lo, left.value, left.d1, hi, right.value, right.d1)) return delta;
        delta *= contraction;
    }
    std::ostringstream msg;
    msg << "detect_window: no tangent-extendable window around kink " << kink_index << " at " << a
        << " after " << kMaxWindowTrials << " trials (pieces violate the piecewise C^2 contract)";
    throw Error(msg.str());
}

double TangentPair::intersection() const {
    return left_x + (right_y - left_y - right_slope * (right_x - left_x)) / (left_slope - right_slope);
}

double Arc::value(double x) const {
    // y1 + sign r (cos u - cos u1) with r (u - u1) = x - x1, free of cancellation
    const double u = arc_u(*this, x);
    const double dx = std::clamp(x, x1, x2) - x1;
    return y1 - sign * dx * (u1 + u) / (cos_of(u) + cos_of(u1));
}

double Arc::derivative(double x) const {
    const double u = arc_u(*this, x);
    const double root = cos_of(u);
    if (root == 0.0) return u * sign < 0.0 ? kInf : -kInf;
    // the slope runs monotonically between the line slopes; clamping removes rounding only
    return std::clamp(-sign * u / root, std::min(slope1, slope2), std::max(slope1, slope2));
}

std::optional<Arc> build_arc(const TangentPair& lines, double x1, double x2) {
    const double s1 = lines.left_slope;
    const double s2 = lines.right_slope;
    if (s1 == s2) return std::nullopt;
    if (!(x2 > x1)) return std::nullopt;
    Arc arc;
    arc.x1 = x1;
    arc.x2 = x2;
    arc.y1 = lines.left(x1);
    arc.sign = s1 > s2 ? 1.0 : -1.0;
    arc.slope1 = s1;
    arc.slope2 = s2;
    arc.u1 = u_of_slope(s1, arc.sign);
    arc.u2 = u_of_slope(s2, arc.sign);
    arc.radius = (x2 - x1) / (arc.u2 - arc.u1);
    arc.xc = x1 - arc.radius * arc.u1;
    arc.yc = arc.y1 - arc.sign * arc.radius * cos_of(arc.u1);
    return arc;
}

SmoothedNonlinearity::SmoothedNonlinearity(ScalarPiecewiseC2 base, SmoothingOptions options)
    : base_(std::move(base)), options_(options) {
    if (!(options_.initial_window > 0.0)) throw InvalidArgument("smoothing: initial window must be positive");
    if (!(options_.contraction > 0.0 && options_.contraction < 1.0))
        throw InvalidArgument("smoothing: contraction must lie in (0, 1)");
}

void SmoothedNonlinearity::set_epsilon(double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("smoothing: epsilon must be positive");
    eps_ = eps;
}

double SmoothedNonlinearity::initial_window(std::size_t kink) const {
    const auto& k = base_.kinks();
    double d = options_.initial_window;
    if (kink > 0) d = std::min(d, 0.5 * (k[kink] - k[kink - 1]));
    if (kink + 1 < k.size()) d = std::min(d, 0.5 * (k[kink + 1] - k[kink]));
    return d;
}

SmoothedNonlinearity::KinkCache& SmoothedNonlinearity::cache_for(std::size_t kink) const {
    for (auto& c : caches_)
        if (c.kink == kink) return c;
    KinkCache c;
    c.kink = kink;
    c.top = initial_window(kink);
    caches_.push_back(std::move(c));
    return caches_.back();
}

double SmoothedNonlinearity::rung_width(const KinkCache& cache, int j) const {
    return cache.top * std::pow(options_.contraction, j);
}

int SmoothedNonlinearity::resolve_exponent(KinkCache& cache, int m) const {
    if (m >= cache.exhausted_at) return cache.exhausted_at;
    for (const auto& [from, to] : cache.resolved)
        if (from == m) return to;
    const double a = base_.kinks()[cache.kink];
    int j = m;
    for (int trial = 0;; ++trial, ++j) {
        if (trial == kMaxWindowTrials) {
            std::ostringstream msg;
            msg << "detect_window: no tangent-extendable window around kink " << cache.kink << " at " << a
                << " after " << kMaxWindowTrials << " trials (pieces violate the piecewise C^2 contract)";
            throw Error(msg.str());
        }
        const double delta = rung_width(cache, j);
        const double lo = a - delta;
        const double hi = a + delta;
        if (!window_resolvable(a, delta) || !(hi > lo)) {
            cache.exhausted_at = std::min(cache.exhausted_at, j);
            break;
        }
        const Jet left = base_.piece(cache.kink, lo);
        const Jet right = base_.piece(cache.kink + 1, hi);
        if (tangent_extendable(lo, left.value, left.d1, hi, right.value, right.d1)) break;
    }
    cache.resolved.emplace_back(m, j);
    auto pos = std::lower_bound(cache.rungs.begin(), cache.rungs.end(), j,
                                [](const auto& r, int e) { return r.first < e; });
    if (pos == cache.rungs.end() || pos->first != j) cache.rungs.insert(pos, {j, make_rung(cache.kink, rung_width(cache, j))});
    return j;
}

SmoothedNonlinearity::Rung SmoothedNonlinearity::make_rung(std::size_t kink, double delta) const {
    Rung rung;
    rung.delta = delta;
    const double a = base_.kinks()[kink];
    const double lo = a - delta;
    const double hi = a + delta;
    if (!window_resolvable(a, delta) || !(hi > lo)) return rung;

    const Jet left = base_.piece(kink, lo);
    const Jet right = base_.piece(kink + 1, hi);
    rung.lines = TangentPair{lo, left.value, left.d1, hi, right.value, right.d1};
    rung.chord_slope = std::clamp((right.value - left.value) / (hi - lo), std::min(left.d1, right.d1),
                                  std::max(left.d1, right.d1));
    if (slopes_equal(left.d1, right.d1)) {
        rung.smoothed = true;
        return rung;
    }

    auto arc_through = [&](double x0) {
        const double chord = std::min(std::hypot(x0 - lo, rung.lines.left(x0) - left.value),
                                      std::hypot(hi - x0, rung.lines.right(x0) - right.value));
        const double x1 = x0 - chord / std::sqrt(1.0 + left.d1 * left.d1);
        const double x2 = x0 + chord / std::sqrt(1.0 + right.d1 * right.d1);
        return build_arc(rung.lines, x1, x2);
    };
    rung.arc = arc_through(std::clamp(rung.lines.intersection(), lo, hi));
    // for nearly parallel lines rounding can push the intersection onto the window edge;
    // the kink itself is then as good a corner as any
    if (!rung.arc) rung.arc = arc_through(a);
    rung.smoothed = rung.arc.has_value();
    return rung;
}

const SmoothedNonlinearity::Rung* SmoothedNonlinearity::active_rung(std::size_t kink) const {
    if (kink >= base_.kinks().size()) return nullptr;
    auto& cache = cache_for(kink);
    int m = 0;
    if (eps_ < cache.top) {
        m = static_cast<int>(std::ceil(std::log(cache.top / eps_) / -std::log(options_.contraction)));
        m = std::max(m, 0);
        while (rung_width(cache, m) > eps_) ++m;
        while (m > 0 && rung_width(cache, m - 1) <= eps_) --m;
    }
    const int j = resolve_exponent(cache, m);
    for (const auto& [e, r] : cache.rungs)
        if (e == j) return &r;
    return nullptr;
}

double SmoothedNonlinearity::window(std::size_t kink) const {
    const Rung* r = active_rung(kink);
    return r && r->smoothed ? r->delta : 0.0;
}

std::vector<double> SmoothedNonlinearity::ladder(std::size_t kink) const {
    std::vector<double> out;
    for (const auto& c : caches_)
        if (c.kink == kink)
            for (const auto& r : c.rungs) out.push_back(r.second.delta);
    return out;
}

std::pair<double, double> SmoothedNonlinearity::eval_in_rung(const Rung& rung, double x) const {
    if (!rung.smoothed) {
        const Jet j = base_(x);
        return {j.value, j.d1};
    }
    const auto& L = rung.lines;
    if (!rung.arc) return {L.left_y + rung.chord_slope * (x - L.left_x), rung.chord_slope};
    const Arc& arc = *rung.arc;
    if (x <= arc.x1) return {L.left(x), L.left_slope};
    if (x > arc.x2) return {L.right(x), L.right_slope};
    return {arc.value(x), arc.derivative(x)};
}

std::pair<double, double> SmoothedNonlinearity::eval(double x) const {
    const auto& k = base_.kinks();
    if (!k.empty()) {
        const std::size_t i = base_.piece_index(x);
        for (std::size_t cand : {i, i - 1}) {
            if (cand >= k.size()) continue;  // also skips i - 1 when i == 0
            const double dist = std::abs(x - k[cand]);
            // the active rung never exceeds min(eps, initial window)
            if (dist > std::min(eps_, initial_window(cand))) continue;
            const Rung* rung = active_rung(cand);
            if (rung && rung->smoothed && dist <= rung->delta) return eval_in_rung(*rung, x);
        }
    }
    const Jet j = base_(x);
    return {j.value, j.d1};
}

double SmoothedNonlinearity::approximation_constant() const {
    if (base_.kinks().empty()) return 0.0;
    const double L = base_.lipschitz_bound();
    const double M = base_.curvature_bound();
    return 2.0 * (M * options_.initial_window + std::sqrt(1.0 + L * L));
}

SmoothedSystem::SmoothedSystem(const std::vector<ScalarPiecewiseC2>& phi, SmoothingOptions options) {
    parts_.reserve(phi.size());
    for (const auto& p : phi) parts_.emplace_back(p, options);
}

void SmoothedSystem::set_epsilon(double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("smoothing: epsilon must be positive");
    eps_ = eps;
    for (auto& p : parts_) p.set_epsilon(eps);
}

void SmoothedSystem::eval(const fem::Vector& x, fem::Vector& values, fem::Vector& derivatives) const {
    values.resize(x.size());
    derivatives.resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const auto [v, d] = parts_[static_cast<std::size_t>(i)].eval(x[i]);
        values[i] = v;
        derivatives[i] = d;
    }
}

fem::Vector SmoothedSystem::values(const fem::Vector& x) const {
    fem::Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = parts_[static_cast<std::size_t>(i)].eval(x[i]).first;
    return out;
}

double SmoothedSystem::approximation_constant() const {
    double sum = 0.0;
    for (const auto& p : parts_) {
        const double mu = p.approximation_constant();
        sum += mu * mu;
    }
    return std::sqrt(sum);
}

SmoothedNonlinearity smooth_nonlinearity(const ScalarPiecewiseC2& phi, double eps, SmoothingOptions options) {
    SmoothedNonlinearity s(phi, options);
    s.set_epsilon(eps);
    return s;
}

std::pair<double, double> eval_smoothed(const SmoothedNonlinearity& s, double x) { return s.eval(x); }

double slope_distance(const ScalarPiecewiseC2& phi, double x, double slope) {
    const double l = phi.left_derivative(x);
    const double r = phi.right_derivative(x);
    const double lo = std::min(l, r);
    const double hi = std::max(l, r);
    return std::max({0.0, lo - slope, slope - hi});
}

double cdist(const SmoothedSystem& s, const fem::Vector& x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double xi = x[static_cast<Eigen::Index>(i)];
        const double d = slope_distance(s[i].base(), xi, s[i].eval(xi).second);
        sum += d * d;
    }
    return std::sqrt(sum);
}

double cdist(const std::vector<SmoothedNonlinearity>& s, const fem::Vector& x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double xi = x[static_cast<Eigen::Index>(i)];
        const double d = slope_distance(s[i].base(), xi, s[i].eval(xi).second);
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace hysfem::solver
