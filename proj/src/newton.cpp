#include <algorithm>

#include "ramlock/localfield.hpp"

namespace ramlock {

long NewtonPolygon::total_multiplicity() const {
    long t = inf_multiplicity;
    for (const auto& [v, m] : root_valuations) t += m;
    return t;
}

NewtonPolygon newton_hull(const std::vector<std::pair<long, Rat>>& pts,
                          long degree, long inf_mult) {
    NewtonPolygon np;
    np.inf_multiplicity = inf_mult;
    if (pts.empty()) throw InputError("empty point set");
    std::vector<std::pair<long, Rat>> sorted = pts;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // lower convex hull, left to right
    std::vector<std::pair<long, Rat>> hull;
    for (const auto& pt : sorted) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // keep b only if it lies strictly below segment a-pt
            Rat lhs = (b.second - a.second) * (pt.first - a.first);
            Rat rhs = (pt.second - a.second) * (b.first - a.first);
            if (lhs < rhs) break;
            hull.pop_back();
        }
        hull.push_back(pt);
    }
    np.vertices = hull;
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        long run = hull[k + 1].first - hull[k].first;
        Rat rootval = (hull[k].second - hull[k + 1].second) / run;
        np.root_valuations.emplace_back(rootval, run);
    }
    std::sort(np.root_valuations.begin(), np.root_valuations.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // merge equal valuations
    std::vector<std::pair<Rat, long>> merged;
    for (const auto& rv : np.root_valuations) {
        if (!merged.empty() && merged.back().first == rv.first)
            merged.back().second += rv.second;
        else
            merged.push_back(rv);
    }
    np.root_valuations = merged;
    if (np.total_multiplicity() != degree)
        throw Error("polygon multiplicities do not sum to the degree");
    return np;
}

NewtonPolygon newton_polygon(const std::vector<LFElement>& f) {
    if (f.empty()) throw InputError("zero polynomial");
    long d = static_cast<long>(f.size()) - 1;
    while (d > 0 && f[static_cast<std::size_t>(d)].exact_zero()) --d;
    if (d == 0 && f[0].exact_zero()) throw InputError("zero polynomial");
    {
        auto lv = f[static_cast<std::size_t>(d)].val_exact();
        if (!lv)
            throw PrecisionLoss("leading coefficient valuation indeterminate");
    }
    long inf_mult = 0;
    while (inf_mult < d &&
           f[static_cast<std::size_t>(inf_mult)].exact_zero())
        ++inf_mult;

    std::vector<std::pair<long, Rat>> pts;
    std::vector<std::pair<long, long>> caps;  // (index, lower bound)
    for (long i = inf_mult; i <= d; ++i) {
        const auto& c = f[static_cast<std::size_t>(i)];
        if (c.exact_zero()) continue;
        auto v = c.val_exact();
        if (v && *v < kPrecInf)
            pts.emplace_back(i, Rat(*v));
        else
            caps.emplace_back(i, c.val_lb());
    }
    if (pts.empty() ||
        pts.front().first != inf_mult ||
        pts.back().first != d) {
        throw PrecisionLoss(
            "extremal coefficient valuation indeterminate at working "
            "precision");
    }
    NewtonPolygon np = newton_hull(pts, d - inf_mult, 0);
    np.inf_multiplicity = inf_mult;
    // Indeterminate points must certifiably lie on or above the hull.
    for (const auto& [i, lb] : caps) {
        Rat hull_at = 0;
        for (std::size_t k = 0; k + 1 < np.vertices.size(); ++k) {
            const auto& a = np.vertices[k];
            const auto& b = np.vertices[k + 1];
            if (i >= a.first && i <= b.first) {
                hull_at = a.second + (b.second - a.second) * (i - a.first) /
                                         (b.first - a.first);
                break;
            }
        }
        if (Rat(lb) < hull_at)
            throw PrecisionLoss(
                "coefficient valuation indeterminate below the hull");
    }
    return np;
}

}  // namespace ramlock
