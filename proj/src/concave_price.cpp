#include "cournot/concave_price.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cournot/errors.hpp"

namespace cournot {

namespace {

bool close(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

ConcaveAnchorPrice::ConcaveAnchorPrice(std::vector<PriceAnchor> anchors)
    : anchors_(std::move(anchors)) {
    if (anchors_.empty())
        throw ValidationError("concave price needs at least one anchor");
    for (const auto& a : anchors_) {
        if (!std::isfinite(a.q) || !std::isfinite(a.v) || !std::isfinite(a.s))
            throw ValidationError("concave price anchor has non-finite entries");
    }
    for (std::size_t k = 0; k + 1 < anchors_.size(); ++k) {
        const auto& lo = anchors_[k];
        const auto& hi = anchors_[k + 1];
        if (!(hi.q > lo.q))
            throw ValidationError("concave price anchors must have strictly increasing quantities");
        if (!(hi.s < lo.s))
            throw ValidationError("concave price anchor slopes must be strictly decreasing");
        const double g = (hi.v - lo.v) / (hi.q - lo.q);
        // secant must sit between the bracketing slopes (closed interval);
        // the pad covers rounding of the secant itself, whose error grows
        // with cancellation in the value difference
        const double pad = 1e-12 * std::max({1.0, std::abs(lo.s), std::abs(hi.s)}) +
                           16.0 * std::numeric_limits<double>::epsilon() *
                               std::max(std::abs(lo.v), std::abs(hi.v)) / (hi.q - lo.q);
        if (g > lo.s + pad || g < hi.s - pad)
            throw ValidationError("concave price secant slope " + std::to_string(g) +
                                  " outside anchor slope bracket [" + std::to_string(hi.s) +
                                  ", " + std::to_string(lo.s) + "]");
    }

    // Two quadratic pieces per interval, joined where both stay concave. The
    // junction slope is fixed by the mean-value constraint; the junction
    // position theta keeps both second derivatives nonpositive.
    for (std::size_t k = 0; k + 1 < anchors_.size(); ++k) {
        const auto& lo = anchors_[k];
        const auto& hi = anchors_[k + 1];
        const double h = hi.q - lo.q;
        const double g = (hi.v - lo.v) / h;
        const double t = std::clamp((g - hi.s) / (lo.s - hi.s), 0.0, 1.0);
        const double sigma = 2.0 * g - t * lo.s - (1.0 - t) * hi.s;
        const double xi = lo.q + t * h;
        if (t > 1e-12) {
            const double c2 = (sigma - lo.s) / (2.0 * t * h);
            pieces_.push_back({lo.q, xi, lo.v, lo.s, c2});
        }
        if (t < 1.0 - 1e-12) {
            // anchored at the right end: value = hi.v + hi.s*(q-hi.q) + c2*(q-hi.q)^2
            const double c2 = (sigma - hi.s) / (2.0 * (t - 1.0) * h);
            pieces_.push_back({xi, hi.q, hi.v + hi.s * (xi - hi.q) + c2 * (xi - hi.q) * (xi - hi.q),
                               sigma, c2});
        }
    }
}

int ConcaveAnchorPrice::anchor_at(double q) const {
    auto it = std::lower_bound(anchors_.begin(), anchors_.end(), q,
                               [](const PriceAnchor& a, double x) { return a.q < x; });
    if (it != anchors_.end() && close(it->q, q)) return int(it - anchors_.begin());
    if (it != anchors_.begin() && close(std::prev(it)->q, q)) return int(it - anchors_.begin()) - 1;
    return -1;
}

const ConcaveAnchorPrice::Piece& ConcaveAnchorPrice::piece_at(double q) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), q,
                               [](double x, const Piece& p) { return x < p.x1; });
    if (it == pieces_.end()) --it;
    return *it;
}

double ConcaveAnchorPrice::value(double q) const {
    if (int k = anchor_at(q); k >= 0) return anchors_[std::size_t(k)].v;
    const auto& front = anchors_.front();
    const auto& back = anchors_.back();
    if (q < front.q) return front.v + front.s * (q - front.q);
    if (q > back.q || pieces_.empty()) return back.v + back.s * (q - back.q);
    const auto& p = piece_at(q);
    const double u = q - p.x0;
    return p.c0 + p.c1 * u + p.c2 * u * u;
}

double ConcaveAnchorPrice::slope(double q) const {
    if (int k = anchor_at(q); k >= 0) return anchors_[std::size_t(k)].s;
    if (q < anchors_.front().q) return anchors_.front().s;
    if (q > anchors_.back().q || pieces_.empty()) return anchors_.back().s;
    const auto& p = piece_at(q);
    return p.c1 + 2.0 * p.c2 * (q - p.x0);
}

}  // namespace cournot
