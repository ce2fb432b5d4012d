#pragma once

#include <vector>

namespace cournot {

// One data point of a concave inverse demand curve: at total quantity q the
// price is v and the derivative of the price is s.
struct PriceAnchor {
    double q = 0.0;
    double v = 0.0;
    double s = 0.0;
    bool operator==(const PriceAnchor&) const = default;
};

// Concave inverse demand curve pinned at a list of anchors. Between
// consecutive anchors the curve is two concave quadratic pieces joined with a
// continuous derivative; outside the anchor range it extends linearly with the
// end slopes. Evaluation exactly at an anchor returns the anchor data itself,
// so checks that only touch anchor points are interpolation-free.
//
// Validity requires strictly increasing quantities, strictly decreasing slopes
// and every secant slope lying within the two bracketing anchor slopes. When a
// secant coincides with one of those slopes no smooth concave interpolant
// exists; the construction then degenerates to a single quadratic piece and
// the curve has a kink at that anchor (still concave, anchors still exact).
class ConcaveAnchorPrice {
  public:
    explicit ConcaveAnchorPrice(std::vector<PriceAnchor> anchors);

    double value(double q) const;
    double slope(double q) const;

    const std::vector<PriceAnchor>& anchors() const { return anchors_; }

    bool operator==(const ConcaveAnchorPrice& other) const {
        return anchors_ == other.anchors_;
    }

  private:
    // value = c0 + c1*(q - x0) + c2*(q - x0)^2 on [x0, x1]
    struct Piece {
        double x0, x1, c0, c1, c2;
    };

    // Index of the matching anchor if q coincides with one, else -1.
    int anchor_at(double q) const;
    const Piece& piece_at(double q) const;

    std::vector<PriceAnchor> anchors_;
    std::vector<Piece> pieces_;
};

}  // namespace cournot
