#pragma once

// Planar scene geometry: square obstacles that block line of sight and a
// single reflective wall used for image-method specular bounces.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace earq {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Vec2d = Vec2<double>;

template <typename Scalar>
struct Segment {
  Vec2<Scalar> a;
  Vec2<Scalar> b;
};

/// Axis-aligned opaque square.
template <typename Scalar>
struct Obstacle {
  Vec2<Scalar> center;
  Scalar side;

  Obstacle(const Vec2<Scalar>& c, Scalar s) : center(c), side(s) {
    if (!(s > Scalar(0)) || !std::isfinite(s) || !c.allFinite())
      throw std::invalid_argument("obstacle: side must be positive and finite");
  }

  Vec2<Scalar> min_corner() const { return center.array() - side / Scalar(2); }
  Vec2<Scalar> max_corner() const { return center.array() + side / Scalar(2); }

  /// Closed containment test (boundary counts as inside).
  bool contains(const Vec2<Scalar>& p) const {
    const Vec2<Scalar> lo = min_corner(), hi = max_corner();
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }

  std::array<Segment<Scalar>, 4> edges() const {
    const Vec2<Scalar> lo = min_corner(), hi = max_corner();
    const Vec2<Scalar> lr(hi.x(), lo.y()), ul(lo.x(), hi.y());
    return {{{lo, lr}, {lr, hi}, {hi, ul}, {ul, lo}}};
  }
};

/// Reflective on both faces, never occludes.
template <typename Scalar>
struct Wall {
  Vec2<Scalar> endpoint_a;
  Vec2<Scalar> endpoint_b;

  Wall(const Vec2<Scalar>& a, const Vec2<Scalar>& b) : endpoint_a(a), endpoint_b(b) {
    if (!a.allFinite() || !b.allFinite() || a == b)
      throw std::invalid_argument("wall: endpoints must be finite and distinct");
  }

  Vec2<Scalar> direction() const { return (endpoint_b - endpoint_a).normalized(); }
};

template <typename Scalar>
struct ReflectedPath {
  Vec2<Scalar> reflection_point;
  Scalar leg1_length;  // source -> wall
  Scalar leg2_length;  // wall -> receiver
  Scalar departure_angle;
  Scalar arrival_angle;

  Scalar total_length() const { return leg1_length + leg2_length; }
};

template <typename Scalar>
inline Scalar cross2(const Vec2<Scalar>& u, const Vec2<Scalar>& v) {
  return u.x() * v.y() - u.y() * v.x();
}

namespace detail {

template <typename Scalar>
inline int orientation(const Vec2<Scalar>& p, const Vec2<Scalar>& q, const Vec2<Scalar>& r) {
  const Scalar c = cross2<Scalar>(q - p, r - p);
  return (c > Scalar(0)) - (c < Scalar(0));
}

// r is known to be collinear with p-q.
template <typename Scalar>
inline bool within_box(const Vec2<Scalar>& p, const Vec2<Scalar>& q, const Vec2<Scalar>& r) {
  return r.x() >= std::min(p.x(), q.x()) && r.x() <= std::max(p.x(), q.x()) &&
         r.y() >= std::min(p.y(), q.y()) && r.y() <= std::max(p.y(), q.y());
}

}  // namespace detail

/// True iff the closed segments share a point. Collinear overlap intersects.
template <typename Scalar>
bool segments_intersect(const Segment<Scalar>& s1, const Segment<Scalar>& s2) {
  if (s1.a == s1.b || s2.a == s2.b)
    throw std::invalid_argument("segments_intersect: zero-length segment");
  using detail::orientation;
  using detail::within_box;
  const int o1 = orientation(s1.a, s1.b, s2.a);
  const int o2 = orientation(s1.a, s1.b, s2.b);
  const int o3 = orientation(s2.a, s2.b, s1.a);
  const int o4 = orientation(s2.a, s2.b, s1.b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && within_box(s1.a, s1.b, s2.a)) return true;
  if (o2 == 0 && within_box(s1.a, s1.b, s2.b)) return true;
  if (o3 == 0 && within_box(s2.a, s2.b, s1.a)) return true;
  if (o4 == 0 && within_box(s2.a, s2.b, s1.b)) return true;
  return false;
}

/// True iff segment p-q touches no obstacle. Grazing an edge or corner blocks.
template <typename Scalar>
bool los_clear(const Vec2<Scalar>& p, const Vec2<Scalar>& q,
               std::span<const Obstacle<Scalar>> obstacles) {
  if (p == q) throw std::invalid_argument("los_clear: endpoints coincide");
  const Segment<Scalar> path{p, q};
  for (const auto& ob : obstacles) {
    // A segment with an endpoint inside the square is blocked even if it
    // never reaches an edge.
    if (ob.contains(p) || ob.contains(q)) return false;
    for (const auto& e : ob.edges())
      if (segments_intersect(path, e)) return false;
  }
  return true;
}

template <typename Scalar>
bool los_clear(const Vec2<Scalar>& p, const Vec2<Scalar>& q,
               const std::vector<Obstacle<Scalar>>& obstacles) {
  return los_clear(p, q, std::span<const Obstacle<Scalar>>(obstacles));
}

/// Signed distance from p to the wall's supporting line (positive on the left
/// of endpoint_a -> endpoint_b).
template <typename Scalar>
Scalar signed_distance(const Wall<Scalar>& wall, const Vec2<Scalar>& p) {
  return cross2<Scalar>(wall.direction(), p - wall.endpoint_a);
}

template <typename Scalar>
Vec2<Scalar> mirror_across(const Wall<Scalar>& wall, const Vec2<Scalar>& p) {
  if (std::abs(signed_distance(wall, p)) <= Scalar(1e-12))
    throw std::invalid_argument("mirror_across: point lies on the wall line");
  const Vec2<Scalar> d = wall.direction();
  const Vec2<Scalar> foot = wall.endpoint_a + d * d.dot(p - wall.endpoint_a);
  return Scalar(2) * foot - p;
}

/// Single-bounce specular path source -> wall -> receiver by the image method.
/// Empty when the bounce point falls off the wall segment or either leg is
/// blocked.
template <typename Scalar>
std::optional<ReflectedPath<Scalar>> reflected_path(const Vec2<Scalar>& source,
                                                    const Vec2<Scalar>& receiver,
                                                    const Wall<Scalar>& wall,
                                                    std::span<const Obstacle<Scalar>> obstacles) {
  const Scalar ds = signed_distance(wall, source);
  const Scalar dr = signed_distance(wall, receiver);
  if (ds * dr < Scalar(0))
    throw std::invalid_argument("reflected_path: source and receiver on opposite sides of the wall");

  const Vec2<Scalar> image = mirror_across(wall, source);  // throws if on the line
  if (std::abs(dr) <= Scalar(1e-12))
    throw std::invalid_argument("reflected_path: receiver lies on the wall line");

  // The receiver->image segment crosses the wall line at fraction t.
  const Scalar di = signed_distance(wall, image);
  const Scalar t = dr / (dr - di);
  const Vec2<Scalar> r = receiver + t * (image - receiver);

  const Vec2<Scalar> ab = wall.endpoint_b - wall.endpoint_a;
  const Scalar u = ab.dot(r - wall.endpoint_a) / ab.squaredNorm();
  const Scalar tol = Scalar(1e-12);
  if (u < -tol || u > Scalar(1) + tol) return std::nullopt;

  if (!los_clear(source, r, obstacles) || !los_clear(r, receiver, obstacles)) return std::nullopt;

  const Vec2<Scalar> out = r - source;
  const Vec2<Scalar> in = r - receiver;
  return ReflectedPath<Scalar>{r, out.norm(), in.norm(), std::atan2(out.y(), out.x()),
                               std::atan2(in.y(), in.x())};
}

template <typename Scalar>
std::optional<ReflectedPath<Scalar>> reflected_path(const Vec2<Scalar>& source,
                                                    const Vec2<Scalar>& receiver,
                                                    const Wall<Scalar>& wall,
                                                    const std::vector<Obstacle<Scalar>>& obstacles) {
  return reflected_path(source, receiver, wall, std::span<const Obstacle<Scalar>>(obstacles));
}

/// World-frame bearing of `to` as seen from `from`.
template <typename Scalar>
Scalar bearing(const Vec2<Scalar>& from, const Vec2<Scalar>& to) {
  const Vec2<Scalar> d = to - from;
  return std::atan2(d.y(), d.x());
}

}  // namespace earq
