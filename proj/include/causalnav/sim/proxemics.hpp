#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "causalnav/core/error.hpp"
#include "causalnav/core/geometry.hpp"

namespace causalnav {

enum class ProxemicZone { Intimate, Personal, Social, Public, Beyond };

inline constexpr std::array<double, 4> kProxemicBounds{0.5, 1.2, 3.6, 7.6};  // metres

inline std::string_view to_string(ProxemicZone z) {
  constexpr std::array<std::string_view, 5> names{"intimate", "personal", "social", "public", "beyond"};
  return names[static_cast<std::size_t>(z)];
}

/// Half-open bands: intimate [0, 0.5), personal [0.5, 1.2), social [1.2, 3.6),
/// public [3.6, 7.6), beyond >= 7.6.
inline ProxemicZone classify_proxemics(double distance_m) {
  if (distance_m < 0.0) throw Error("classify_proxemics: negative distance");
  for (std::size_t i = 0; i < kProxemicBounds.size(); ++i)
    if (distance_m < kProxemicBounds[i]) return static_cast<ProxemicZone>(i);
  return ProxemicZone::Beyond;
}

/// Strict inequality: a person exactly on the circumscribed circle is clear.
inline bool detect_collision(Vec2 robot, Vec2 person, double circumscribed_radius) {
  if (!(circumscribed_radius > 0.0)) throw Error("detect_collision: radius must be > 0");
  return distance(robot, person) < circumscribed_radius;
}

/// Counts one event per entry into the circumscribed region; a person must
/// leave before re-entering counts again.
class CollisionTracker {
 public:
  explicit CollisionTracker(double radius = 0.3) : radius_(radius) {}

  template <class People>
  int update(Vec2 robot, const People& people) {
    if (inside_.size() != people.size()) inside_.assign(people.size(), 0);
    int events = 0;
    for (std::size_t i = 0; i < people.size(); ++i) {
      const bool in = detect_collision(robot, people[i], radius_);
      if (in && !inside_[i]) ++events;
      inside_[i] = in;
    }
    total_ += events;
    return events;
  }

  // Re-synchronise after a teleport without counting anyone already inside.
  template <class People>
  void resync(Vec2 robot, const People& people) {
    inside_.assign(people.size(), 0);
    for (std::size_t i = 0; i < people.size(); ++i) inside_[i] = detect_collision(robot, people[i], radius_);
  }

  long long total() const { return total_; }
  double radius() const { return radius_; }

 private:
  double radius_;
  std::vector<char> inside_;
  long long total_ = 0;
};

}  // namespace causalnav
