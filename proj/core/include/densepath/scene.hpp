#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "densepath/geometry.hpp"

namespace densepath {

enum class AgentType { kVehicle, kPedestrian, kCyclist };

AgentType agent_type_from_string(const std::string& s);
std::string to_string(AgentType t);

struct ObservedState {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> heading;

  Vec2 pos() const { return {x, y}; }
};

struct AgentTrack {
  std::int64_t id = 0;
  AgentType type = AgentType::kVehicle;
  std::vector<ObservedState> observed;  // timestamps strictly increasing
  double length = 4.5;
  double width = 2.0;
};

struct Lane {
  std::int64_t id = 0;
  std::vector<Vec2> points;  // centerline, ~1 m spacing
  double width = 4.0;
  std::string turn = "none";  // none | left | right | uturn
  bool parking = false;       // parking lots are wide pseudo-lanes
};

struct MapData {
  std::vector<Lane> lanes;
};

struct Scenario {
  std::string id;
  double horizon_s = 8.0;
  std::int64_t target_id = 0;
  MapData map;
  std::vector<AgentTrack> tracks;
  std::vector<Vec2> future;  // ground truth at 10 Hz; may be empty for inference

  const AgentTrack* find_track(std::int64_t id) const;
  const AgentTrack& target() const;  // throws when target_id is missing
  int horizon_steps() const { return static_cast<int>(std::lround(horizon_s * 10.0)); }
};

// Throws std::invalid_argument describing the first violated invariant.
void validate_scenario(const Scenario& s);

// Heading of the last observation: last displacement when it is non-degenerate,
// otherwise the stored heading field. Throws when neither is available.
double track_heading(const AgentTrack& t);

struct NormalizedScenario {
  Scenario scene;
  RigidTransform to_local;  // the transform that was applied; invert to map outputs back
};

// Rigid transform taking the target's last observed position to the origin
// and its heading to +y. Applied to every map point, track state and future point.
NormalizedScenario normalize_scene(const Scenario& s);

inline constexpr Vec2 kSubmapCenter{0.0, 30.0};
inline constexpr double kSubmapRadius = 80.0;

// Keeps lane points within `radius` of `center` (point-granularity clipping);
// lanes left without points are dropped.
MapData crop_submap(const MapData& m, Vec2 center = kSubmapCenter, double radius = kSubmapRadius);

inline constexpr int kVectorAttrs = 6;

struct SceneVector {
  Vec2 start;
  Vec2 end;
  double t_start = 0.0;
  double t_end = 0.0;
  bool is_agent = false;
  std::array<double, kVectorAttrs> attr{};  // agent: type one-hot, speed, length, width
                                            // lane:  width, parking, turn one-hot
};

struct VectorSeq {
  enum class Owner { kAgent, kLane };
  Owner owner = Owner::kLane;
  std::int64_t owner_id = 0;
  std::vector<SceneVector> vectors;  // consecutive vectors chain end -> start
};

inline constexpr int kLaneSegmentPoints = 10;

// Splits each centerline into segments of 10 points (a trailing remainder of
// one point borrows from the previous segment so every segment has >= 2) and
// turns each segment into a polyline of vectors carrying the lane attributes.
// Lanes with fewer than 2 points are skipped.
std::vector<VectorSeq> segment_lanes(const std::vector<Lane>& lanes);

// Consecutive observation pairs become vectors. Tracks with < 2 observations
// are skipped (their ids reported through `skipped` when given); a skipped
// target is an error. `history_s` < 0 keeps the full history; otherwise only
// observations within history_s of the target's last timestamp are used.
std::vector<VectorSeq> vectorize_agents(const std::vector<AgentTrack>& tracks,
                                        std::int64_t target_id, double history_s = 1.0,
                                        std::vector<std::int64_t>* skipped = nullptr);

}  // namespace densepath
