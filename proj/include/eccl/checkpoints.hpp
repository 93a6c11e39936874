#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eccl/world.hpp"

namespace eccl {

inline constexpr std::string_view kCheckpointSchema = "eccl-checkpoints/v1";

enum class CheckpointCategory { location, object, affordance };
std::string_view checkpoint_category_name(CheckpointCategory c);

// A verifiable environment fact. Matching is deterministic string/action
// matching against step records; no judge involved.
struct Checkpoint {
    std::string id;
    CheckpointCategory category{};
    // location: the arrival-description substring for the location.
    // object: the object id that must appear in a qualifying observation.
    // affordance: verb plus target (object id for take, container id for
    // open/close, device kind name for heat/cool/clean).
    std::string match_text;
    std::optional<Verb> match_verb;

    bool operator==(const Checkpoint&) const = default;
};

struct CheckpointSet {
    std::string world_id;
    std::vector<Checkpoint> checkpoints;

    int size() const { return static_cast<int>(checkpoints.size()); }
};

struct CoverageRecord {
    // checkpoint id -> first step index at which it was verified.
    std::map<std::string, std::optional<int>> hits;
    int covered_count = 0;
    int total = 0;
};

// One location checkpoint per receptacle, one object checkpoint per object
// instance, affordances for open/close per container, take per object, and
// one per device verb applicable in the world. Unreachable candidates are
// filtered; ordering and ids are deterministic.
CheckpointSet build_checkpoints(const WorldSpec& world);

bool match_step(const Checkpoint& cp, const StepRecord& rec);

// First-hit scan over the whole trajectory. Throws std::invalid_argument on
// world_id mismatch.
CoverageRecord coverage(const Trajectory& traj, const CheckpointSet& cps);

// covered / M. CheckpointSet construction guarantees M >= 1 for any valid
// world, so the ratio is always defined.
double ecc(const CoverageRecord& cov);

// Streaming coverage; after any prefix of records, current_ecc() equals the
// batch computation on that prefix exactly.
class IncrementalTracker {
  public:
    explicit IncrementalTracker(const CheckpointSet& cps);

    void observe(const StepRecord& rec);
    double current_ecc() const;
    int covered_count() const { return covered_; }
    CoverageRecord record() const;

  private:
    const CheckpointSet* cps_;
    std::vector<std::optional<int>> first_hit_;
    int covered_ = 0;
    int fed_ = 0;
};

nlohmann::json checkpoints_to_json(const CheckpointSet& cps);
CheckpointSet checkpoints_from_json(const nlohmann::json& j);

}  // namespace eccl
