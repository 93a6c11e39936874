#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eccl/rng.hpp"

namespace eccl {

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

enum class LocationKind {
    bed,
    diningtable,
    drawer,
    sidetable,
    cabinet,
    countertop,
    fridge,
    garbagecan,
    coffeemachine,
    sinkbasin,
    microwave,
};
inline constexpr int kNumLocationKinds = 11;

enum class ObjectClass {
    book,
    laptop,
    pillow,
    mug,
    cd,
    cellphone,
    keychain,
    pencil,
    glassbottle,
    apple,
    plate,
};
inline constexpr int kNumObjectClasses = 11;

enum class ObjectProp { heatable, coolable, cleanable, sliceable };

enum class Verb {
    look,
    inventory,
    go_to,
    open,
    close,
    take,
    move,
    examine,
    heat,
    cool,
    clean,
    done,
};
inline constexpr int kNumVerbs = 12;

std::string_view kind_name(LocationKind k);
std::string_view class_name(ObjectClass c);
std::string_view prop_name(ObjectProp p);
std::string_view verb_name(Verb v);
std::optional<LocationKind> kind_from_name(std::string_view s);
std::optional<ObjectClass> class_from_name(std::string_view s);
std::optional<ObjectProp> prop_from_name(std::string_view s);
std::optional<Verb> verb_from_name(std::string_view s);

// Container kinds gate visibility of their contents behind open/close.
bool is_container_kind(LocationKind k);
// Fixed per-class capabilities; part of the engine vocabulary, not of any
// particular world instance.
const std::set<ObjectProp>& class_properties(ObjectClass c);
// Receptacle kinds where objects of a class are customarily placed. The
// generator draws initial placements from these, and prior-driven agents
// search them first.
const std::vector<LocationKind>& class_prior_kinds(ObjectClass c);
// Default verb -> receptacle-kind mapping for state-changing actions.
const std::map<Verb, LocationKind>& default_device_map();

// ---------------------------------------------------------------------------
// World definition
// ---------------------------------------------------------------------------

struct LocationSpec {
    std::string id;
    LocationKind kind{};
    bool container = false;
    bool initially_open = true;
    // When set, a `move` into this receptacle fails while it holds any
    // object; the blocker must be moved off first.
    bool requires_clear = false;

    bool operator==(const LocationSpec&) const = default;
};

struct ObjectSpec {
    std::string id;
    ObjectClass cls{};
    std::string initial_location;
    std::set<ObjectProp> properties;

    bool operator==(const ObjectSpec&) const = default;
};

struct WorldSpec {
    std::string world_id;
    uint64_t seed = 0;
    std::vector<LocationSpec> locations;
    std::vector<ObjectSpec> objects;
    std::map<Verb, LocationKind> device_map;

    const LocationSpec* find_location(std::string_view id) const;
    const ObjectSpec* find_object(std::string_view id) const;

    bool operator==(const WorldSpec&) const = default;
};

using WorldPtr = std::shared_ptr<const WorldSpec>;

// Throws std::invalid_argument when a structural invariant is violated.
void validate_world(const WorldSpec& world);

enum class RoomKind { bedroom, kitchen };
std::string_view room_kind_name(RoomKind k);
std::optional<RoomKind> room_kind_from_name(std::string_view s);

struct GenParams {
    int n_locations = 9;
    int n_objects = 12;
    RoomKind room_kind = RoomKind::bedroom;
};

// Deterministic function of (seed, params). The receptacle multiset depends
// only on (room_kind, n_locations); the seed drives object classes,
// placements, and container open states.
WorldSpec generate_world(uint64_t seed, const GenParams& params);

// ---------------------------------------------------------------------------
// Tasks
// ---------------------------------------------------------------------------

enum class StateFlag { hot, cold, clean, sliced };
std::string_view state_flag_name(StateFlag f);
std::optional<StateFlag> state_flag_from_name(std::string_view s);

enum class GoalTemplate {
    pick_and_place_simple,
    pick_cool_then_place_in_recep,
    pick_heat_then_place_in_recep,
    pick_clean_then_place_in_recep,
};
std::string_view goal_template_name(GoalTemplate t);
std::optional<GoalTemplate> goal_template_from_name(std::string_view s);
// The state flag a template requires ({} for pick_and_place_simple).
std::set<StateFlag> goal_template_state(GoalTemplate t);

struct TaskGoal {
    GoalTemplate tmpl{};
    ObjectClass target_object_class{};
    std::string target_receptacle;
    std::set<StateFlag> required_state;

    bool operator==(const TaskGoal&) const = default;
};

// "put a <class> [<stateword>] on <recep>"; instance numbers of objects are
// never revealed, so the agent has to find a matching instance itself.
std::string goal_text(const TaskGoal& goal);

// Draws a goal that is structurally satisfiable and not satisfied in the
// initial state. Returns nullopt when the world supports none of the
// requested templates.
std::optional<TaskGoal> sample_goal(const WorldSpec& world, RngStream& rng,
                                    const std::vector<GoalTemplate>& templates);

// ---------------------------------------------------------------------------
// Simulation state
// ---------------------------------------------------------------------------

struct Action {
    Verb verb{};
    std::string arg1;  // object or location id
    std::string arg2;  // location id

    bool operator==(const Action&) const = default;
};

// Canonical text form ("take mug 1 from countertop 1", "go to bed 1", ...).
std::string action_text(const Action& a);
// Parses the canonical grammar, case-insensitive and whitespace-normalized.
std::optional<Action> parse_action(std::string_view text);

enum class StepOutcome { ok, noop, terminal };
std::string_view outcome_name(StepOutcome o);
std::optional<StepOutcome> outcome_from_name(std::string_view s);

struct StepRecord {
    int index = 0;  // 1-based
    std::string action_text;
    std::optional<Action> action;  // nullopt for unparseable agent output
    std::string observation;
    StepOutcome outcome = StepOutcome::ok;

    bool operator==(const StepRecord&) const = default;
};

struct EnvState {
    WorldPtr world;
    std::string agent_location;  // empty = room center
    std::string carrying;        // empty = hands free
    std::map<std::string, std::string> object_locations;
    std::map<std::string, bool> container_open;
    std::map<std::string, std::set<StateFlag>> object_state;
    int step_count = 0;

    bool same_situation(const EnvState& other) const;
};

inline constexpr std::string_view kNoopObservation = "Nothing happens.";

// Initial state plus the room-overview observation. The goal, when present,
// must be structurally satisfiable (class present, device and receptacle
// exist); violations throw std::invalid_argument. Goals never alter the
// observation.
std::pair<EnvState, std::string> reset(WorldPtr world,
                                       const std::optional<TaskGoal>& goal = std::nullopt);

// Applies one action in place. Violated preconditions yield a noop record
// ("Nothing happens.") and leave the state untouched; `done` is always legal
// and terminal.
StepRecord step(EnvState& state, const Action& action);

// Convenience for raw agent text: parse failures become noop records.
StepRecord step_text(EnvState& state, std::string_view text);

bool check_task_success(const EnvState& state, const TaskGoal& goal);

// Room overview string ("You are in the middle of a room. ...").
std::string render_room_overview(const WorldSpec& world);
// Substring that marks arrival at a location; location checkpoints match it.
std::string arrival_phrase(std::string_view location_id);

struct ReachableSet {
    std::vector<std::string> locations;
    std::vector<std::string> objects;
    // (verb, target): target is the object id for take, the container id for
    // open/close, and the device kind name for heat/cool/clean.
    std::vector<std::pair<Verb, std::string>> affordances;
};

// Closure over agent positions and legal interactions from the initial
// state. goto is unrestricted, so every location is reachable; containers
// become transparent after open; a device affordance requires both the
// device and an object carrying the matching property.
ReachableSet enumerate_reachable(const WorldSpec& world);

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct Trajectory {
    std::string world_id;
    std::string mode;  // "explore" | "act"
    uint64_t seed = 0;
    std::string reset_observation;
    std::vector<StepRecord> steps;

    bool operator==(const Trajectory&) const = default;
};

}  // namespace eccl
