#include "eccl/world.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace eccl {

// ---------------------------------------------------------------------------
// Vocabulary tables
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, kNumLocationKinds> kKindNames = {
    "bed",        "diningtable", "drawer",     "sidetable", "cabinet", "countertop",
    "fridge",     "garbagecan",  "coffeemachine", "sinkbasin", "microwave"};

constexpr std::array<std::string_view, kNumObjectClasses> kClassNames = {
    "book", "laptop", "pillow", "mug",         "cd",    "cellphone",
    "keychain", "pencil", "glassbottle", "apple", "plate"};

constexpr std::array<std::string_view, 4> kPropNames = {"heatable", "coolable", "cleanable",
                                                        "sliceable"};

constexpr std::array<std::string_view, kNumVerbs> kVerbNames = {
    "look", "inventory", "go to", "open", "close", "take",
    "move", "examine",   "heat",  "cool", "clean", "done"};

constexpr std::array<std::string_view, 4> kStateFlagNames = {"hot", "cold", "clean", "sliced"};

constexpr std::array<std::string_view, 4> kGoalTemplateNames = {
    "pick_and_place_simple", "pick_cool_then_place_in_recep",
    "pick_heat_then_place_in_recep", "pick_clean_then_place_in_recep"};

template <typename Enum, size_t N>
std::optional<Enum> enum_from_name(const std::array<std::string_view, N>& names,
                                   std::string_view s) {
    for (size_t i = 0; i < N; ++i) {
        if (names[i] == s) return static_cast<Enum>(i);
    }
    return std::nullopt;
}

}  // namespace

std::string_view kind_name(LocationKind k) { return kKindNames[static_cast<size_t>(k)]; }
std::string_view class_name(ObjectClass c) { return kClassNames[static_cast<size_t>(c)]; }
std::string_view prop_name(ObjectProp p) { return kPropNames[static_cast<size_t>(p)]; }
std::string_view verb_name(Verb v) { return kVerbNames[static_cast<size_t>(v)]; }
std::string_view state_flag_name(StateFlag f) { return kStateFlagNames[static_cast<size_t>(f)]; }
std::string_view goal_template_name(GoalTemplate t) {
    return kGoalTemplateNames[static_cast<size_t>(t)];
}

std::optional<LocationKind> kind_from_name(std::string_view s) {
    return enum_from_name<LocationKind>(kKindNames, s);
}
std::optional<ObjectClass> class_from_name(std::string_view s) {
    return enum_from_name<ObjectClass>(kClassNames, s);
}
std::optional<ObjectProp> prop_from_name(std::string_view s) {
    return enum_from_name<ObjectProp>(kPropNames, s);
}
std::optional<Verb> verb_from_name(std::string_view s) {
    return enum_from_name<Verb>(kVerbNames, s);
}
std::optional<StateFlag> state_flag_from_name(std::string_view s) {
    return enum_from_name<StateFlag>(kStateFlagNames, s);
}
std::optional<GoalTemplate> goal_template_from_name(std::string_view s) {
    return enum_from_name<GoalTemplate>(kGoalTemplateNames, s);
}

bool is_container_kind(LocationKind k) {
    switch (k) {
        case LocationKind::drawer:
        case LocationKind::cabinet:
        case LocationKind::fridge:
        case LocationKind::microwave:
            return true;
        default:
            return false;
    }
}

const std::set<ObjectProp>& class_properties(ObjectClass c) {
    static const std::array<std::set<ObjectProp>, kNumObjectClasses> table = {{
        /* book */ {},
        /* laptop */ {},
        /* pillow */ {},
        /* mug */ {ObjectProp::heatable, ObjectProp::coolable, ObjectProp::cleanable},
        /* cd */ {},
        /* cellphone */ {},
        /* keychain */ {},
        /* pencil */ {},
        /* glassbottle */ {ObjectProp::coolable, ObjectProp::cleanable},
        /* apple */ {ObjectProp::heatable, ObjectProp::coolable, ObjectProp::sliceable},
        /* plate */ {ObjectProp::heatable, ObjectProp::coolable, ObjectProp::cleanable},
    }};
    return table[static_cast<size_t>(c)];
}

const std::vector<LocationKind>& class_prior_kinds(ObjectClass c) {
    using LK = LocationKind;
    static const std::array<std::vector<LK>, kNumObjectClasses> table = {{
        /* book */ {LK::bed, LK::diningtable, LK::sidetable},
        /* laptop */ {LK::bed, LK::diningtable, LK::sidetable},
        /* pillow */ {LK::bed, LK::sidetable},
        /* mug */ {LK::countertop, LK::diningtable, LK::coffeemachine, LK::sidetable},
        /* cd */ {LK::diningtable, LK::sidetable, LK::drawer},
        /* cellphone */ {LK::sidetable, LK::bed, LK::diningtable},
        /* keychain */ {LK::sidetable, LK::drawer, LK::diningtable},
        /* pencil */ {LK::drawer, LK::sidetable, LK::diningtable},
        /* glassbottle */ {LK::countertop, LK::cabinet, LK::diningtable},
        /* apple */ {LK::countertop, LK::diningtable, LK::fridge},
        /* plate */ {LK::countertop, LK::cabinet, LK::diningtable, LK::sinkbasin},
    }};
    return table[static_cast<size_t>(c)];
}

const std::map<Verb, LocationKind>& default_device_map() {
    static const std::map<Verb, LocationKind> map = {
        {Verb::cool, LocationKind::fridge},
        {Verb::heat, LocationKind::microwave},
        {Verb::clean, LocationKind::sinkbasin},
    };
    return map;
}

std::string_view room_kind_name(RoomKind k) {
    return k == RoomKind::bedroom ? "bedroom" : "kitchen";
}
std::optional<RoomKind> room_kind_from_name(std::string_view s) {
    if (s == "bedroom") return RoomKind::bedroom;
    if (s == "kitchen") return RoomKind::kitchen;
    return std::nullopt;
}

std::string_view outcome_name(StepOutcome o) {
    switch (o) {
        case StepOutcome::ok: return "ok";
        case StepOutcome::noop: return "noop";
        case StepOutcome::terminal: return "terminal";
    }
    return "ok";
}
std::optional<StepOutcome> outcome_from_name(std::string_view s) {
    if (s == "ok") return StepOutcome::ok;
    if (s == "noop") return StepOutcome::noop;
    if (s == "terminal") return StepOutcome::terminal;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// WorldSpec helpers
// ---------------------------------------------------------------------------

const LocationSpec* WorldSpec::find_location(std::string_view id) const {
    for (const auto& loc : locations) {
        if (loc.id == id) return &loc;
    }
    return nullptr;
}

const ObjectSpec* WorldSpec::find_object(std::string_view id) const {
    for (const auto& obj : objects) {
        if (obj.id == id) return &obj;
    }
    return nullptr;
}

void validate_world(const WorldSpec& world) {
    std::set<std::string> loc_ids;
    for (const auto& loc : world.locations) {
        if (!loc_ids.insert(loc.id).second) {
            throw std::invalid_argument("duplicate location id: " + loc.id);
        }
        if (loc.container != is_container_kind(loc.kind)) {
            throw std::invalid_argument("container flag inconsistent with kind: " + loc.id);
        }
        if (!loc.container && !loc.initially_open) {
            throw std::invalid_argument("non-container location must be initially open: " +
                                        loc.id);
        }
    }
    std::set<std::string> obj_ids;
    for (const auto& obj : world.objects) {
        if (!obj_ids.insert(obj.id).second) {
            throw std::invalid_argument("duplicate object id: " + obj.id);
        }
        if (!loc_ids.count(obj.initial_location)) {
            throw std::invalid_argument("object " + obj.id + " placed at unknown location " +
                                        obj.initial_location);
        }
    }
    for (const auto& [verb, kind] : world.device_map) {
        if (verb != Verb::heat && verb != Verb::cool && verb != Verb::clean) {
            throw std::invalid_argument("device_map verb must be heat/cool/clean");
        }
        (void)kind;
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string join_entities(const std::vector<std::string>& ids) {
    if (ids.empty()) return "nothing";
    std::string out;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) out += (i + 1 == ids.size()) ? (ids.size() > 2 ? ", and " : " and ") : ", ";
        out += "a " + ids[i];
    }
    return out;
}

// Objects present at a location, in WorldSpec declaration order.
std::vector<std::string> objects_at(const EnvState& state, std::string_view loc) {
    std::vector<std::string> out;
    for (const auto& obj : state.world->objects) {
        auto it = state.object_locations.find(obj.id);
        if (it != state.object_locations.end() && it->second == loc) out.push_back(obj.id);
    }
    return out;
}

std::string render_contents(const EnvState& state, const LocationSpec& loc,
                            std::string_view lead) {
    std::string out{lead};
    if (loc.container) {
        bool open = state.container_open.at(loc.id);
        if (!open) {
            out += " The " + loc.id + " is closed.";
            return out;
        }
        out += " The " + loc.id + " is open. In it, you see " +
               join_entities(objects_at(state, loc.id)) + ".";
        return out;
    }
    out += " On the " + loc.id + ", you see " + join_entities(objects_at(state, loc.id)) + ".";
    return out;
}

}  // namespace

std::string render_room_overview(const WorldSpec& world) {
    // Kinds alphabetically, instances in descending order: "a drawer 4, a
    // drawer 3, ..." matches the canonical ALFWorld-style room listing.
    std::vector<std::string> ids;
    for (const auto& loc : world.locations) ids.push_back(loc.id);
    std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
        auto split = [](const std::string& id) {
            size_t sp = id.rfind(' ');
            return std::pair{id.substr(0, sp), std::stoi(id.substr(sp + 1))};
        };
        auto [ka, na] = split(a);
        auto [kb, nb] = split(b);
        if (ka != kb) return ka < kb;
        return na > nb;
    });
    return "You are in the middle of a room. Looking quickly around you, you see " +
           join_entities(ids) + ".";
}

std::string arrival_phrase(std::string_view location_id) {
    return "You arrive at " + std::string(location_id) + ".";
}

// ---------------------------------------------------------------------------
// Actions
// ---------------------------------------------------------------------------

std::string action_text(const Action& a) {
    switch (a.verb) {
        case Verb::look:
        case Verb::inventory:
        case Verb::done:
            return std::string(verb_name(a.verb));
        case Verb::go_to:
            return "go to " + a.arg1;
        case Verb::open:
        case Verb::close:
            return std::string(verb_name(a.verb)) + " " + a.arg1;
        case Verb::examine:
            return "examine " + a.arg1;
        case Verb::take:
            return "take " + a.arg1 + " from " + a.arg2;
        case Verb::move:
            return "move " + a.arg1 + " to " + a.arg2;
        case Verb::heat:
        case Verb::cool:
        case Verb::clean:
            return std::string(verb_name(a.verb)) + " " + a.arg1 + " with " + a.arg2;
    }
    return {};
}

namespace {

std::vector<std::string> tokenize_lower(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
        } else {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// An entity id is "<noun> <number>".
std::optional<std::string> take_entity(const std::vector<std::string>& toks, size_t from,
                                       size_t upto) {
    if (upto - from != 2) return std::nullopt;
    const std::string& noun = toks[from];
    const std::string& num = toks[from + 1];
    if (num.empty() || !std::all_of(num.begin(), num.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
        }))
        return std::nullopt;
    if (!kind_from_name(noun) && !class_from_name(noun)) return std::nullopt;
    return noun + " " + num;
}

size_t find_token(const std::vector<std::string>& toks, size_t from, std::string_view word) {
    for (size_t i = from; i < toks.size(); ++i) {
        if (toks[i] == word) return i;
    }
    return toks.size();
}

}  // namespace

std::optional<Action> parse_action(std::string_view text) {
    auto toks = tokenize_lower(text);
    if (toks.empty()) return std::nullopt;

    if (toks.size() == 1) {
        if (toks[0] == "look") return Action{Verb::look};
        if (toks[0] == "inventory") return Action{Verb::inventory};
        if (toks[0] == "done") return Action{Verb::done};
        return std::nullopt;
    }
    if (toks[0] == "go" && toks.size() >= 2 && toks[1] == "to") {
        auto ent = take_entity(toks, 2, toks.size());
        if (!ent) return std::nullopt;
        return Action{Verb::go_to, *ent};
    }
    if (toks[0] == "open" || toks[0] == "close" || toks[0] == "examine") {
        auto ent = take_entity(toks, 1, toks.size());
        if (!ent) return std::nullopt;
        Verb v = toks[0] == "open" ? Verb::open : toks[0] == "close" ? Verb::close : Verb::examine;
        return Action{v, *ent};
    }
    if (toks[0] == "take") {
        size_t sep = find_token(toks, 1, "from");
        if (sep == toks.size()) return std::nullopt;
        auto obj = take_entity(toks, 1, sep);
        auto loc = take_entity(toks, sep + 1, toks.size());
        if (!obj || !loc) return std::nullopt;
        return Action{Verb::take, *obj, *loc};
    }
    if (toks[0] == "move") {
        size_t sep = find_token(toks, 1, "to");
        if (sep == toks.size()) return std::nullopt;
        auto obj = take_entity(toks, 1, sep);
        auto loc = take_entity(toks, sep + 1, toks.size());
        if (!obj || !loc) return std::nullopt;
        return Action{Verb::move, *obj, *loc};
    }
    if (toks[0] == "heat" || toks[0] == "cool" || toks[0] == "clean") {
        size_t sep = find_token(toks, 1, "with");
        if (sep == toks.size()) return std::nullopt;
        auto obj = take_entity(toks, 1, sep);
        auto loc = take_entity(toks, sep + 1, toks.size());
        if (!obj || !loc) return std::nullopt;
        Verb v = toks[0] == "heat" ? Verb::heat : toks[0] == "cool" ? Verb::cool : Verb::clean;
        return Action{v, *obj, *loc};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Goals
// ---------------------------------------------------------------------------

std::set<StateFlag> goal_template_state(GoalTemplate t) {
    switch (t) {
        case GoalTemplate::pick_and_place_simple: return {};
        case GoalTemplate::pick_cool_then_place_in_recep: return {StateFlag::cold};
        case GoalTemplate::pick_heat_then_place_in_recep: return {StateFlag::hot};
        case GoalTemplate::pick_clean_then_place_in_recep: return {StateFlag::clean};
    }
    return {};
}

std::string goal_text(const TaskGoal& goal) {
    std::string statement = "put a " + std::string(class_name(goal.target_object_class));
    if (goal.required_state.count(StateFlag::cold)) statement += " cooled";
    if (goal.required_state.count(StateFlag::hot)) statement += " heated";
    if (goal.required_state.count(StateFlag::clean)) statement += " cleaned";
    statement += " on " + goal.target_receptacle;
    return statement;
}

namespace {

// Device kind required by a template, if any, must be present in the world.
std::optional<LocationKind> template_device_kind(const WorldSpec& world, GoalTemplate t) {
    auto flags = goal_template_state(t);
    if (flags.empty()) return std::nullopt;
    Verb verb = flags.count(StateFlag::cold)   ? Verb::cool
                : flags.count(StateFlag::hot)  ? Verb::heat
                                               : Verb::clean;
    auto it = world.device_map.find(verb);
    if (it == world.device_map.end()) return std::nullopt;
    return it->second;
}

ObjectProp flag_prop(StateFlag f) {
    switch (f) {
        case StateFlag::hot: return ObjectProp::heatable;
        case StateFlag::cold: return ObjectProp::coolable;
        case StateFlag::clean: return ObjectProp::cleanable;
        case StateFlag::sliced: return ObjectProp::sliceable;
    }
    return ObjectProp::heatable;
}

}  // namespace

std::optional<TaskGoal> sample_goal(const WorldSpec& world, RngStream& rng,
                                    const std::vector<GoalTemplate>& templates) {
    struct Candidate {
        GoalTemplate tmpl;
        ObjectClass cls;
        std::string receptacle;
    };
    std::vector<Candidate> candidates;
    for (GoalTemplate t : templates) {
        auto flags = goal_template_state(t);
        if (!flags.empty()) {
            auto dev_kind = template_device_kind(world, t);
            if (!dev_kind) continue;
            bool has_device = std::any_of(world.locations.begin(), world.locations.end(),
                                          [&](const LocationSpec& l) { return l.kind == *dev_kind; });
            if (!has_device) continue;
        }
        std::set<ObjectClass> classes;
        for (const auto& obj : world.objects) {
            bool ok = true;
            for (StateFlag f : flags) ok = ok && obj.properties.count(flag_prop(f));
            if (ok) classes.insert(obj.cls);
        }
        for (ObjectClass cls : classes) {
            for (const auto& loc : world.locations) {
                // Skip pre-satisfied goals: for stateless templates the target
                // receptacle may not already hold an instance of the class.
                if (flags.empty()) {
                    bool occupied = std::any_of(
                        world.objects.begin(), world.objects.end(), [&](const ObjectSpec& o) {
                            return o.cls == cls && o.initial_location == loc.id;
                        });
                    if (occupied) continue;
                }
                candidates.push_back({t, cls, loc.id});
            }
        }
    }
    if (candidates.empty()) return std::nullopt;
    const Candidate& pick = candidates[static_cast<size_t>(rng.next_below(candidates.size()))];
    return TaskGoal{pick.tmpl, pick.cls, pick.receptacle, goal_template_state(pick.tmpl)};
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

namespace {

std::vector<LocationKind> location_kind_sequence(RoomKind room, int n_locations) {
    std::vector<LocationKind> kinds;
    using LK = LocationKind;
    if (room == RoomKind::bedroom) {
        kinds = {LK::bed, LK::diningtable, LK::garbagecan};
        static const std::vector<LK> fill = {LK::drawer, LK::drawer,    LK::sidetable,
                                             LK::drawer, LK::drawer,    LK::sidetable,
                                             LK::drawer, LK::sidetable, LK::drawer};
        for (int i = 0; static_cast<int>(kinds.size()) < n_locations; ++i) {
            kinds.push_back(fill[static_cast<size_t>(i) % fill.size()]);
        }
    } else {
        kinds = {LK::countertop, LK::fridge, LK::sinkbasin, LK::coffeemachine};
        static const std::vector<LK> fill = {LK::cabinet, LK::microwave, LK::countertop,
                                             LK::cabinet, LK::drawer,    LK::countertop,
                                             LK::cabinet, LK::drawer};
        for (int i = 0; static_cast<int>(kinds.size()) < n_locations; ++i) {
            kinds.push_back(fill[static_cast<size_t>(i) % fill.size()]);
        }
    }
    kinds.resize(static_cast<size_t>(n_locations));
    return kinds;
}

const std::vector<ObjectClass>& room_object_pool(RoomKind room) {
    using OC = ObjectClass;
    static const std::vector<OC> bedroom = {OC::book,     OC::laptop,   OC::pillow, OC::cd,
                                            OC::cellphone, OC::keychain, OC::pencil};
    static const std::vector<OC> kitchen = {OC::mug,   OC::glassbottle, OC::apple,
                                            OC::plate, OC::cellphone,   OC::keychain};
    return room == RoomKind::bedroom ? bedroom : kitchen;
}

const std::vector<ObjectClass>& room_mandatory_classes(RoomKind room) {
    using OC = ObjectClass;
    static const std::vector<OC> bedroom = {OC::book, OC::pillow};
    static const std::vector<OC> kitchen = {OC::mug, OC::apple, OC::plate};
    return room == RoomKind::bedroom ? bedroom : kitchen;
}

}  // namespace

WorldSpec generate_world(uint64_t seed, const GenParams& params) {
    if (params.n_locations < 4 || params.n_locations > 12) {
        throw std::invalid_argument("n_locations must be in [4,12]");
    }
    if (params.n_objects < 4 || params.n_objects > 20) {
        throw std::invalid_argument("n_objects must be in [4,20]");
    }

    WorldSpec world;
    world.seed = seed;
    world.device_map = default_device_map();
    RngStream rng = RngStream(seed).derive("worldgen");

    // Receptacles: kind multiset is a pure function of (room_kind,
    // n_locations); instance numbers follow generation order per kind.
    std::map<LocationKind, int> kind_counts;
    for (LocationKind kind : location_kind_sequence(params.room_kind, params.n_locations)) {
        int n = ++kind_counts[kind];
        LocationSpec loc;
        loc.id = std::string(kind_name(kind)) + " " + std::to_string(n);
        loc.kind = kind;
        loc.container = is_container_kind(kind);
        loc.initially_open = loc.container ? rng.derive("open").derive(world.locations.size())
                                                 .next_bool(0.25)
                                           : true;
        world.locations.push_back(std::move(loc));
    }

    // Objects: mandatory classes first, then draws from the room pool.
    std::vector<ObjectClass> classes = room_mandatory_classes(params.room_kind);
    RngStream class_rng = rng.derive("classes");
    const auto& pool = room_object_pool(params.room_kind);
    while (static_cast<int>(classes.size()) < params.n_objects) {
        classes.push_back(pool[static_cast<size_t>(class_rng.next_below(pool.size()))]);
    }
    classes.resize(static_cast<size_t>(params.n_objects));

    RngStream place_rng = rng.derive("placement");
    std::map<ObjectClass, int> class_counts;
    for (size_t i = 0; i < classes.size(); ++i) {
        ObjectClass cls = classes[i];
        ObjectSpec obj;
        obj.id = std::string(class_name(cls)) + " " + std::to_string(++class_counts[cls]);
        obj.cls = cls;
        obj.properties = class_properties(cls);
        // Prior-consistent placement: draw among receptacle kinds where this
        // class is customarily found; fall back to any receptacle.
        std::vector<const LocationSpec*> options;
        for (LocationKind prior : class_prior_kinds(cls)) {
            for (const auto& loc : world.locations) {
                if (loc.kind == prior) options.push_back(&loc);
            }
        }
        if (options.empty()) {
            for (const auto& loc : world.locations) options.push_back(&loc);
        }
        RngStream obj_rng = place_rng.derive(i);
        obj.initial_location = options[static_cast<size_t>(obj_rng.next_below(options.size()))]->id;
        world.objects.push_back(std::move(obj));
    }

    std::ostringstream id;
    id << room_kind_name(params.room_kind) << "-" << params.n_locations << "x"
       << params.n_objects << "-s" << seed;
    world.world_id = id.str();

    validate_world(world);
    return world;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

bool EnvState::same_situation(const EnvState& other) const {
    return agent_location == other.agent_location && carrying == other.carrying &&
           object_locations == other.object_locations && container_open == other.container_open &&
           object_state == other.object_state;
}

std::pair<EnvState, std::string> reset(WorldPtr world,
                                       const std::optional<TaskGoal>& goal) {
    if (!world) throw std::invalid_argument("reset: null world");
    if (goal) {
        // Structural satisfiability; dynamic solvability is the caller's
        // contract (see check_solvable).
        if (!world->find_location(goal->target_receptacle)) {
            throw std::invalid_argument("goal receptacle not in world: " +
                                        goal->target_receptacle);
        }
        bool class_ok = false;
        for (const auto& obj : world->objects) {
            if (obj.cls != goal->target_object_class) continue;
            bool props = true;
            for (StateFlag f : goal->required_state) props = props && obj.properties.count(flag_prop(f));
            class_ok = class_ok || props;
        }
        if (!class_ok) {
            throw std::invalid_argument("goal class unsatisfiable in world: " +
                                        std::string(class_name(goal->target_object_class)));
        }
        for (StateFlag f : goal->required_state) {
            Verb verb = f == StateFlag::cold ? Verb::cool : f == StateFlag::hot ? Verb::heat : Verb::clean;
            auto it = world->device_map.find(verb);
            bool dev = it != world->device_map.end() &&
                       std::any_of(world->locations.begin(), world->locations.end(),
                                   [&](const LocationSpec& l) { return l.kind == it->second; });
            if (!dev) throw std::invalid_argument("goal requires a device absent from world");
        }
    }

    EnvState state;
    state.world = std::move(world);
    for (const auto& obj : state.world->objects) {
        state.object_locations[obj.id] = obj.initial_location;
        state.object_state[obj.id] = {};
    }
    for (const auto& loc : state.world->locations) {
        if (loc.container) state.container_open[loc.id] = loc.initially_open;
    }
    std::string overview = render_room_overview(*state.world);
    return {std::move(state), std::move(overview)};
}

namespace {

StepRecord make_record(const EnvState& state, const Action& a, std::string obs, StepOutcome out) {
    StepRecord rec;
    rec.index = state.step_count;
    rec.action_text = action_text(a);
    rec.action = a;
    rec.observation = std::move(obs);
    rec.outcome = out;
    return rec;
}

}  // namespace

StepRecord step(EnvState& state, const Action& action) {
    const WorldSpec& world = *state.world;
    ++state.step_count;

    auto noop = [&] {
        return make_record(state, action, std::string(kNoopObservation), StepOutcome::noop);
    };
    auto ok = [&](std::string obs) {
        return make_record(state, action, std::move(obs), StepOutcome::ok);
    };

    switch (action.verb) {
        case Verb::done:
            return make_record(state, action, "Episode ended.", StepOutcome::terminal);

        case Verb::look: {
            if (state.agent_location.empty()) return ok(render_room_overview(world));
            const LocationSpec* loc = world.find_location(state.agent_location);
            return ok(render_contents(state, *loc, "You are at the " + loc->id + "."));
        }

        case Verb::inventory: {
            if (state.carrying.empty()) return ok("You are not carrying anything.");
            return ok("You are carrying: a " + state.carrying + ".");
        }

        case Verb::go_to: {
            const LocationSpec* loc = world.find_location(action.arg1);
            if (!loc || state.agent_location == loc->id) return noop();
            state.agent_location = loc->id;
            return ok(render_contents(state, *loc, arrival_phrase(loc->id)));
        }

        case Verb::open: {
            const LocationSpec* loc = world.find_location(action.arg1);
            if (!loc || !loc->container || state.agent_location != loc->id) return noop();
            if (state.container_open.at(loc->id)) return noop();
            state.container_open[loc->id] = true;
            return ok("You open the " + loc->id + ". In it, you see " +
                      join_entities(objects_at(state, loc->id)) + ".");
        }

        case Verb::close: {
            const LocationSpec* loc = world.find_location(action.arg1);
            if (!loc || !loc->container || state.agent_location != loc->id) return noop();
            if (!state.container_open.at(loc->id)) return noop();
            state.container_open[loc->id] = false;
            return ok("You close the " + loc->id + ".");
        }

        case Verb::take: {
            const ObjectSpec* obj = world.find_object(action.arg1);
            const LocationSpec* loc = world.find_location(action.arg2);
            if (!obj || !loc) return noop();
            if (state.agent_location != loc->id) return noop();
            if (!state.carrying.empty()) return noop();
            auto it = state.object_locations.find(obj->id);
            if (it == state.object_locations.end() || it->second != loc->id) return noop();
            if (loc->container && !state.container_open.at(loc->id)) return noop();
            state.object_locations.erase(it);
            state.carrying = obj->id;
            return ok("You pick up the " + obj->id + " from the " + loc->id + ".");
        }

        case Verb::move: {
            const ObjectSpec* obj = world.find_object(action.arg1);
            const LocationSpec* loc = world.find_location(action.arg2);
            if (!obj || !loc) return noop();
            if (state.carrying != obj->id) return noop();
            if (state.agent_location != loc->id) return noop();
            if (loc->container && !state.container_open.at(loc->id)) return noop();
            if (loc->requires_clear && !objects_at(state, loc->id).empty()) return noop();
            state.carrying.clear();
            state.object_locations[obj->id] = loc->id;
            return ok("You move the " + obj->id + " to the " + loc->id + ".");
        }

        case Verb::examine: {
            if (state.carrying != action.arg1 || action.arg1.empty()) return noop();
            return ok("There's nothing special about " + action.arg1 + ".");
        }

        case Verb::heat:
        case Verb::cool:
        case Verb::clean: {
            const ObjectSpec* obj = world.find_object(action.arg1);
            const LocationSpec* loc = world.find_location(action.arg2);
            if (!obj || !loc) return noop();
            if (state.carrying != obj->id) return noop();
            if (state.agent_location != loc->id) return noop();
            auto dev = world.device_map.find(action.verb);
            if (dev == world.device_map.end() || loc->kind != dev->second) return noop();
            ObjectProp prop = action.verb == Verb::heat   ? ObjectProp::heatable
                              : action.verb == Verb::cool ? ObjectProp::coolable
                                                          : ObjectProp::cleanable;
            if (!obj->properties.count(prop)) return noop();
            StateFlag flag = action.verb == Verb::heat   ? StateFlag::hot
                             : action.verb == Verb::cool ? StateFlag::cold
                                                         : StateFlag::clean;
            state.object_state[obj->id].insert(flag);
            std::string verb(verb_name(action.verb));
            return ok("You " + verb + " the " + obj->id + " using the " + loc->id + ".");
        }
    }
    return noop();
}

StepRecord step_text(EnvState& state, std::string_view text) {
    auto action = parse_action(text);
    if (action) {
        StepRecord rec = step(state, *action);
        return rec;
    }
    ++state.step_count;
    StepRecord rec;
    rec.index = state.step_count;
    rec.action_text = std::string(text);
    rec.action = std::nullopt;
    rec.observation = std::string(kNoopObservation);
    rec.outcome = StepOutcome::noop;
    return rec;
}

bool check_task_success(const EnvState& state, const TaskGoal& goal) {
    for (const auto& obj : state.world->objects) {
        if (obj.cls != goal.target_object_class) continue;
        auto it = state.object_locations.find(obj.id);
        if (it == state.object_locations.end() || it->second != goal.target_receptacle) continue;
        const auto& flags = state.object_state.at(obj.id);
        bool satisfied = std::all_of(goal.required_state.begin(), goal.required_state.end(),
                                     [&](StateFlag f) { return flags.count(f) > 0; });
        if (satisfied) return true;
    }
    return false;
}

ReachableSet enumerate_reachable(const WorldSpec& world) {
    ReachableSet out;
    // goto is unrestricted and open is always executable at a container, so
    // the position/visibility closure covers every location and object.
    for (const auto& loc : world.locations) out.locations.push_back(loc.id);
    for (const auto& obj : world.objects) out.objects.push_back(obj.id);
    for (const auto& loc : world.locations) {
        if (loc.container) {
            out.affordances.emplace_back(Verb::open, loc.id);
            out.affordances.emplace_back(Verb::close, loc.id);
        }
    }
    for (const auto& obj : world.objects) {
        out.affordances.emplace_back(Verb::take, obj.id);
    }
    for (const auto& [verb, dev_kind] : world.device_map) {
        bool has_device = std::any_of(world.locations.begin(), world.locations.end(),
                                      [&](const LocationSpec& l) { return l.kind == dev_kind; });
        if (!has_device) continue;
        ObjectProp prop = verb == Verb::heat   ? ObjectProp::heatable
                          : verb == Verb::cool ? ObjectProp::coolable
                                               : ObjectProp::cleanable;
        bool has_object = std::any_of(world.objects.begin(), world.objects.end(),
                                      [&](const ObjectSpec& o) { return o.properties.count(prop); });
        if (has_object) out.affordances.emplace_back(verb, std::string(kind_name(dev_kind)));
    }
    return out;
}

}  // namespace eccl
