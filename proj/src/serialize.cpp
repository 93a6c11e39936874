#include "eccl/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eccl {

using nlohmann::json;

void require_schema(const json& j, std::string_view expected) {
    if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string() ||
        j["schema"].get<std::string>() != expected) {
        throw std::runtime_error("schema mismatch: expected " + std::string(expected));
    }
}

json world_to_json(const WorldSpec& world) {
    json j;
    j["schema"] = kWorldSchema;
    j["world_id"] = world.world_id;
    j["seed"] = world.seed;
    json locs = json::array();
    for (const auto& loc : world.locations) {
        json l;
        l["id"] = loc.id;
        l["kind"] = kind_name(loc.kind);
        l["container"] = loc.container;
        l["initially_open"] = loc.initially_open;
        l["requires_clear"] = loc.requires_clear;
        locs.push_back(std::move(l));
    }
    j["locations"] = std::move(locs);
    json objs = json::array();
    for (const auto& obj : world.objects) {
        json o;
        o["id"] = obj.id;
        o["class"] = class_name(obj.cls);
        o["initial_location"] = obj.initial_location;
        json props = json::array();
        for (ObjectProp p : obj.properties) props.push_back(prop_name(p));
        o["properties"] = std::move(props);
        objs.push_back(std::move(o));
    }
    j["objects"] = std::move(objs);
    json devices = json::object();
    for (const auto& [verb, kind] : world.device_map) {
        devices[std::string(verb_name(verb))] = kind_name(kind);
    }
    j["device_map"] = std::move(devices);
    return j;
}

WorldSpec world_from_json(const json& j) {
    require_schema(j, kWorldSchema);
    WorldSpec world;
    world.world_id = j.at("world_id").get<std::string>();
    world.seed = j.at("seed").get<uint64_t>();
    for (const auto& l : j.at("locations")) {
        LocationSpec loc;
        loc.id = l.at("id").get<std::string>();
        auto kind = kind_from_name(l.at("kind").get<std::string>());
        if (!kind) throw std::runtime_error("unknown location kind in world file");
        loc.kind = *kind;
        loc.container = l.at("container").get<bool>();
        loc.initially_open = l.at("initially_open").get<bool>();
        loc.requires_clear = l.value("requires_clear", false);
        world.locations.push_back(std::move(loc));
    }
    for (const auto& o : j.at("objects")) {
        ObjectSpec obj;
        obj.id = o.at("id").get<std::string>();
        auto cls = class_from_name(o.at("class").get<std::string>());
        if (!cls) throw std::runtime_error("unknown object class in world file");
        obj.cls = *cls;
        obj.initial_location = o.at("initial_location").get<std::string>();
        for (const auto& p : o.at("properties")) {
            auto prop = prop_from_name(p.get<std::string>());
            if (!prop) throw std::runtime_error("unknown object property in world file");
            obj.properties.insert(*prop);
        }
        world.objects.push_back(std::move(obj));
    }
    for (const auto& [verb_str, kind_str] : j.at("device_map").items()) {
        auto verb = verb_from_name(verb_str);
        auto kind = kind_from_name(kind_str.get<std::string>());
        if (!verb || !kind) throw std::runtime_error("bad device_map entry in world file");
        world.device_map[*verb] = *kind;
    }
    validate_world(world);
    return world;
}

json state_to_json(const EnvState& state) {
    json j;
    j["schema"] = kStateSchema;
    j["world_id"] = state.world->world_id;
    j["agent_location"] = state.agent_location;
    j["carrying"] = state.carrying;
    j["object_locations"] = state.object_locations;
    json open = json::object();
    for (const auto& [id, is_open] : state.container_open) open[id] = is_open;
    j["container_open"] = std::move(open);
    json flags = json::object();
    for (const auto& [id, set] : state.object_state) {
        json arr = json::array();
        for (StateFlag f : set) arr.push_back(state_flag_name(f));
        flags[id] = std::move(arr);
    }
    j["object_state"] = std::move(flags);
    j["step_count"] = state.step_count;
    return j;
}

EnvState state_from_json(const json& j, WorldPtr world) {
    require_schema(j, kStateSchema);
    if (j.at("world_id").get<std::string>() != world->world_id) {
        throw std::runtime_error("state snapshot belongs to a different world");
    }
    EnvState state;
    state.world = std::move(world);
    state.agent_location = j.at("agent_location").get<std::string>();
    state.carrying = j.at("carrying").get<std::string>();
    state.object_locations =
        j.at("object_locations").get<std::map<std::string, std::string>>();
    for (const auto& [id, is_open] : j.at("container_open").items()) {
        state.container_open[id] = is_open.get<bool>();
    }
    for (const auto& [id, arr] : j.at("object_state").items()) {
        std::set<StateFlag> set;
        for (const auto& f : arr) {
            auto flag = state_flag_from_name(f.get<std::string>());
            if (!flag) throw std::runtime_error("unknown state flag in snapshot");
            set.insert(*flag);
        }
        state.object_state[id] = std::move(set);
    }
    state.step_count = j.at("step_count").get<int>();
    return state;
}

json goal_to_json(const TaskGoal& goal) {
    json j;
    j["template"] = goal_template_name(goal.tmpl);
    j["target_object_class"] = class_name(goal.target_object_class);
    j["target_receptacle"] = goal.target_receptacle;
    json flags = json::array();
    for (StateFlag f : goal.required_state) flags.push_back(state_flag_name(f));
    j["required_state"] = std::move(flags);
    j["text"] = goal_text(goal);
    return j;
}

TaskGoal goal_from_json(const json& j) {
    TaskGoal goal;
    auto tmpl = goal_template_from_name(j.at("template").get<std::string>());
    auto cls = class_from_name(j.at("target_object_class").get<std::string>());
    if (!tmpl || !cls) throw std::runtime_error("bad goal file");
    goal.tmpl = *tmpl;
    goal.target_object_class = *cls;
    goal.target_receptacle = j.at("target_receptacle").get<std::string>();
    for (const auto& f : j.at("required_state")) {
        auto flag = state_flag_from_name(f.get<std::string>());
        if (!flag) throw std::runtime_error("bad required_state in goal file");
        goal.required_state.insert(*flag);
    }
    return goal;
}

std::string trajectory_to_jsonl(const Trajectory& traj) {
    std::ostringstream out;
    json header;
    header["schema"] = kTrajSchema;
    header["world_id"] = traj.world_id;
    header["mode"] = traj.mode;
    header["seed"] = traj.seed;
    header["reset_obs"] = traj.reset_observation;
    out << header.dump() << "\n";
    for (const auto& rec : traj.steps) {
        json line;
        line["i"] = rec.index;
        line["action"] = rec.action_text;
        line["obs"] = rec.observation;
        line["outcome"] = outcome_name(rec.outcome);
        out << line.dump() << "\n";
    }
    return out.str();
}

Trajectory trajectory_from_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    Trajectory traj;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error&) {
            throw std::runtime_error("trajectory line " + std::to_string(line_no) +
                                     ": malformed JSON");
        }
        if (!have_header) {
            require_schema(j, kTrajSchema);
            traj.world_id = j.at("world_id").get<std::string>();
            traj.mode = j.at("mode").get<std::string>();
            traj.seed = j.at("seed").get<uint64_t>();
            traj.reset_observation = j.value("reset_obs", "");
            have_header = true;
            continue;
        }
        try {
            StepRecord rec;
            rec.index = j.at("i").get<int>();
            rec.action_text = j.at("action").get<std::string>();
            rec.observation = j.at("obs").get<std::string>();
            auto outcome = outcome_from_name(j.at("outcome").get<std::string>());
            if (!outcome) throw std::runtime_error("bad outcome");
            rec.outcome = *outcome;
            rec.action = parse_action(rec.action_text);
            traj.steps.push_back(std::move(rec));
        } catch (const std::exception&) {
            throw std::runtime_error("trajectory line " + std::to_string(line_no) +
                                     ": bad step record");
        }
    }
    if (!have_header) throw std::runtime_error("trajectory file has no header line");
    return traj;
}

void persist_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
    write_text_file(path, trajectory_to_jsonl(traj));
}

Trajectory load_trajectory(const std::filesystem::path& path) {
    return trajectory_from_jsonl(read_text_file(path));
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

json read_json_file(const std::filesystem::path& path) {
    return json::parse(read_text_file(path));
}

}  // namespace eccl
