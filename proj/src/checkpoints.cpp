#include "eccl/checkpoints.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "eccl/serialize.hpp"

namespace eccl {

std::string_view checkpoint_category_name(CheckpointCategory c) {
    switch (c) {
        case CheckpointCategory::location: return "location";
        case CheckpointCategory::object: return "object";
        case CheckpointCategory::affordance: return "affordance";
    }
    return "location";
}

namespace {

std::optional<CheckpointCategory> category_from_name(std::string_view s) {
    if (s == "location") return CheckpointCategory::location;
    if (s == "object") return CheckpointCategory::object;
    if (s == "affordance") return CheckpointCategory::affordance;
    return std::nullopt;
}

// Case-insensitive, word-boundary-anchored containment, so "book 1" never
// matches inside "notebook 1" or "book 12".
bool contains_entity(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return false;
    auto lower = [](char c) { return std::tolower(static_cast<unsigned char>(c)); };
    auto is_word = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0;
    };
    for (size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool match = true;
        for (size_t k = 0; k < needle.size(); ++k) {
            if (lower(haystack[i + k]) != lower(needle[k])) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        bool left_ok = i == 0 || !is_word(haystack[i - 1]);
        size_t end = i + needle.size();
        bool right_ok = end == haystack.size() || !is_word(haystack[end]);
        if (left_ok && right_ok) return true;
    }
    return false;
}

}  // namespace

CheckpointSet build_checkpoints(const WorldSpec& world) {
    CheckpointSet set;
    set.world_id = world.world_id;
    ReachableSet reachable = enumerate_reachable(world);

    auto reachable_location = [&](const std::string& id) {
        return std::find(reachable.locations.begin(), reachable.locations.end(), id) !=
               reachable.locations.end();
    };
    auto reachable_object = [&](const std::string& id) {
        return std::find(reachable.objects.begin(), reachable.objects.end(), id) !=
               reachable.objects.end();
    };
    auto reachable_affordance = [&](Verb v, const std::string& target) {
        return std::find(reachable.affordances.begin(), reachable.affordances.end(),
                         std::pair{v, target}) != reachable.affordances.end();
    };

    std::vector<std::string> seen_ids;
    auto add = [&](Checkpoint cp) {
        if (std::find(seen_ids.begin(), seen_ids.end(), cp.id) != seen_ids.end()) return;
        seen_ids.push_back(cp.id);
        set.checkpoints.push_back(std::move(cp));
    };

    for (const auto& loc : world.locations) {
        if (!reachable_location(loc.id)) continue;
        Checkpoint cp;
        cp.id = "location/" + loc.id;
        cp.category = CheckpointCategory::location;
        cp.match_text = arrival_phrase(loc.id);
        add(std::move(cp));
    }
    for (const auto& obj : world.objects) {
        if (!reachable_object(obj.id)) continue;
        Checkpoint cp;
        cp.id = "object/" + obj.id;
        cp.category = CheckpointCategory::object;
        cp.match_text = obj.id;
        add(std::move(cp));
    }
    for (const auto& loc : world.locations) {
        if (!loc.container) continue;
        for (Verb v : {Verb::open, Verb::close}) {
            if (!reachable_affordance(v, loc.id)) continue;
            Checkpoint cp;
            cp.id = "affordance/" + std::string(verb_name(v)) + " " + loc.id;
            cp.category = CheckpointCategory::affordance;
            cp.match_verb = v;
            cp.match_text = loc.id;
            add(std::move(cp));
        }
    }
    for (const auto& obj : world.objects) {
        if (!reachable_affordance(Verb::take, obj.id)) continue;
        Checkpoint cp;
        cp.id = "affordance/take " + obj.id;
        cp.category = CheckpointCategory::affordance;
        cp.match_verb = Verb::take;
        cp.match_text = obj.id;
        add(std::move(cp));
    }
    for (const auto& [verb, dev_kind] : world.device_map) {
        if (!reachable_affordance(verb, std::string(kind_name(dev_kind)))) continue;
        Checkpoint cp;
        cp.id = "affordance/" + std::string(verb_name(verb)) + " with " +
                std::string(kind_name(dev_kind));
        cp.category = CheckpointCategory::affordance;
        cp.match_verb = verb;
        cp.match_text = kind_name(dev_kind);
        add(std::move(cp));
    }

    if (set.checkpoints.empty()) {
        throw std::invalid_argument("world yields an empty checkpoint set: " + world.world_id);
    }
    return set;
}

bool match_step(const Checkpoint& cp, const StepRecord& rec) {
    switch (cp.category) {
        case CheckpointCategory::location:
            // Any observation carrying the arrival description counts,
            // whatever action produced it.
            return rec.outcome != StepOutcome::noop &&
                   rec.observation.find(cp.match_text) != std::string::npos;

        case CheckpointCategory::object: {
            if (rec.outcome != StepOutcome::ok || !rec.action) return false;
            Verb v = rec.action->verb;
            bool qualifying = v == Verb::go_to || v == Verb::open || v == Verb::examine ||
                              v == Verb::take || v == Verb::look;
            return qualifying && contains_entity(rec.observation, cp.match_text);
        }

        case CheckpointCategory::affordance: {
            if (rec.outcome != StepOutcome::ok || !rec.action) return false;
            if (rec.action->verb != cp.match_verb) return false;
            switch (*cp.match_verb) {
                case Verb::open:
                case Verb::close:
                case Verb::take:
                    return rec.action->arg1 == cp.match_text;
                case Verb::heat:
                case Verb::cool:
                case Verb::clean: {
                    // Device affordances match on the receptacle kind, so any
                    // instance of the device verifies the checkpoint.
                    size_t sp = rec.action->arg2.rfind(' ');
                    return rec.action->arg2.substr(0, sp) == cp.match_text;
                }
                default:
                    return false;
            }
        }
    }
    return false;
}

CoverageRecord coverage(const Trajectory& traj, const CheckpointSet& cps) {
    if (traj.world_id != cps.world_id) {
        throw std::invalid_argument("coverage: trajectory world '" + traj.world_id +
                                    "' does not match checkpoint world '" + cps.world_id + "'");
    }
    IncrementalTracker tracker(cps);
    for (const auto& rec : traj.steps) tracker.observe(rec);
    return tracker.record();
}

double ecc(const CoverageRecord& cov) {
    if (cov.total < 1) throw std::invalid_argument("ecc: empty checkpoint set");
    return static_cast<double>(cov.covered_count) / static_cast<double>(cov.total);
}

IncrementalTracker::IncrementalTracker(const CheckpointSet& cps)
    : cps_(&cps), first_hit_(cps.checkpoints.size()) {}

void IncrementalTracker::observe(const StepRecord& rec) {
    ++fed_;
    for (size_t i = 0; i < cps_->checkpoints.size(); ++i) {
        if (first_hit_[i]) continue;
        if (match_step(cps_->checkpoints[i], rec)) {
            first_hit_[i] = rec.index;
            ++covered_;
        }
    }
}

double IncrementalTracker::current_ecc() const {
    return static_cast<double>(covered_) / static_cast<double>(cps_->checkpoints.size());
}

CoverageRecord IncrementalTracker::record() const {
    CoverageRecord out;
    out.total = cps_->size();
    out.covered_count = covered_;
    for (size_t i = 0; i < cps_->checkpoints.size(); ++i) {
        out.hits[cps_->checkpoints[i].id] = first_hit_[i];
    }
    return out;
}

nlohmann::json checkpoints_to_json(const CheckpointSet& cps) {
    nlohmann::json j;
    j["schema"] = kCheckpointSchema;
    j["world_id"] = cps.world_id;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& cp : cps.checkpoints) {
        nlohmann::json c;
        c["id"] = cp.id;
        c["category"] = checkpoint_category_name(cp.category);
        c["match_text"] = cp.match_text;
        if (cp.match_verb) c["match_verb"] = verb_name(*cp.match_verb);
        arr.push_back(std::move(c));
    }
    j["checkpoints"] = std::move(arr);
    return j;
}

CheckpointSet checkpoints_from_json(const nlohmann::json& j) {
    require_schema(j, kCheckpointSchema);
    CheckpointSet set;
    set.world_id = j.at("world_id").get<std::string>();
    for (const auto& c : j.at("checkpoints")) {
        Checkpoint cp;
        cp.id = c.at("id").get<std::string>();
        auto cat = category_from_name(c.at("category").get<std::string>());
        if (!cat) throw std::runtime_error("unknown checkpoint category");
        cp.category = *cat;
        cp.match_text = c.at("match_text").get<std::string>();
        if (c.contains("match_verb")) {
            cp.match_verb = verb_from_name(c.at("match_verb").get<std::string>());
            if (!cp.match_verb) throw std::runtime_error("unknown checkpoint verb");
        }
        set.checkpoints.push_back(std::move(cp));
    }
    if (set.checkpoints.empty()) throw std::runtime_error("checkpoint file is empty");
    return set;
}

}  // namespace eccl
