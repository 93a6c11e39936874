#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "eccl/world.hpp"

namespace eccl {

// Versioned JSON schemas. Every document carries a "schema" field
// ("eccl-world/v1", "eccl-traj/v1", ...); loading rejects mismatches.

inline constexpr std::string_view kWorldSchema = "eccl-world/v1";
inline constexpr std::string_view kStateSchema = "eccl-state/v1";
inline constexpr std::string_view kTrajSchema = "eccl-traj/v1";

nlohmann::json world_to_json(const WorldSpec& world);
WorldSpec world_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const EnvState& state);
// Re-attaches the given world; world_id must match the snapshot.
EnvState state_from_json(const nlohmann::json& j, WorldPtr world);

nlohmann::json goal_to_json(const TaskGoal& goal);
TaskGoal goal_from_json(const nlohmann::json& j);

// JSONL: header line {"schema","world_id","mode","seed","reset_obs"} then one
// line per step {"i","action","obs","outcome"}.
std::string trajectory_to_jsonl(const Trajectory& traj);
// Throws std::runtime_error naming the offending line on malformed input.
Trajectory trajectory_from_jsonl(const std::string& text);

void persist_trajectory(const Trajectory& traj, const std::filesystem::path& path);
Trajectory load_trajectory(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

// Throws std::runtime_error unless j["schema"] == expected.
void require_schema(const nlohmann::json& j, std::string_view expected);

}  // namespace eccl
