#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "erd/instance/instance.hpp"

namespace erd::instance {

/// Pretty-printed JSON document, fields in schema order, doubles written
/// with round-trip precision.
std::string serialize(const InstanceConfig& instance);

/// Strict inverse of serialize(): unknown or missing fields are errors.
/// Throws ParseError (naming the field, with a line number where one is
/// known) or VersionError when schema_version is not supported.
InstanceConfig deserialize(std::string_view text);

nlohmann::ordered_json to_json(const InstanceConfig& instance);
/// `source` is the original text, used only to attach line numbers to errors.
InstanceConfig from_json(const nlohmann::json& doc, std::string_view source = {});

InstanceConfig load_instance(const std::filesystem::path& path);
void save_instance(const InstanceConfig& instance, const std::filesystem::path& path);

}  // namespace erd::instance
