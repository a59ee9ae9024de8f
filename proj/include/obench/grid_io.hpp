#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "obench/grid.hpp"

namespace obench {

/// OBG v1: "OBGRID01", u64 LE header length, UTF-8 JSON header, float64 LE payload.
inline constexpr char kGridMagic[8] = {'O', 'B', 'G', 'R', 'I', 'D', '0', '1'};

void write_grid(const GriddedField& field, const std::filesystem::path& path);
GriddedField read_grid(const std::filesystem::path& path);

/// In-memory form of the OBG encoding; the header uses sorted keys.
std::string encode_grid(const GriddedField& field);
GriddedField decode_grid(const std::string& bytes);

/// Track CSV: header `time,lat,lon,ssh`, ISO-8601 UTC times, LF endings.
void write_track(const AlongTrackSet& set, const std::filesystem::path& path);
/// Without an explicit epoch the set is anchored at midnight of its first record.
AlongTrackSet read_track(const std::filesystem::path& path, std::optional<Timestamp> epoch = std::nullopt);

std::string encode_track(const AlongTrackSet& set);
AlongTrackSet decode_track(const std::string& text, std::optional<Timestamp> epoch = std::nullopt);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace obench
