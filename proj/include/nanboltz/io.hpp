#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nanboltz/vec3.hpp"

namespace nanboltz::io {

/// Reads a velocity cloud. Accepts the interchange header `vx,vy,vz` or the
/// snapshot header `particle,vx,vy,vz` (index column ignored).
std::vector<Vec3> read_cloud_csv(const std::string& path);

/// Interchange format: header `vx,vy,vz`, one row per point.
void write_cloud_csv(const std::string& path, std::span<const Vec3> pts);

/// Snapshot format: header `particle,vx,vy,vz`, rows indexed from 0.
void write_snapshot_csv(const std::string& path, std::span<const Vec3> pts);

/// Round-trip-stable decimal rendering used for every CSV number, so equal
/// inputs yield byte-identical files.
std::string format_double(double v);

uint64_t fnv1a64(std::string_view data);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace nanboltz::io
