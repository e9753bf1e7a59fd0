#pragma once

#include <cstdint>
#include <string>

namespace dualcluster::format {

// Floating-point text with 17 significant digits: round-trips exactly.
std::string full_double(double v);

// FNV-1a over a byte string (input hashes for run manifests).
std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t fnv1a_file(const std::string& path);

}  // namespace dualcluster::format
