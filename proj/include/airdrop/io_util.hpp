#pragma once

#include <string>
#include <string_view>

namespace airdrop {

/// Shortest round-trippable decimal rendering used by every CSV writer.
std::string fmt_double(double v);

/// Write via temp file + rename so readers never observe a partial file.
void atomic_write(const std::string& path, std::string_view content);

std::string read_file(const std::string& path); // throws Error(IoError)

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string& path);

} // namespace airdrop
