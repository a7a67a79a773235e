#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "reachnav/grid.hpp"

namespace reachnav {

// Value field file layout (little-endian):
//   char[4]  "RNVF"
//   u32      version (1)
//   4 x { f64 lo, f64 hi, u32 count, u8 periodic }   for x, y, v, phi
//   u8       kind (0 TTR, 1 TTC, 2 COST)
//   f64      unreachable sentinel
//   f64[]    values, x fastest, then y, v, phi
std::vector<std::uint8_t> encode_field(const ValueField& field);
ValueField decode_field(const std::vector<std::uint8_t>& bytes);
void write_field(const ValueField& field, const std::filesystem::path& path);
ValueField read_field(const std::filesystem::path& path);

// CSV of the (x, y) slice at fixed v and phi node indices: "x,y,value".
std::string slice_csv(const ValueField& field, int v_index, int phi_index);

}  // namespace reachnav
