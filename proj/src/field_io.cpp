#include "reachnav/field_io.hpp"

#include <algorithm>
#include <cstdio>

#include "reachnav/binary_io.hpp"
#include "reachnav/errors.hpp"

namespace reachnav {

namespace {
constexpr char kFieldMagic[4] = {'R', 'N', 'V', 'F'};
constexpr std::uint32_t kFieldVersion = 1;
}  // namespace

std::vector<std::uint8_t> encode_field(const ValueField& field) {
  io::Writer w;
  w.put_bytes(kFieldMagic, 4);
  w.put(kFieldVersion);
  for (int d = 0; d < 4; ++d) {
    const Axis& ax = field.grid().axis(d);
    w.put(ax.lo);
    w.put(ax.hi);
    w.put(static_cast<std::uint32_t>(ax.count));
    w.put(static_cast<std::uint8_t>(ax.periodic));
  }
  w.put(static_cast<std::uint8_t>(field.kind()));
  w.put(field.unreachable());
  const auto vals = field.values();
  w.put_bytes(vals.data(), vals.size() * sizeof(double));
  return std::move(w.bytes());
}

ValueField decode_field(const std::vector<std::uint8_t>& bytes) {
  io::Reader r(bytes);
  char magic[4];
  r.get_bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kFieldMagic))
    throw ValidationError("not a value field file (bad magic)");
  if (r.get<std::uint32_t>() != kFieldVersion)
    throw ValidationError("unsupported value field version");
  std::array<Axis, 4> axes;
  for (auto& ax : axes) {
    ax.lo = r.get<double>();
    ax.hi = r.get<double>();
    ax.count = static_cast<int>(r.get<std::uint32_t>());
    ax.periodic = r.get<std::uint8_t>() != 0;
  }
  const auto kind = r.get<std::uint8_t>();
  if (kind > 2) throw ValidationError("unknown value field kind");
  const double sentinel = r.get<double>();
  Grid4D grid = build_grid(axes);
  if (r.remaining() != grid.size() * sizeof(double))
    throw ValidationError("value field payload size mismatch");
  std::vector<double> vals(grid.size());
  r.get_bytes(vals.data(), vals.size() * sizeof(double));
  return ValueField(std::move(grid), std::move(vals),
                    static_cast<FieldKind>(kind), sentinel);
}

void write_field(const ValueField& field, const std::filesystem::path& path) {
  io::write_file(path, encode_field(field));
}

ValueField read_field(const std::filesystem::path& path) {
  return decode_field(io::read_file(path));
}

std::string slice_csv(const ValueField& field, int v_index, int phi_index) {
  const Grid4D& g = field.grid();
  if (v_index < 0 || v_index >= g.count(kV) || phi_index < 0 ||
      phi_index >= g.count(kPhi))
    throw DomainError("slice index outside grid");
  std::string out = "x,y,value\n";
  char buf[96];
  for (int j = 0; j < g.count(kY); ++j)
    for (int i = 0; i < g.count(kX); ++i) {
      std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.9g\n", g.coord(kX, i),
                    g.coord(kY, j), field.at(Index4{i, j, v_index, phi_index}));
      out += buf;
    }
  return out;
}

}  // namespace reachnav
