#include "stepflow/field_io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>

#include "stepflow/errors.hpp"

namespace stepflow {

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void write_snapshot(const ScalarField& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  const std::int64_t n = f.grid().n;
  const double hdr[3] = {f.grid().L, f.slope()[0], f.slope()[1]};
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.values().size() * sizeof(double)));
  if (!out) throw InvalidInput("write failed: " + path.string());
}

ScalarField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open snapshot " + path.string());
  std::int64_t n = 0;
  double hdr[3] = {};
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(hdr), sizeof hdr);
  if (!in || n < 8 || n > (1 << 14)) throw InvalidInput("malformed snapshot header: " + path.string());
  const Grid g = Grid::make(static_cast<int>(n), hdr[0]);
  std::vector<double> v(g.size());
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!in) throw InvalidInput("truncated snapshot: " + path.string());
  return ScalarField(g, std::move(v), {hdr[1], hdr[2]});
}

void write_field_csv(const ScalarField& f, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  const int n = f.grid().n;
  const double dx = f.grid().spacing();
  const Vec2 B = f.slope();
  out << "x1,x2,h,h_total\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x1 = i * dx, x2 = j * dx, h = f.at(i, j);
      out << format_double(x1) << ',' << format_double(x2) << ',' << format_double(h) << ','
          << format_double(h + B[0] * x1 + B[1] * x2) << '\n';
    }
}

}  // namespace stepflow
