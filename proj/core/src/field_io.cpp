#include "solab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace solab {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ofstream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated field file");
  return to_little(v);
}

}  // namespace

void write_field_binary(const std::string& path, const ScalarField& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  const Grid& g = *u.grid;
  put<std::uint64_t>(os, static_cast<std::uint64_t>(g.n()));
  for (int a = 0; a < g.dim(); ++a) put<std::uint64_t>(os, g.size(a));
  for (int a = 0; a < g.dim(); ++a) put<double>(os, g.spacing(a));
  for (int a = 0; a < g.dim(); ++a) put<double>(os, g.lower(a));
  for (double v : u.values) put<double>(os, v);
  if (!os) throw std::runtime_error("write failed for " + path);
}

ScalarField read_field_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  const auto n = get<std::uint64_t>(is);
  if (n < 1 || n > 64) throw std::runtime_error("bad group index in " + path);
  const std::size_t d = 2 * n + 1;
  std::vector<std::size_t> sizes(d);
  std::vector<double> h(d), lo(d), hi(d);
  for (auto& s : sizes) s = get<std::uint64_t>(is);
  for (auto& v : h) v = get<double>(is);
  for (auto& v : lo) v = get<double>(is);
  for (std::size_t a = 0; a < d; ++a) hi[a] = lo[a] + h[a] * static_cast<double>(sizes[a] - 1);
  auto g = std::make_shared<const Grid>(static_cast<int>(n), lo, hi, sizes);
  std::vector<double> values(g->node_count());
  for (auto& v : values) v = get<double>(is);
  return ScalarField(g, std::move(values));
}

void write_field_csv(const std::string& path, const ScalarField& u) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  const Grid& g = *u.grid;
  for (int a = 0; a + 1 < g.dim(); ++a) os << 'x' << (a + 1) << ',';
  os << "t,value\n";
  os << std::setprecision(17);
  std::vector<double> x(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.coords(i, x);
    for (double c : x) os << c << ',';
    os << u.values[i] << '\n';
  }
  if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace solab
