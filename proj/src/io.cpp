#include "geomax/io.hpp"

#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "geomax/error.hpp"

namespace geomax {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void Table::write(std::ostream& os) const {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

void write_field_csv(const MaximalField& field, std::ostream& os) {
  static const char* names[] = {"x", "y", "z"};
  const int n = field.shape.dim;
  for (int a = 0; a < n; ++a) os << names[a] << ',';
  os << "value\n";
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const auto c = field.shape.coords(i);
    for (int a = 0; a < n; ++a) {
      const double h = field.window.side(a) / field.shape.res;
      os << fmt(field.window.lo[a] + (c[a] + 0.5) * h) << ',';
    }
    os << fmt(field.values[i]) << '\n';
  }
}

void write_field_binary(const MaximalField& field, std::ostream& os) {
  os.write("GMFD", 4);
  const std::uint32_t dim = static_cast<std::uint32_t>(field.shape.dim);
  const std::uint32_t res = static_cast<std::uint32_t>(field.shape.res);
  os.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  os.write(reinterpret_cast<const char*>(&res), sizeof res);
  for (int a = 0; a < field.shape.dim; ++a) os.write(reinterpret_cast<const char*>(&field.window.lo[a]), sizeof(double));
  for (int a = 0; a < field.shape.dim; ++a) os.write(reinterpret_cast<const char*>(&field.window.hi[a]), sizeof(double));
  os.write(reinterpret_cast<const char*>(field.values.data()),
           static_cast<std::streamsize>(field.values.size() * sizeof(double)));
}

MaximalField read_field_binary(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "GMFD", 4) != 0) fail(ErrorKind::InvalidArgument, "read_field_binary: bad magic");
  std::uint32_t dim = 0, res = 0;
  is.read(reinterpret_cast<char*>(&dim), sizeof dim);
  is.read(reinterpret_cast<char*>(&res), sizeof res);
  require(is && dim >= 1 && dim <= 3 && res >= 1, "read_field_binary: bad header");
  MaximalField f;
  f.shape = GridShape{static_cast<int>(dim), static_cast<int>(res)};
  Vec lo(dim), hi(dim);
  for (std::uint32_t a = 0; a < dim; ++a) is.read(reinterpret_cast<char*>(&lo[a]), sizeof(double));
  for (std::uint32_t a = 0; a < dim; ++a) is.read(reinterpret_cast<char*>(&hi[a]), sizeof(double));
  f.window = RectBox::make(lo, hi);
  f.values.resize(f.shape.size());
  is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  require(static_cast<bool>(is), "read_field_binary: truncated stream");
  return f;
}

std::string encode_rle(const CellSet& s) {
  std::ostringstream os;
  os << s.shape().dim << ' ' << s.shape().res << ':';
  bool cur = false;
  std::size_t run = 0;
  bool first = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.test(i) == cur) {
      ++run;
      continue;
    }
    os << (first ? "" : ",") << run;
    first = false;
    cur = !cur;
    run = 1;
  }
  os << (first ? "" : ",") << run;
  return os.str();
}

CellSet decode_rle(const std::string& text) {
  std::istringstream is(text);
  int dim = 0, res = 0;
  char colon = 0;
  is >> dim >> res >> colon;
  require(is && colon == ':' && dim >= 1 && dim <= 3 && res >= 1, "decode_rle: bad header");
  CellSet s(GridShape{dim, res});
  std::size_t pos = 0;
  bool cur = false;
  std::string tok;
  while (std::getline(is, tok, ',')) {
    const std::size_t run = std::stoull(tok);
    require(pos + run <= s.size(), "decode_rle: runs exceed the grid");
    for (std::size_t i = 0; i < run; ++i) s.set(pos + i, cur);
    pos += run;
    cur = !cur;
  }
  require(pos == s.size(), "decode_rle: runs do not cover the grid");
  return s;
}

nlohmann::json to_json(const RectBox& box) {
  nlohmann::json j;
  j["lo"] = std::vector<double>(box.lo.data(), box.lo.data() + box.dim());
  j["hi"] = std::vector<double>(box.hi.data(), box.hi.data() + box.dim());
  return j;
}

nlohmann::json cz_to_json(const GridMeasure& mu, const CZSelection& sel) {
  nlohmann::json j;
  j["root"] = to_json(sel.root);
  j["beta"] = sel.beta;
  j["measure"] = mu.id();
  j["residual_mass"] = sel.residual_mass;
  auto& arr = j["selected"] = nlohmann::json::array();
  for (std::size_t i = 0; i < sel.selected.size(); ++i) {
    nlohmann::json e = to_json(sel.boxes[i]);
    e["depth"] = sel.selected[i].depth;
    e["mass"] = sel.masses[i];
    e["average"] = sel.averages[i];
    arr.push_back(std::move(e));
  }
  return j;
}

nlohmann::json copies_to_json(const GridMeasure& mu, const CopiesResult& c) {
  nlohmann::json j;
  j["measure"] = mu.id();
  j["copies"] = c.copies;
  j["max_depth"] = c.max_depth;
  j["disjoint"] = c.disjoint;
  j["mass"] = c.measure;
  j["lower_bound"] = c.lower_bound;
  j["xi"] = c.xi;
  j["psi"] = c.psi;
  j["rho"] = c.rho;
  auto& arr = j["first_level_frames"] = nlohmann::json::array();
  for (const auto& f : c.frames) arr.push_back(to_json(f));
  j["cells_rle"] = encode_rle(c.cells);
  return j;
}

}  // namespace geomax
