#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "geomax/decomposition.hpp"
#include "geomax/maximal.hpp"

namespace geomax {

/// Columns x[,y[,z]],value with cell-center coordinates.
void write_field_csv(const MaximalField& field, std::ostream& os);
/// "GMFD" magic, u32 dim, u32 res, window lo/hi, then res^dim doubles.
void write_field_binary(const MaximalField& field, std::ostream& os);
MaximalField read_field_binary(std::istream& is);

/// Run-length encoding of the bit sequence in grid order, starting with a 0-run:
/// "dim res:r0,r1,r2,...".
std::string encode_rle(const CellSet& s);
CellSet decode_rle(const std::string& text);

nlohmann::json to_json(const RectBox& box);
nlohmann::json cz_to_json(const GridMeasure& mu, const CZSelection& sel);
nlohmann::json copies_to_json(const GridMeasure& mu, const CopiesResult& copies);

/// Minimal CSV table: header row plus numeric/text rows.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  void write(std::ostream& os) const;
};

/// Shortest round-trip decimal form.
std::string fmt(double v);

}  // namespace geomax
