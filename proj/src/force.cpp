#include "taco/force.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace taco {

TactileFrame force_to_frame(const ForceSequence& records, const ForceImageMapping& mapping) {
  if (records.empty()) fail(Err::kEmptySequence, "force sequence is empty");
  mapping.validate();
  const size_t taxels = records[0].forces.size();
  if (taxels == 0) fail(Err::kEmptySequence, "record has zero taxels");

  TactileFrame frame(uint32_t(taxels), uint32_t(records.size()), SensorKind::kForceStacked);
  frame.mapping = mapping;
  for (size_t t = 0; t < records.size(); ++t) {
    const ForceRecord& rec = records[t];
    if (rec.forces.size() != taxels) {
      fail(Err::kInconsistentTaxelCount, "taxel count varies within sequence");
    }
    for (size_t n = 0; n < taxels; ++n) {
      for (int a = 0; a < 3; ++a) {
        frame.at(uint32_t(n), uint32_t(t), uint32_t(a)) = mapping.quantize(rec.forces[n][a], a);
      }
    }
  }
  return frame;
}

ForceSequence frame_to_force(const TactileFrame& frame, const ForceImageMapping& mapping) {
  if (frame.sensor_kind != SensorKind::kForceStacked) {
    fail(Err::kWrongSensorKind, "frame is not force-stacked");
  }
  mapping.validate();
  ForceSequence records(frame.height);
  for (uint32_t t = 0; t < frame.height; ++t) {
    records[t].timestamp = double(t);
    records[t].forces.resize(frame.width);
    for (uint32_t n = 0; n < frame.width; ++n) {
      for (int a = 0; a < 3; ++a) {
        records[t].forces[n][a] = mapping.dequantize(frame.at(n, t, uint32_t(a)), a);
      }
    }
  }
  return records;
}

namespace {

double parse_double(std::string_view field, const std::string& where) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    fail(Err::kUnsupportedFormat, where + ": bad numeric field '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

ForceSequence load_force_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Err::kUnreadableFile, path.string() + ": cannot open");

  std::string header;
  if (!std::getline(in, header)) fail(Err::kUnsupportedFormat, path.string() + ": empty file");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  auto cols = split_csv_line(header);
  if (cols.empty() || cols[0] != "t" || (cols.size() - 1) % 3 != 0 || cols.size() < 4) {
    fail(Err::kUnsupportedFormat, path.string() + ": expected header t,fx_*,fy_*,fz_*");
  }
  const size_t taxels = (cols.size() - 1) / 3;

  ForceSequence records;
  std::string line;
  size_t lineno = 1;
  double prev_t = -1.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (fields.size() != cols.size()) fail(Err::kUnsupportedFormat, where + ": field count mismatch");

    ForceRecord rec;
    rec.timestamp = parse_double(fields[0], where);
    if (rec.timestamp < 0.0 || rec.timestamp <= prev_t) {
      fail(Err::kUnsupportedFormat, where + ": timestamps must be non-negative and strictly increasing");
    }
    prev_t = rec.timestamp;
    rec.forces.resize(taxels);
    for (size_t n = 0; n < taxels; ++n) {
      rec.forces[n][0] = parse_double(fields[1 + n], where);
      rec.forces[n][1] = parse_double(fields[1 + taxels + n], where);
      rec.forces[n][2] = parse_double(fields[1 + 2 * taxels + n], where);
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) fail(Err::kEmptySequence, path.string() + ": no data rows");
  return records;
}

void save_force_csv(const ForceSequence& records, const std::filesystem::path& path) {
  if (records.empty()) fail(Err::kEmptySequence, "force sequence is empty");
  const size_t taxels = records[0].forces.size();
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
  if (!out) fail(Err::kUnwritableOutput, path.string() + ": cannot open for writing");

  out << "t";
  for (const char* axis : {"fx", "fy", "fz"}) {
    for (size_t n = 0; n < taxels; ++n) out << "," << axis << "_" << n;
  }
  out << "\n";

  std::ostringstream row;
  row.precision(17);
  for (const ForceRecord& rec : records) {
    if (rec.forces.size() != taxels) {
      fail(Err::kInconsistentTaxelCount, "taxel count varies within sequence");
    }
    row.str({});
    row << rec.timestamp;
    for (int a = 0; a < 3; ++a) {
      for (size_t n = 0; n < taxels; ++n) row << "," << rec.forces[n][a];
    }
    out << row.str() << "\n";
  }
  if (!out) fail(Err::kUnwritableOutput, path.string() + ": write failed");
}

ForceImageMapping load_mapping(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Err::kUnreadableFile, path.string() + ": cannot open");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(Err::kUnsupportedFormat, path.string() + ": " + e.what());
  }
  ForceImageMapping mapping;
  try {
    for (int a = 0; a < 3; ++a) {
      mapping.scale[a] = doc.at("scale").at(a).get<double>();
      mapping.offset[a] = doc.at("offset").at(a).get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Err::kUnsupportedFormat, path.string() + ": " + e.what());
  }
  mapping.validate();
  return mapping;
}

void save_mapping(const ForceImageMapping& mapping, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["scale"] = mapping.scale;
  doc["offset"] = mapping.offset;
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::kUnwritableOutput, path.string() + ": cannot open for writing");
  out << doc.dump(2) << "\n";
}

}  // namespace taco
