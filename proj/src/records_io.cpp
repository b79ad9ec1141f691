#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <iterator>
#include <limits>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubespec/error.hpp"
#include "cubespec/experiment.hpp"

namespace cubespec {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kColumnCount = std::size(kRecordColumns);

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

class RowParser {
 public:
  RowParser(const std::vector<std::string>& fields, std::size_t line_no)
      : fields_(fields), line_no_(line_no) {}

  [[noreturn]] void Bad(std::size_t col, const std::string& what) const {
    Fail(ErrorCode::kParse, "records line " + std::to_string(line_no_) +
                                ", column '" + std::string(kRecordColumns[col]) +
                                "': " + what);
  }

  const std::string& Raw(std::size_t col) const { return fields_[col]; }

  double Real(std::size_t col) const {
    const std::string& s = fields_[col];
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) Bad(col, "expected a number");
    return v;
  }

  template <typename Int>
  Int Integer(std::size_t col) const {
    const std::string& s = fields_[col];
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      Bad(col, "expected a non-negative integer");
    }
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), nullptr, 10);
    if (errno == ERANGE || v > static_cast<unsigned long long>(
                                   std::numeric_limits<Int>::max())) {
      Bad(col, "integer out of range");
    }
    return static_cast<Int>(v);
  }

  bool Flag(std::size_t col) const {
    const std::string& s = fields_[col];
    if (s == "true") return true;
    if (s == "false") return false;
    Bad(col, "expected true or false");
  }

  bool Empty(std::size_t col) const { return fields_[col].empty(); }

 private:
  const std::vector<std::string>& fields_;
  std::size_t line_no_;
};

TrialRecord ParseCsvRow(const std::vector<std::string>& f, std::size_t line_no) {
  if (f.size() != kColumnCount) {
    Fail(ErrorCode::kParse, "records line " + std::to_string(line_no) +
                                ": expected " + std::to_string(kColumnCount) +
                                " fields, found " + std::to_string(f.size()));
  }
  RowParser row(f, line_no);
  TrialRecord r;
  r.n = row.Integer<int>(0);
  r.p = row.Real(1);
  r.trial_index = row.Integer<std::uint64_t>(2);
  r.derived_seed = row.Integer<std::uint64_t>(3);
  r.m = row.Integer<std::uint64_t>(4);
  r.delta = row.Integer<int>(5);
  if (!row.Empty(6)) r.kappa = row.Integer<int>(6);
  const auto regime = ParseRegime(row.Raw(7));
  if (!regime) row.Bad(7, "unknown regime");
  r.regime = *regime;
  r.lambda1 = row.Real(8);
  r.iterations = row.Integer<int>(9);
  r.residual = row.Real(10);
  r.converged = row.Flag(11);
  r.prediction = row.Real(12);
  if (!row.Empty(13)) r.ratio = row.Real(13);
  if (!row.Empty(14)) r.largest_component_edges = row.Integer<std::uint64_t>(14);
  if (!row.Empty(15)) r.case4_shape = row.Flag(15);
  return r;
}

void CheckHeader(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < std::max(names.size(), kColumnCount); ++i) {
    if (i >= kColumnCount) {
      Fail(ErrorCode::kSchema, "schema mismatch: unexpected column '" +
                                   names[i] + "'");
    }
    if (i >= names.size()) {
      Fail(ErrorCode::kSchema, "schema mismatch: missing column '" +
                                   std::string(kRecordColumns[i]) + "'");
    }
    if (names[i] != kRecordColumns[i]) {
      Fail(ErrorCode::kSchema,
           "schema mismatch at column " + std::to_string(i + 1) +
               ": expected '" + std::string(kRecordColumns[i]) +
               "', found '" + names[i] + "'");
    }
  }
}

const char* BoolText(bool b) { return b ? "true" : "false"; }

ordered_json ToJson(const TrialRecord& r) {
  ordered_json j;
  j["n"] = r.n;
  j["p"] = r.p;
  j["trial_index"] = r.trial_index;
  j["derived_seed"] = r.derived_seed;
  j["m"] = r.m;
  j["delta"] = r.delta;
  j["kappa"] = r.kappa ? ordered_json(*r.kappa) : ordered_json(nullptr);
  j["regime"] = std::string(RegimeName(r.regime));
  j["lambda1"] = r.lambda1;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["converged"] = r.converged;
  j["prediction"] = r.prediction;
  j["ratio"] = r.ratio ? ordered_json(*r.ratio) : ordered_json(nullptr);
  j["largest_component_edges"] = r.largest_component_edges
                                     ? ordered_json(*r.largest_component_edges)
                                     : ordered_json(nullptr);
  j["case4_shape"] =
      r.case4_shape ? ordered_json(*r.case4_shape) : ordered_json(nullptr);
  return j;
}

TrialRecord FromJson(const ordered_json& j, std::size_t index) {
  const std::string where = "record " + std::to_string(index);
  if (!j.is_object()) Fail(ErrorCode::kParse, where + ": expected an object");
  for (const auto& col : kRecordColumns) {
    if (!j.contains(std::string(col))) {
      Fail(ErrorCode::kSchema,
           where + ": schema mismatch: missing field '" + std::string(col) + "'");
    }
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kRecordColumns), std::end(kRecordColumns), key) ==
        std::end(kRecordColumns)) {
      Fail(ErrorCode::kSchema,
           where + ": schema mismatch: unexpected field '" + key + "'");
    }
  }
  try {
    TrialRecord r;
    r.n = j.at("n").get<int>();
    r.p = j.at("p").get<double>();
    r.trial_index = j.at("trial_index").get<std::uint64_t>();
    r.derived_seed = j.at("derived_seed").get<std::uint64_t>();
    r.m = j.at("m").get<std::uint64_t>();
    r.delta = j.at("delta").get<int>();
    if (!j.at("kappa").is_null()) r.kappa = j.at("kappa").get<int>();
    const auto regime = ParseRegime(j.at("regime").get<std::string>());
    if (!regime) Fail(ErrorCode::kParse, where + ": unknown regime");
    r.regime = *regime;
    r.lambda1 = j.at("lambda1").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.residual = j.at("residual").get<double>();
    r.converged = j.at("converged").get<bool>();
    r.prediction = j.at("prediction").get<double>();
    if (!j.at("ratio").is_null()) r.ratio = j.at("ratio").get<double>();
    if (!j.at("largest_component_edges").is_null()) {
      r.largest_component_edges =
          j.at("largest_component_edges").get<std::uint64_t>();
    }
    if (!j.at("case4_shape").is_null()) {
      r.case4_shape = j.at("case4_shape").get<bool>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, where + ": " + e.what());
  }
}

}  // namespace

void WriteRecords(std::span<const TrialRecord> records, std::ostream& out,
                  RecordFormat format) {
  if (format == RecordFormat::kJson) {
    ordered_json arr = ordered_json::array();
    for (const TrialRecord& r : records) arr.push_back(ToJson(r));
    out << arr.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < kColumnCount; ++i) {
    out << (i ? "," : "") << kRecordColumns[i];
  }
  out << '\n';
  for (const TrialRecord& r : records) {
    out << r.n << ',' << FormatReal(r.p) << ',' << r.trial_index << ','
        << r.derived_seed << ',' << r.m << ',' << r.delta << ',';
    if (r.kappa) out << *r.kappa;
    out << ',' << RegimeName(r.regime) << ',' << FormatReal(r.lambda1) << ','
        << r.iterations << ',' << FormatReal(r.residual) << ','
        << BoolText(r.converged) << ',' << FormatReal(r.prediction) << ',';
    if (r.ratio) out << FormatReal(*r.ratio);
    out << ',';
    if (r.largest_component_edges) out << *r.largest_component_edges;
    out << ',';
    if (r.case4_shape) out << BoolText(*r.case4_shape);
    out << '\n';
  }
}

void WriteRecordsFile(std::span<const TrialRecord> records,
                      const std::string& path, RecordFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  WriteRecords(records, out, format);
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path);
}

std::vector<TrialRecord> ReadRecords(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    Fail(ErrorCode::kParse, "records input is empty");
  }

  std::vector<TrialRecord> records;
  if (text[first] == '[') {
    ordered_json arr;
    try {
      arr = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      Fail(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
    }
    if (!arr.is_array()) Fail(ErrorCode::kParse, "expected a JSON array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      records.push_back(FromJson(arr[i], i));
    }
    return records;
  }

  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      CheckHeader(SplitCsv(line));
      header = false;
      continue;
    }
    if (line.empty()) continue;
    records.push_back(ParseCsvRow(SplitCsv(line), line_no));
  }
  return records;
}

std::vector<TrialRecord> ReadRecordsFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  return ReadRecords(in);
}

void WriteLocalityFile(std::span<const LocalityRecord> rows,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  out << "n,p,trial_index,a,b,threshold,max_cluster,conclusion_holds\n";
  for (const LocalityRecord& r : rows) {
    out << r.n << ',' << FormatReal(r.p) << ',' << r.trial_index << ','
        << FormatReal(r.a) << ',' << FormatReal(r.b) << ',' << r.threshold
        << ',' << r.max_cluster << ',' << BoolText(r.conclusion_holds) << '\n';
  }
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace cubespec
