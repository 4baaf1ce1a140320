#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace patholab {

// Minimal JSON tree with insertion-ordered object keys and doubles emitted at
// 17 significant digits, so identical runs serialize byte-identically.
class JsonValue {
 public:
  JsonValue() : data_(nullptr) {}
  JsonValue(std::nullptr_t) : data_(nullptr) {}
  JsonValue(bool b) : data_(b) {}
  JsonValue(int v) : data_(static_cast<std::int64_t>(v)) {}
  JsonValue(std::int64_t v) : data_(v) {}
  JsonValue(std::uint64_t v) : data_(static_cast<std::int64_t>(v)) {}
  JsonValue(double v) : data_(v) {}
  JsonValue(const char* s) : data_(std::string(s)) {}
  JsonValue(std::string s) : data_(std::move(s)) {}

  static JsonValue object();
  static JsonValue array();

  JsonValue& operator[](const std::string& key);  // object access, inserts
  void push_back(JsonValue v);                    // array append
  bool is_object() const;
  bool is_array() const;

  void emit(std::ostream& os, int indent = 0) const;
  std::string dump() const;

  // 17-significant-digit formatting used for every double in reports/CSV.
  static std::string format_double(double v);

 private:
  struct Object {
    std::vector<std::pair<std::string, JsonValue>> items;
  };
  struct Array {
    std::vector<JsonValue> items;
  };
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string,
               std::shared_ptr<Object>, std::shared_ptr<Array>>
      data_;
};

enum class CheckStatus { Pass, Fail, Diverges, Converges, Inconclusive, Info };
const char* status_name(CheckStatus s);

struct CheckReport {
  std::string name;
  CheckStatus status;
  double value = 0.0;
  std::optional<double> target;
  std::optional<double> tolerance;
  JsonValue details = JsonValue::object();
  std::string paper_anchor;

  JsonValue to_json() const;
};

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::initializer_list<double> values);
  void add_row(const std::vector<double>& values);
};

struct ReportDocument {
  std::string version;
  std::uint64_t seed = 0;
  std::string family;
  int n = 2;
  JsonValue params = JsonValue::object();
  std::vector<CheckReport> checks;

  JsonValue to_json() const;
  bool any_fail(bool strict) const;  // strict promotes Inconclusive
};

// Write-temp-then-rename; creates parent directories.
void atomic_write(const std::string& path, const std::string& contents);

void write_csv(const std::string& path, const CsvTable& table);

}  // namespace patholab
