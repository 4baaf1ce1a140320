#include "patholab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace patholab {

JsonValue JsonValue::object() {
  JsonValue v;
  v.data_ = std::make_shared<Object>();
  return v;
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.data_ = std::make_shared<Array>();
  return v;
}

bool JsonValue::is_object() const {
  return std::holds_alternative<std::shared_ptr<Object>>(data_);
}

bool JsonValue::is_array() const {
  return std::holds_alternative<std::shared_ptr<Array>>(data_);
}

JsonValue& JsonValue::operator[](const std::string& key) {
  if (!is_object()) data_ = std::make_shared<Object>();
  auto& items = std::get<std::shared_ptr<Object>>(data_)->items;
  for (auto& [k, v] : items)
    if (k == key) return v;
  items.emplace_back(key, JsonValue());
  return items.back().second;
}

void JsonValue::push_back(JsonValue v) {
  if (!is_array()) data_ = std::make_shared<Array>();
  std::get<std::shared_ptr<Array>>(data_)->items.push_back(std::move(v));
}

std::string JsonValue::format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void emit_string(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\n': os << "\\n"; break;
      case '\t': os << "\\t"; break;
      case '\r': os << "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          os << buf;
        } else {
          os << c;
        }
    }
  }
  os << '"';
}

void pad(std::ostream& os, int n) {
  for (int i = 0; i < n; ++i) os << ' ';
}

}  // namespace

void JsonValue::emit(std::ostream& os, int indent) const {
  if (std::holds_alternative<std::nullptr_t>(data_)) {
    os << "null";
  } else if (auto* b = std::get_if<bool>(&data_)) {
    os << (*b ? "true" : "false");
  } else if (auto* i = std::get_if<std::int64_t>(&data_)) {
    os << *i;
  } else if (auto* d = std::get_if<double>(&data_)) {
    os << format_double(*d);
  } else if (auto* s = std::get_if<std::string>(&data_)) {
    emit_string(os, *s);
  } else if (auto* arr = std::get_if<std::shared_ptr<Array>>(&data_)) {
    const auto& items = (*arr)->items;
    if (items.empty()) {
      os << "[]";
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < items.size(); ++i) {
      pad(os, indent + 2);
      items[i].emit(os, indent + 2);
      if (i + 1 < items.size()) os << ',';
      os << '\n';
    }
    pad(os, indent);
    os << ']';
  } else if (auto* obj = std::get_if<std::shared_ptr<Object>>(&data_)) {
    const auto& items = (*obj)->items;
    if (items.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    for (std::size_t i = 0; i < items.size(); ++i) {
      pad(os, indent + 2);
      emit_string(os, items[i].first);
      os << ": ";
      items[i].second.emit(os, indent + 2);
      if (i + 1 < items.size()) os << ',';
      os << '\n';
    }
    pad(os, indent);
    os << '}';
  }
}

std::string JsonValue::dump() const {
  std::ostringstream os;
  emit(os, 0);
  return os.str();
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Diverges: return "DIVERGES";
    case CheckStatus::Converges: return "CONVERGES";
    case CheckStatus::Inconclusive: return "INCONCLUSIVE";
    case CheckStatus::Info: return "INFO";
  }
  return "?";
}

JsonValue CheckReport::to_json() const {
  JsonValue j = JsonValue::object();
  j["name"] = name;
  j["status"] = status_name(status);
  j["value"] = value;
  if (target) j["target"] = *target;
  if (tolerance) j["tolerance"] = *tolerance;
  j["details"] = details;
  j["paper_anchor"] = paper_anchor;
  return j;
}

void CsvTable::add_row(std::initializer_list<double> values) {
  std::vector<std::string> row;
  for (double v : values) {
    std::string s = JsonValue::format_double(v);
    if (!s.empty() && s.front() == '"') s = s.substr(1, s.size() - 2);
    row.push_back(s);
  }
  rows.push_back(std::move(row));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  for (double v : values) {
    std::string s = JsonValue::format_double(v);
    if (!s.empty() && s.front() == '"') s = s.substr(1, s.size() - 2);
    row.push_back(s);
  }
  rows.push_back(std::move(row));
}

JsonValue ReportDocument::to_json() const {
  JsonValue j = JsonValue::object();
  j["version"] = version;
  j["seed"] = static_cast<std::int64_t>(seed);
  j["family"] = family;
  j["n"] = n;
  j["params"] = params;
  JsonValue arr = JsonValue::array();
  for (const auto& c : checks) arr.push_back(c.to_json());
  j["checks"] = arr;
  return j;
}

bool ReportDocument::any_fail(bool strict) const {
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) return true;
    if (strict && c.status == CheckStatus::Inconclusive) return true;
  }
  return false;
}

void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp.string());
    os << contents;
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, p);
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ostringstream os;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) os << ',';
    os << table.header[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
  atomic_write(path, os.str());
}

}  // namespace patholab
