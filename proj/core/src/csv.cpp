#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "first/dataset.hpp"
#include "first/error.hpp"

namespace first {

namespace {

using Record = std::vector<std::string>;

// RFC-4180 reader: quoted fields may contain separators, doubled quotes and
// line breaks. Both LF and CRLF terminate records.
std::vector<Record> read_records(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<Record> records;
  Record current;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  auto end_field = [&] {
    current.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = current.size() == 1 && current.front().empty();
    if (!blank) records.push_back(std::move(current));
    current.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty()) throw InputError("malformed CSV: stray quote inside field");
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (quoted) throw InputError("malformed CSV: unterminated quoted field");
  if (field_started || !current.empty()) end_record();
  return records;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_missing(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return true;
  std::string lower(cell);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return lower == "na" || lower == "nan";
}

bool parse_double(std::string_view cell, double& out) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc{} && ptr == cell.data() + cell.size() && std::isfinite(out);
}

}  // namespace

LoadedCsv parse_csv(std::string_view text, const CsvOptions& options) {
  const auto records = read_records(text);
  if (records.empty()) throw InputError("CSV has no header row");
  const Record& header = records.front();

  std::map<std::string, std::size_t> position;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name{trim(header[c])};
    if (!position.emplace(name, c).second) throw InputError("duplicate column name: " + name);
  }
  const auto response_it = position.find(options.response);
  if (response_it == position.end()) {
    throw InputError("response column not found: " + options.response);
  }
  const std::size_t response_col = response_it->second;
  std::set<std::string> categorical(options.categoricals.begin(), options.categoricals.end());
  for (const auto& name : categorical) {
    if (!position.contains(name)) throw InputError("categorical column not found: " + name);
    if (name == options.response) throw InputError("response column cannot be categorical");
  }

  std::vector<const Record*> kept;
  std::size_t dropped = 0;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const Record& rec = records[r];
    if (rec.size() != header.size()) {
      throw InputError("row " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                       " fields, header has " + std::to_string(header.size()));
    }
    const auto missing = std::find_if(rec.begin(), rec.end(), [](const std::string& cell) {
      return is_missing(cell);
    });
    if (missing != rec.end()) {
      if (options.on_missing == MissingPolicy::reject) {
        throw InputError("missing value at row " + std::to_string(r) + ", column '" +
                         std::string(trim(header[static_cast<std::size_t>(missing - rec.begin())])) +
                         "'");
      }
      ++dropped;
      continue;
    }
    kept.push_back(&rec);
  }
  if (kept.empty()) throw InputError("no rows left after dropping missing values");

  std::vector<Column> columns;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == response_col) continue;
    const std::string name{trim(header[c])};
    if (categorical.contains(name)) {
      std::vector<std::string> labels;
      labels.reserve(kept.size());
      for (const Record* rec : kept) labels.emplace_back(trim((*rec)[c]));
      columns.push_back(Column::categorical(name, std::move(labels)));
    } else {
      std::vector<double> values(kept.size());
      for (std::size_t r = 0; r < kept.size(); ++r) {
        if (!parse_double((*kept[r])[c], values[r])) {
          throw InputError("non-numeric value '" + (*kept[r])[c] + "' in continuous column '" +
                           name + "'");
        }
      }
      columns.push_back(Column::continuous(name, std::move(values)));
    }
  }
  if (columns.empty()) throw InputError("no factor columns besides the response");

  std::vector<double> response(kept.size());
  bool numeric = true;
  for (std::size_t r = 0; r < kept.size() && numeric; ++r) {
    numeric = parse_double((*kept[r])[response_col], response[r]);
  }
  if (!numeric) {
    std::set<std::string> levels;
    for (const Record* rec : kept) levels.emplace(trim((*rec)[response_col]));
    if (levels.size() != 2) {
      throw InputError("response column '" + options.response +
                       "' is neither numeric nor binary-codable");
    }
    const std::string& positive = *levels.rbegin();
    for (std::size_t r = 0; r < kept.size(); ++r) {
      response[r] = trim((*kept[r])[response_col]) == positive ? 1.0 : 0.0;
    }
  }

  return LoadedCsv{Dataset(std::move(columns), std::move(response), options.response), dropped};
}

LoadedCsv load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), options);
}

namespace {

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string to_csv(const Dataset& data) {
  std::string out;
  for (const auto& col : data.columns()) {
    out += quote_if_needed(col.name);
    out += ',';
  }
  out += quote_if_needed(data.response_name());
  out += '\n';
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (const auto& col : data.columns()) {
      out += col.kind == FactorKind::continuous ? format_double(col.values[r])
                                                : quote_if_needed(col.labels[r]);
      out += ',';
    }
    out += format_double(data.response()[r]);
    out += '\n';
  }
  return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path.string());
  out << to_csv(data);
}

}  // namespace first
