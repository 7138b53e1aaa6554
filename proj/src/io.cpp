// Copyright 2026, The commstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commstream/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "commstream/errors.hpp"

namespace commstream {

namespace {

using nlohmann::json;

std::string at_line(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

int digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) throw SchemaError("truncated timestamp");
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw SchemaError("invalid timestamp '" + std::string(text) + "'");
    }
    value = value * 10 + (text[i] - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, std::string_view options) {
  if (pos >= text.size() || options.find(text[pos]) == std::string_view::npos) {
    throw SchemaError("invalid timestamp '" + std::string(text) + "'");
  }
}

std::string require_string(const json& obj, const char* key) {
  if (!obj.contains(key)) {
    throw SchemaError(std::string("missing field '") + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_string())
    throw SchemaError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_array(const json& obj, const char* key) {
  if (!obj.contains(key)) return {};
  const json& v = obj.at(key);
  if (!v.is_array())
    throw SchemaError(std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) {
      throw SchemaError(std::string("field '") + key + "' must hold strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::set<ContributorId> id_set(const json& obj, const char* key) {
  std::set<ContributorId> out;
  for (auto& s : string_array(obj, key)) {
    if (!out.insert({s}).second) {
      throw SchemaError(std::string("duplicate entry '") + s + "' in '" + key +
                        "'");
    }
  }
  return out;
}

std::uint64_t non_negative(const json& obj, const char* key,
                           bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw SchemaError(std::string("missing field '") + key + "'");
    return 0;
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw SchemaError(std::string("field '") + key +
                      "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

template <class Parse>
auto read_jsonl(std::istream& in, std::string_view source, Parse parse) {
  std::vector<decltype(parse(json{}, std::size_t{}))> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json obj = json::parse(line);
      if (!obj.is_object()) throw SchemaError("record must be a JSON object");
      out.push_back(parse(obj, number));
    } catch (const json::exception& e) {
      throw SchemaError(at_line(source, number) + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError(at_line(source, number) + e.what());
    }
  }
  if (in.bad()) throw IoError("failed reading " + std::string(source));
  return out;
}

void warn_unknown(const json& obj,
                  std::initializer_list<std::string_view> known,
                  std::initializer_list<std::string_view> ignored,
                  std::vector<std::string>* warnings, std::string_view source,
                  std::size_t line) {
  if (!warnings) return;
  for (const auto& [key, value] : obj.items()) {
    bool listed = false;
    for (auto k : known) listed = listed || key == k;
    for (auto k : ignored) listed = listed || key == k;
    if (!listed) {
      warnings->push_back(at_line(source, line) + "ignoring unknown field '" +
                          key + "'");
    }
  }
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw SchemaError("unterminated quoted field");
  return fields;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(text);
  }
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::chrono::sys_seconds parse_rfc3339(std::string_view text) {
  using namespace std::chrono;
  const int y = digits(text, 0, 4);
  expect(text, 4, "-");
  const int mo = digits(text, 5, 2);
  expect(text, 7, "-");
  const int d = digits(text, 8, 2);
  expect(text, 10, "Tt ");
  const int h = digits(text, 11, 2);
  expect(text, 13, ":");
  const int mi = digits(text, 14, 2);
  expect(text, 16, ":");
  const int s = digits(text, 17, 2);
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start)
      throw SchemaError("invalid timestamp '" + std::string(text) + "'");
  }
  int offset_minutes = 0;
  expect(text, pos, "Zz+-");
  if (text[pos] == 'Z' || text[pos] == 'z') {
    ++pos;
  } else {
    const int sign = text[pos] == '-' ? -1 : 1;
    const int oh = digits(text, pos + 1, 2);
    expect(text, pos + 3, ":");
    const int om = digits(text, pos + 4, 2);
    if (oh > 23 || om > 59)
      throw SchemaError("invalid UTC offset in '" + std::string(text) + "'");
    offset_minutes = sign * (oh * 60 + om);
    pos += 6;
  }
  if (pos != text.size()) {
    throw SchemaError("trailing characters in timestamp '" + std::string(text) +
                      "'");
  }
  const year_month_day date{year{y}, month{static_cast<unsigned>(mo)},
                            day{static_cast<unsigned>(d)}};
  if (!date.ok() || h > 23 || mi > 59 || s > 60) {
    throw SchemaError("invalid timestamp '" + std::string(text) + "'");
  }
  return sys_days{date} + hours{h} + minutes{mi} + seconds{s} -
         minutes{offset_minutes};
}

std::string format_rfc3339(std::chrono::sys_seconds t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day date{day_point};
  const hh_mm_ss<seconds> time{t - day_point};
  char buf[32];
  std::snprintf(
      buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
      static_cast<int>(date.year()), static_cast<unsigned>(date.month()),
      static_cast<unsigned>(date.day()), static_cast<int>(time.hours().count()),
      static_cast<int>(time.minutes().count()),
      static_cast<int>(time.seconds().count()));
  return buf;
}

std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw ArgumentError("cannot format number");
  return std::string(buf, end);
}

std::vector<BuildRecord> read_builds_jsonl(std::istream& in,
                                           std::vector<std::string>* warnings,
                                           std::string_view source) {
  std::set<std::string> ids;
  return read_jsonl(in, source, [&](const json& obj, std::size_t line) {
    warn_unknown(obj,
                 {"build_id", "started_at", "kind", "outcome", "work_item_ids"},
                 {}, warnings, source, line);
    BuildRecord b;
    b.build_id = require_string(obj, "build_id");
    b.started_at = parse_rfc3339(require_string(obj, "started_at"));
    b.kind = parse_build_kind(require_string(obj, "kind"));
    b.outcome = parse_label(require_string(obj, "outcome"));
    if (!obj.contains("work_item_ids")) {
      throw SchemaError("missing field 'work_item_ids'");
    }
    b.work_item_ids = string_array(obj, "work_item_ids");
    validate(b);
    if (!ids.insert(b.build_id).second) {
      throw SchemaError("duplicate build_id '" + b.build_id + "'");
    }
    return b;
  });
}

std::vector<WorkItemRecord> read_work_items_jsonl(
    std::istream& in, std::vector<std::string>* warnings,
    std::string_view source) {
  std::set<std::string> ids;
  return read_jsonl(in, source, [&](const json& obj, std::size_t line) {
    warn_unknown(obj,
                 {"work_item_id", "creator", "comments", "subscribers",
                  "committers", "change_set_count"},
                 {"modifiers", "owners", "resolvers", "approvers"}, warnings,
                 source, line);
    WorkItemRecord item;
    item.work_item_id = require_string(obj, "work_item_id");
    item.creator = {require_string(obj, "creator")};
    if (obj.contains("comments")) {
      const json& comments = obj.at("comments");
      if (!comments.is_array())
        throw SchemaError("field 'comments' must be an array");
      for (const auto& c : comments) {
        if (!c.is_object()) throw SchemaError("comment must be an object");
        item.comments.push_back(
            {{require_string(c, "author")}, non_negative(c, "seq", true)});
      }
    }
    item.subscribers = id_set(obj, "subscribers");
    item.committers = id_set(obj, "committers");
    item.change_set_count = non_negative(obj, "change_set_count");
    validate(item);
    if (!ids.insert(item.work_item_id).second) {
      throw SchemaError("duplicate work_item_id '" + item.work_item_id + "'");
    }
    return item;
  });
}

void write_builds_jsonl(std::ostream& out,
                        std::span<const BuildRecord> builds) {
  for (const auto& b : builds) {
    const json obj = {{"build_id", b.build_id},
                      {"started_at", format_rfc3339(b.started_at)},
                      {"kind", to_string(b.kind)},
                      {"outcome", to_string(b.outcome)},
                      {"work_item_ids", b.work_item_ids}};
    out << obj.dump() << '\n';
  }
}

void write_work_items_jsonl(std::ostream& out,
                            std::span<const WorkItemRecord> items) {
  for (const auto& item : items) {
    json comments = json::array();
    for (const auto& c : item.comments) {
      comments.push_back(
          {{"author", c.author.value}, {"seq", c.sequence_index}});
    }
    json subscribers = json::array(), committers = json::array();
    for (const auto& s : item.subscribers) subscribers.push_back(s.value);
    for (const auto& c : item.committers) committers.push_back(c.value);
    const json obj = {{"work_item_id", item.work_item_id},
                      {"creator", item.creator.value},
                      {"comments", std::move(comments)},
                      {"subscribers", std::move(subscribers)},
                      {"committers", std::move(committers)},
                      {"change_set_count", item.change_set_count}};
    out << obj.dump() << '\n';
  }
}

std::string features_csv_header() {
  std::string header = "build_id,outcome";
  for (auto name : kFeatureNames) {
    header += ',';
    header += name;
  }
  return header;
}

void write_features_csv(std::ostream& out, std::span<const FeatureRow> rows) {
  out << features_csv_header() << '\n';
  for (const auto& row : rows) {
    out << csv_field(row.build_id) << ',' << to_string(row.outcome);
    for (double v : row.features.values()) out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<FeatureRow> read_features_csv(std::istream& in,
                                          std::string_view source) {
  std::string line;
  std::size_t number = 0;
  auto strip = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };
  if (!std::getline(in, line)) {
    throw SchemaError(std::string(source) + ": missing header");
  }
  ++number;
  strip(line);
  if (line != features_csv_header()) {
    throw SchemaError(at_line(source, number) + "unexpected header");
  }
  std::vector<FeatureRow> rows;
  while (std::getline(in, line)) {
    ++number;
    strip(line);
    if (line.empty()) continue;
    try {
      const auto fields = split_csv_line(line);
      if (fields.size() != 2 + kFeatureCount) {
        throw SchemaError("expected " + std::to_string(2 + kFeatureCount) +
                          " columns, got " + std::to_string(fields.size()));
      }
      FeatureRow row;
      row.build_id = fields[0];
      if (row.build_id.empty()) throw SchemaError("empty build_id");
      row.outcome = parse_label(fields[1]);
      std::vector<double> values(kFeatureCount);
      for (std::size_t f = 0; f < kFeatureCount; ++f) {
        const std::string& text = fields[2 + f];
        const auto [end, ec] =
            std::from_chars(text.data(), text.data() + text.size(), values[f]);
        if (ec != std::errc{} || end != text.data() + text.size()) {
          throw SchemaError("column '" + std::string(kFeatureNames[f]) +
                            "' is not a number: '" + text + "'");
        }
      }
      try {
        row.features = FeatureVector::from_values(values);
      } catch (const ArgumentError& e) {
        throw SchemaError(e.what());
      }
      rows.push_back(std::move(row));
    } catch (const SchemaError& e) {
      throw SchemaError(at_line(source, number) + e.what());
    }
  }
  if (in.bad()) throw IoError("failed reading " + std::string(source));
  return rows;
}

std::vector<Instance> to_instances(std::span<const FeatureRow> rows) {
  std::vector<Instance> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    out.push_back(make_instance(r.features, r.outcome, r.build_id));
  return out;
}

void write_log_csv(std::ostream& out, const PrequentialLog& log) {
  out << "index,predicted,actual,cum_accuracy,cum_recall_success,"
         "cum_recall_fail,drift_flag\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& r : log.records()) {
    out << r.index << ',' << to_string(r.predicted) << ','
        << to_string(r.actual) << ',' << format_double(r.cum_accuracy) << ','
        << opt(r.cum_recall_success) << ',' << opt(r.cum_recall_fail) << ','
        << (r.drift_events.empty() ? 0 : 1) << '\n';
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace commstream
