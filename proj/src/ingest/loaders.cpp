#include "hpcwl/ingest/loaders.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hpcwl/core/csv.hpp"
#include "hpcwl/core/errors.hpp"

namespace hpcwl {

using nlohmann::json;

namespace {

constexpr std::string_view kJobRequired[] = {
    "job_id",         "resource",         "user",       "charge_number",
    "directorate",    "parent_science",   "field_of_science",
    "nsf_user_status", "submit_time",     "start_time", "end_time",
    "nodes",          "cores",            "queue",      "exit_status",
    "local_su_charged"};

constexpr std::string_view kAllocRequired[] = {
    "charge_number",    "resource",      "alloc_type", "discipline", "awarded_local_su",
    "used_local_su",    "award_date",    "is_gateway_tagged"};

// Uniform access to one input row regardless of its encoding.
class FieldSource {
 public:
  virtual ~FieldSource() = default;
  // nullopt when the field is missing or null/empty.
  virtual std::optional<std::string> text(std::string_view field) const = 0;
  virtual std::optional<std::int64_t> integer(std::string_view field) const = 0;
  virtual std::optional<double> real(std::string_view field) const = 0;
  virtual std::optional<bool> boolean(std::string_view field) const = 0;
  virtual bool present(std::string_view field) const = 0;
};

class JsonRow final : public FieldSource {
 public:
  JsonRow(const json& obj, std::size_t row) : obj_(obj), row_(row) {}

  bool present(std::string_view f) const override {
    auto it = obj_.find(std::string(f));
    return it != obj_.end() && !it->is_null();
  }
  std::optional<std::string> text(std::string_view f) const override {
    auto it = obj_.find(std::string(f));
    if (it == obj_.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw SchemaError(row_, std::string(f), "expected string");
    return it->get<std::string>();
  }
  std::optional<std::int64_t> integer(std::string_view f) const override {
    auto it = obj_.find(std::string(f));
    if (it == obj_.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer()) throw SchemaError(row_, std::string(f), "expected integer");
    return it->get<std::int64_t>();
  }
  std::optional<double> real(std::string_view f) const override {
    auto it = obj_.find(std::string(f));
    if (it == obj_.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw SchemaError(row_, std::string(f), "expected number");
    return it->get<double>();
  }
  std::optional<bool> boolean(std::string_view f) const override {
    auto it = obj_.find(std::string(f));
    if (it == obj_.end() || it->is_null()) return std::nullopt;
    if (!it->is_boolean()) throw SchemaError(row_, std::string(f), "expected boolean");
    return it->get<bool>();
  }

 private:
  const json& obj_;
  std::size_t row_;
};

class CsvRow final : public FieldSource {
 public:
  CsvRow(const std::map<std::string, std::size_t, std::less<>>& header,
         const std::vector<std::string>& fields, std::size_t row)
      : header_(header), fields_(fields), row_(row) {}

  bool present(std::string_view f) const override { return raw(f) != nullptr; }
  std::optional<std::string> text(std::string_view f) const override {
    const std::string* s = raw(f);
    if (!s) return std::nullopt;
    return *s;
  }
  std::optional<std::int64_t> integer(std::string_view f) const override {
    const std::string* s = raw(f);
    if (!s) return std::nullopt;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc() || p != s->data() + s->size())
      throw SchemaError(row_, std::string(f), "expected integer, got '" + *s + "'");
    return v;
  }
  std::optional<double> real(std::string_view f) const override {
    const std::string* s = raw(f);
    if (!s) return std::nullopt;
    double v = 0;
    auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc() || p != s->data() + s->size())
      throw SchemaError(row_, std::string(f), "expected number, got '" + *s + "'");
    return v;
  }
  std::optional<bool> boolean(std::string_view f) const override {
    const std::string* s = raw(f);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "1") return true;
    if (*s == "false" || *s == "0") return false;
    throw SchemaError(row_, std::string(f), "expected boolean, got '" + *s + "'");
  }

 private:
  const std::string* raw(std::string_view f) const {
    auto it = header_.find(f);
    if (it == header_.end() || it->second >= fields_.size()) return nullptr;
    const std::string& s = fields_[it->second];
    return s.empty() ? nullptr : &s;
  }

  const std::map<std::string, std::size_t, std::less<>>& header_;
  const std::vector<std::string>& fields_;
  std::size_t row_;
};

template <typename T>
T require(const std::optional<T>& v, std::size_t row, std::string_view field) {
  if (!v) throw SchemaError(row, std::string(field), "missing required value");
  return *v;
}

template <typename E>
E require_enum(std::optional<E> (*parse)(std::string_view), const FieldSource& src,
               std::size_t row, std::string_view field) {
  std::string s = require(src.text(field), row, field);
  auto v = parse(s);
  if (!v) throw SchemaError(row, std::string(field), "unknown value '" + s + "'");
  return *v;
}

JobRecord parse_job(const FieldSource& src, std::size_t row) {
  JobRecord j;
  j.job_id = require(src.text("job_id"), row, "job_id");
  j.resource = require(src.text("resource"), row, "resource");
  j.user = require(src.text("user"), row, "user");
  j.charge_number = require(src.text("charge_number"), row, "charge_number");
  j.project.directorate = src.text("directorate").value_or("");
  j.project.parent_science = src.text("parent_science").value_or("");
  j.project.field_of_science = src.text("field_of_science").value_or("");
  j.nsf_user_status = require_enum(parse_nsf_user_status, src, row, "nsf_user_status");
  j.submit_time = require(src.integer("submit_time"), row, "submit_time");
  j.start_time = require(src.integer("start_time"), row, "start_time");
  j.end_time = require(src.integer("end_time"), row, "end_time");
  j.nodes = require(src.integer("nodes"), row, "nodes");
  j.cores = require(src.integer("cores"), row, "cores");
  j.queue = src.text("queue").value_or("");
  j.exit_status = require_enum(parse_exit_status, src, row, "exit_status");
  j.gateway_user = src.text("gateway_user");
  j.state_of_origin = src.text("state_of_origin");
  j.local_su_charged = require(src.real("local_su_charged"), row, "local_su_charged");

  if (!(j.submit_time <= j.start_time && j.start_time <= j.end_time))
    throw TimestampOrderError(row);
  if (j.nodes < 1) throw SchemaError(row, "nodes", "must be >= 1");
  if (j.cores < 1) throw SchemaError(row, "cores", "must be >= 1");
  if (j.cores < j.nodes) throw SchemaError(row, "cores", "must be >= nodes");
  if (!(j.local_su_charged >= 0)) throw SchemaError(row, "local_su_charged", "must be >= 0");
  if (j.state_of_origin && j.state_of_origin->size() != 2)
    throw SchemaError(row, "state_of_origin", "expected a 2-letter code");
  return j;
}

AllocationRecord parse_allocation(const FieldSource& src, std::size_t row) {
  AllocationRecord a;
  a.charge_number = require(src.text("charge_number"), row, "charge_number");
  a.resource = require(src.text("resource"), row, "resource");
  a.alloc_type = require_enum(parse_allocation_type, src, row, "alloc_type");
  a.discipline = src.text("discipline").value_or("");
  a.awarded_local_su = require(src.real("awarded_local_su"), row, "awarded_local_su");
  a.used_local_su = require(src.real("used_local_su"), row, "used_local_su");
  std::string date = require(src.text("award_date"), row, "award_date");
  auto d = Date::try_parse(date);
  if (!d) throw SchemaError(row, "award_date", "not an ISO-8601 date: '" + date + "'");
  a.award_date = *d;
  a.is_gateway_tagged = src.boolean("is_gateway_tagged").value_or(false);
  if (!(a.awarded_local_su >= 0)) throw SchemaError(row, "awarded_local_su", "must be >= 0");
  if (!(a.used_local_su >= 0)) throw SchemaError(row, "used_local_su", "must be >= 0");
  return a;
}

// Drives the per-row parser over either encoding and collects rejections.
template <typename T, typename Parse>
Loaded<T> load_rows(std::istream& in, InputFormat format, std::span<const std::string_view> required,
                    Parse parse) {
  Loaded<T> out;
  std::exception_ptr first_error;

  auto attempt = [&](const FieldSource& src, std::size_t row) {
    try {
      out.records.push_back(parse(src, row));
    } catch (const SchemaError& e) {
      out.rejections.push_back({row, e.field(), e.code(), e.what()});
      if (!first_error) first_error = std::current_exception();
    } catch (const TimestampOrderError& e) {
      out.rejections.push_back({row, "submit_time", e.code(), e.what()});
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (format == InputFormat::jsonl) {
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ++row;
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        SchemaError err(row, "", std::string("malformed JSON: ") + e.what());
        out.rejections.push_back({row, "", err.code(), err.what()});
        if (!first_error) first_error = std::make_exception_ptr(err);
        continue;
      }
      if (!obj.is_object()) {
        SchemaError err(row, "", "expected a JSON object");
        out.rejections.push_back({row, "", err.code(), err.what()});
        if (!first_error) first_error = std::make_exception_ptr(err);
        continue;
      }
      attempt(JsonRow(obj, row), row);
    }
  } else {
    std::vector<csv::Record> records;
    try {
      records = csv::read(in);
    } catch (const std::runtime_error& e) {
      throw SchemaError(0, "", e.what());
    }
    if (records.empty()) throw SchemaError(0, "", "missing CSV header");
    std::map<std::string, std::size_t, std::less<>> header;
    for (std::size_t i = 0; i < records[0].fields.size(); ++i) header[records[0].fields[i]] = i;
    for (auto f : required)
      if (!header.contains(f)) throw SchemaError(0, std::string(f), "missing CSV column");
    for (std::size_t r = 1; r < records.size(); ++r) {
      if (records[r].fields.size() != records[0].fields.size()) {
        SchemaError err(r, "", "expected " + std::to_string(records[0].fields.size()) +
                                   " fields, found " + std::to_string(records[r].fields.size()));
        out.rejections.push_back({r, "", err.code(), err.what()});
        if (!first_error) first_error = std::make_exception_ptr(err);
        continue;
      }
      attempt(CsvRow(header, records[r].fields, r), r);
    }
  }

  if (out.records.empty() && first_error) std::rethrow_exception(first_error);
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError(path.string());
  return in;
}

std::vector<std::string_view> as_vector(std::span<const std::string_view> s) {
  return {s.begin(), s.end()};
}

}  // namespace

InputFormat detect_format(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? InputFormat::csv : InputFormat::jsonl;
}

Loaded<JobRecord> load_jobs(std::istream& in, InputFormat format) {
  auto req = as_vector(kJobRequired);
  return load_rows<JobRecord>(in, format, req, parse_job);
}

Loaded<JobRecord> load_jobs(const std::filesystem::path& path, InputFormat format) {
  auto in = open_input(path);
  return load_jobs(in, format);
}

Loaded<AllocationRecord> load_allocations(std::istream& in, InputFormat format) {
  auto req = as_vector(kAllocRequired);
  auto out = load_rows<AllocationRecord>(in, format, req, parse_allocation);

  std::map<std::pair<std::string, std::string>, std::size_t> first_seen;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    const auto& a = out.records[i];
    RecordLocator loc{RecordKind::allocation, i, a.charge_number + "/" + a.resource};
    auto [it, inserted] = first_seen.emplace(std::pair{a.charge_number, a.resource}, i);
    if (!inserted)
      out.flags.push_back({loc, std::string(issue::duplicate_allocation),
                           "same (charge_number, resource) as allocation " +
                               std::to_string(it->second)});
    if (a.used_local_su == 0)
      out.flags.push_back({loc, std::string(issue::unused_allocation), "no local SUs used"});
  }
  return out;
}

Loaded<AllocationRecord> load_allocations(const std::filesystem::path& path, InputFormat format) {
  auto in = open_input(path);
  return load_allocations(in, format);
}

ResourceMap load_resources_from_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(0, "", std::string("malformed resource JSON: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError(0, "", "resource file must be a JSON array");

  ResourceMap out;
  std::size_t row = 0;
  for (const auto& obj : doc) {
    ++row;
    if (!obj.is_object()) throw SchemaError(row, "", "expected a JSON object");
    JsonRow src(obj, row);
    ResourceSpec r;
    r.name = require(src.text("name"), row, "name");
    r.rtype = require_enum(parse_resource_type, src, row, "type");
    auto nodes = src.integer("nodes");
    auto cpn = src.integer("cores_per_node");
    if (!nodes || !cpn || *nodes < 1 || *cpn < 1) throw MissingGeometry(r.name);
    r.nodes = *nodes;
    r.cores_per_node = *cpn;
    if (auto cores = src.integer("cores"); cores && *cores != r.total_cores())
      throw SchemaError(row, "cores", "cores != nodes * cores_per_node for " + r.name);
    if (auto gib = src.real("mem_per_node_gib"))
      r.mem_per_node = static_cast<std::uint64_t>(*gib * 1024.0 * 1024.0 * 1024.0);
    std::string start = require(src.text("production_start"), row, "production_start");
    auto sd = Date::try_parse(start);
    if (!sd) throw SchemaError(row, "production_start", "not an ISO-8601 date");
    r.production_start = *sd;
    if (auto end = src.text("production_end")) {
      auto ed = Date::try_parse(*end);
      if (!ed) throw SchemaError(row, "production_end", "not an ISO-8601 date");
      r.production_end = *ed;
    }
    if (auto unit = src.text("su_unit")) {
      auto u = parse_su_unit(*unit);
      if (!u) throw SchemaError(row, "su_unit", "unknown value '" + *unit + "'");
      r.su_unit = *u;
    }
    if (auto it = obj.find("large_memory_queues"); it != obj.end() && it->is_array())
      for (const auto& q : *it) r.large_memory_queues.push_back(q.get<std::string>());

    auto factors = obj.find("su_factors");
    if (factors == obj.end() || !factors->is_array() || factors->empty())
      throw SchemaError(row, "su_factors", "at least one factor window is required");
    for (const auto& fw : *factors) {
      JsonRow fsrc(fw, row);
      SuFactorWindow w;
      auto ws = Date::try_parse(require(fsrc.text("start"), row, "su_factors.start"));
      if (!ws) throw SchemaError(row, "su_factors.start", "not an ISO-8601 date");
      w.start = *ws;
      if (auto we = fsrc.text("end")) {
        auto d = Date::try_parse(*we);
        if (!d) throw SchemaError(row, "su_factors.end", "not an ISO-8601 date");
        if (*d < w.start) throw SchemaError(row, "su_factors.end", "end precedes start");
        w.end = d->plus_days(1);
      }
      w.factor = require(fsrc.real("factor"), row, "su_factors.factor");
      if (!(w.factor > 0)) throw SchemaError(row, "su_factors.factor", "must be positive");
      r.su_factors.push_back(w);
    }
    std::sort(r.su_factors.begin(), r.su_factors.end(),
              [](const auto& a, const auto& b) { return a.start < b.start; });
    for (std::size_t i = 1; i < r.su_factors.size(); ++i) {
      const auto& prev = r.su_factors[i - 1];
      if (!prev.end || r.su_factors[i].start < *prev.end) throw OverlappingFactorWindows(r.name);
    }
    if (out.contains(r.name)) throw SchemaError(row, "name", "duplicate resource " + r.name);
    out.emplace(r.name, std::move(r));
  }
  return out;
}

ResourceMap load_resources(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_resources_from_string(ss.str());
}

void write_rejection_report(std::ostream& out, std::span<const Rejection> rejections) {
  for (const auto& r : rejections) {
    json j = {{"row", r.row}, {"field", r.field}, {"code", r.code}};
    out << j.dump() << '\n';
  }
}

}  // namespace hpcwl
