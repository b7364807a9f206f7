#include "remask/records.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "remask/error.hpp"

namespace remask {
namespace {

using nlohmann::json;

json spans_json(const std::vector<MaskSpan>& spans) {
  json arr = json::array();
  for (const auto& s : spans) {
    arr.push_back({{"start", s.start},
                   {"length", s.length},
                   {"step", std::string(to_string(s.step))},
                   {"score", s.score}});
  }
  return arr;
}

std::vector<MaskSpan> spans_from(const json& arr) {
  std::vector<MaskSpan> out;
  for (const auto& s : arr) {
    out.push_back({s.at("start").get<std::size_t>(), s.at("length").get<std::size_t>(),
                   parse_mask_step(s.at("step").get<std::string>()), s.at("score").get<double>()});
  }
  return out;
}

StopReason parse_stop_reason(std::string_view text) {
  for (auto r : {StopReason::guard_violation, StopReason::exhausted,
                 StopReason::step2_already_above_guard}) {
    if (to_string(r) == text) return r;
  }
  throw InputError("unknown stop_reason '" + std::string(text) + "'");
}

}  // namespace

std::array<std::size_t, 3> MaskedRecord::mask_counts() const {
  return {ObfuscationResult::token_count(spans_step1), ObfuscationResult::token_count(spans_step2),
          ObfuscationResult::token_count(spans)};
}

MaskedRecord to_record(const ObfuscationResult& r, const DomainSet& domains) {
  MaskedRecord rec;
  rec.id = r.doc->id;
  rec.source = domains.label(r.source);
  rec.target = domains.label(r.target);
  rec.masked_step1 = r.masked_step1;
  rec.masked_step2 = r.masked_step2;
  rec.masked_step3 = r.masked_step3;
  rec.spans = r.step3_spans;
  rec.spans_step1 = r.step1_spans;
  rec.spans_step2 = r.step2_spans;
  rec.trace = r.trace;
  return rec;
}

std::string record_to_json(const MaskedRecord& rec) {
  json j;
  j["id"] = rec.id;
  j["source"] = rec.source;
  j["target"] = rec.target;
  j["masked_step1"] = rec.masked_step1;
  j["masked_step2"] = rec.masked_step2;
  j["masked_step3"] = rec.masked_step3;
  j["spans"] = spans_json(rec.spans);
  j["spans_step1"] = spans_json(rec.spans_step1);
  j["spans_step2"] = spans_json(rec.spans_step2);
  if (rec.trace) {
    const auto& t = *rec.trace;
    json gains = json::array();
    for (const auto& g : t.candidate_gains) gains.push_back({{"position", g.position}, {"gain", g.gain}});
    j["trace"] = {{"candidate_gains", std::move(gains)},
                  {"restored", t.restored},
                  {"stop_reason", std::string(to_string(t.stop_reason))},
                  {"initial_confidence", t.initial_confidence},
                  {"final_confidence", t.final_confidence}};
  } else {
    j["trace"] = nullptr;
  }
  return j.dump();
}

MaskedRecord record_from_json(std::string_view line) {
  try {
    json j = json::parse(line);
    MaskedRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.source = j.at("source").get<std::string>();
    rec.target = j.at("target").get<std::string>();
    rec.masked_step1 = j.at("masked_step1").get<std::string>();
    rec.masked_step2 = j.at("masked_step2").get<std::string>();
    rec.masked_step3 = j.at("masked_step3").get<std::string>();
    rec.spans = spans_from(j.at("spans"));
    rec.spans_step1 = spans_from(j.value("spans_step1", json::array()));
    rec.spans_step2 = spans_from(j.value("spans_step2", json::array()));
    if (auto it = j.find("trace"); it != j.end() && !it->is_null()) {
      UnmaskTrace t;
      for (const auto& g : it->at("candidate_gains")) {
        t.candidate_gains.push_back({g.at("position").get<std::size_t>(), g.at("gain").get<double>()});
      }
      t.restored = it->at("restored").get<std::vector<std::size_t>>();
      t.stop_reason = parse_stop_reason(it->at("stop_reason").get<std::string>());
      t.initial_confidence = it->at("initial_confidence").get<double>();
      t.final_confidence = it->at("final_confidence").get<double>();
      rec.trace = std::move(t);
    }
    return rec;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed masked record: ") + e.what());
  }
}

std::string records_to_text(const std::vector<MaskedRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r);
    out.push_back('\n');
  }
  return out;
}

void write_records(const std::filesystem::path& path, const std::vector<MaskedRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << records_to_text(records);
}

std::vector<MaskedRecord> parse_records(std::string_view contents) {
  std::vector<MaskedRecord> out;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(line));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<MaskedRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open masked-output file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_records(buf.str());
}

}  // namespace remask
