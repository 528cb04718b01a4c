#include "sptok/token_io.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

namespace sptok {

using nlohmann::ordered_json;

void write_tokens(std::ostream& out, const TokenStream& stream, const TokenFileMeta& meta, bool with_events) {
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : meta.params) params[k] = v;
  ordered_json header{{"format", "sptok.tokens"},
                      {"version", 1},
                      {"width", stream.geometry.width},
                      {"height", stream.geometry.height},
                      {"patch_size", stream.patch_size},
                      {"method", meta.method},
                      {"params", std::move(params)}};
  out << header.dump() << '\n';

  for (const Token& tok : stream.tokens) {
    ordered_json rec{{"patch_x", tok.patch_x},
                     {"patch_y", tok.patch_y},
                     {"t_spike_us", tok.t_spike},
                     {"n_events", tok.events.size()}};
    if (with_events) {
      ordered_json members = ordered_json::array();
      for (const Event& e : tok.events) members.push_back({e.t, e.x, e.y, int{e.p}});
      rec["events"] = std::move(members);
    }
    out << rec.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing tokens");
}

void write_tokens(const std::filesystem::path& path, const TokenStream& stream, const TokenFileMeta& meta,
                  bool with_events) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_tokens(out, stream, meta, with_events);
}

TokenFile read_tokens(std::istream& in) {
  TokenFile file;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  bool first_record = true;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      if (!saw_header) {
        if (j.value("format", "") != "sptok.tokens" || j.value("version", 0) != 1)
          throw Error(ErrorCode::ParseErrorAt, "not a sptok token file", line_no);
        file.stream.geometry = {j.at("width").get<std::uint32_t>(), j.at("height").get<std::uint32_t>()};
        file.stream.patch_size = j.at("patch_size").get<std::uint32_t>();
        file.meta.method = j.value("method", "");
        if (j.contains("params"))
          for (const auto& [k, v] : j.at("params").items()) file.meta.params.emplace_back(k, v.get<std::string>());
        saw_header = true;
        continue;
      }
      Token tok;
      tok.patch_x = j.at("patch_x").get<std::uint32_t>();
      tok.patch_y = j.at("patch_y").get<std::uint32_t>();
      tok.t_spike = j.at("t_spike_us").get<Micros>();
      const auto n = j.at("n_events").get<std::size_t>();
      const bool has = j.contains("events");
      if (first_record) file.has_events = has;
      if (has != file.has_events) throw Error(ErrorCode::ParseErrorAt, "mixed records with and without events", line_no);
      first_record = false;
      if (has) {
        for (const auto& m : j.at("events")) {
          const auto p = m.at(3).get<int>();
          if (p != 1 && p != -1) throw Error(ErrorCode::ParseErrorAt, "polarity must be -1 or 1", line_no);
          tok.events.push_back({m.at(0).get<Micros>(), m.at(1).get<std::uint16_t>(), m.at(2).get<std::uint16_t>(),
                                static_cast<std::int8_t>(p)});
        }
        if (tok.events.size() != n) throw Error(ErrorCode::ParseErrorAt, "n_events disagrees with events", line_no);
      }
      if (!file.stream.tokens.empty() && token_order_less(tok, file.stream.tokens.back()))
        throw Error(ErrorCode::ParseErrorAt, "tokens out of order", line_no);
      file.event_counts.push_back(n);
      file.stream.tokens.push_back(std::move(tok));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseErrorAt, ex.what(), line_no);
  }
  if (!saw_header) throw Error(ErrorCode::ParseErrorAt, "missing header", line_no + 1);
  return file;
}

TokenFile read_tokens(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_tokens(in);
}

}  // namespace sptok
