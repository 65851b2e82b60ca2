#include "stabletilt/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace stabletilt {

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_point(std::string& out, const Point& p) {
  out += '[';
  for (int i = 0; i < p.dim(); ++i) {
    if (i) out += ',';
    append_double(out, p[i]);
  }
  out += ']';
}

struct Cursor {
  const char* p;
  const char* end;
  void expect(char c) {
    skip_ws();
    if (p >= end || *p != c) throw std::invalid_argument("path_from_jsonl: malformed record");
    ++p;
  }
  bool peek(char c) {
    skip_ws();
    return p < end && *p == c;
  }
  void skip_ws() {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
  }
  double number() {
    skip_ws();
    double v = 0.0;
    auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc{}) throw std::invalid_argument("path_from_jsonl: bad number");
    p = res.ptr;
    return v;
  }
  std::string key() {
    expect('"');
    const char* s = p;
    while (p < end && *p != '"') ++p;
    std::string k(s, p);
    expect('"');
    expect(':');
    return k;
  }
  std::string string_value() {
    expect('"');
    const char* s = p;
    while (p < end && *p != '"') ++p;
    std::string v(s, p);
    expect('"');
    return v;
  }
  Point point() {
    expect('[');
    std::vector<double> vals;
    if (!peek(']')) {
      vals.push_back(number());
      while (peek(',')) {
        expect(',');
        vals.push_back(number());
      }
    }
    expect(']');
    Point pt(static_cast<int>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) pt[static_cast<int>(i)] = vals[i];
    return pt;
  }
};

}  // namespace

std::string path_to_jsonl(const JumpPath& path) {
  std::string out;
  out.reserve(64 + path.events.size() * 96);
  out += "{\"seed\":";
  out += std::to_string(path.seed);
  out += ",\"start\":";
  append_point(out, path.start);
  out += ",\"horizon\":";
  append_double(out, path.horizon);
  out += ",\"cutoff\":";
  append_double(out, path.cutoff);
  out += ",\"policy\":\"";
  out += path.policy == SmallJumpPolicy::Drop ? "drop" : "brownian_match";
  out += "\",\"events\":[";
  bool first = true;
  for (const auto& e : path.events) {
    if (!first) out += ',';
    first = false;
    out += "{\"t\":";
    append_double(out, e.time);
    out += ",\"pre\":";
    append_point(out, e.pre);
    out += ",\"post\":";
    append_point(out, e.post);
    out += '}';
  }
  out += "],\"end\":";
  append_point(out, path.end);
  out += '}';
  return out;
}

JumpPath path_from_jsonl(const std::string& line) {
  JumpPath path;
  Cursor c{line.data(), line.data() + line.size()};
  c.expect('{');
  bool first = true;
  while (!c.peek('}')) {
    if (!first) c.expect(',');
    first = false;
    const std::string k = c.key();
    if (k == "seed") {
      path.seed = static_cast<std::uint64_t>(c.number());
    } else if (k == "start") {
      path.start = c.point();
    } else if (k == "horizon") {
      path.horizon = c.number();
    } else if (k == "cutoff") {
      path.cutoff = c.number();
    } else if (k == "policy") {
      path.policy =
          c.string_value() == "drop" ? SmallJumpPolicy::Drop : SmallJumpPolicy::BrownianMatch;
    } else if (k == "end") {
      path.end = c.point();
    } else if (k == "events") {
      c.expect('[');
      while (!c.peek(']')) {
        if (!path.events.empty()) c.expect(',');
        JumpEvent e;
        c.expect('{');
        for (int f = 0; f < 3; ++f) {
          if (f) c.expect(',');
          const std::string ek = c.key();
          if (ek == "t")
            e.time = c.number();
          else if (ek == "pre")
            e.pre = c.point();
          else if (ek == "post")
            e.post = c.point();
        }
        c.expect('}');
        path.events.push_back(e);
      }
      c.expect(']');
    } else {
      throw std::invalid_argument("path_from_jsonl: unknown key " + k);
    }
  }
  return path;
}

void write_paths_jsonl(std::ostream& os, const std::vector<JumpPath>& paths) {
  for (const auto& p : paths) os << path_to_jsonl(p) << '\n';
}

}  // namespace stabletilt
