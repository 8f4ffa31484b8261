#include "forenskit/plan.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "forenskit/error.hpp"

namespace forenskit {

namespace {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
  bool quoted = false;
  bool brace = false;

  bool is(std::string_view word) const { return !quoted && !brace && text == word; }
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&]() {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };

  while (i < src.size()) {
    char c = src[i];
    if (space(c)) {
      advance();
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (c == '{' || c == '}') {
      out.push_back({std::string(1, c), line, col, false, true});
      advance();
      continue;
    }
    Token t{{}, line, col, false, false};
    while (i < src.size() && !space(src[i]) && src[i] != '{' && src[i] != '}') {
      if (src[i] != '"') {
        t.text += src[i];
        advance();
        continue;
      }
      t.quoted = true;
      const std::size_t qline = line;
      const std::size_t qcol = col;
      advance();
      bool closed = false;
      while (i < src.size()) {
        char q = src[i];
        if (q == '"') {
          advance();
          closed = true;
          break;
        }
        if (q == '\n') break;
        if (q == '\\') {
          if (i + 1 >= src.size()) break;
          char e = src[i + 1];
          char decoded;
          switch (e) {
            case '"': decoded = '"'; break;
            case '\\': decoded = '\\'; break;
            case 'n': decoded = '\n'; break;
            case 't': decoded = '\t'; break;
            default: throw ParseError(line, col, std::string("unknown escape '\\") + e + "'");
          }
          t.text += decoded;
          advance();
          advance();
          continue;
        }
        t.text += q;
        advance();
      }
      if (!closed) throw ParseError(qline, qcol, "unterminated string");
    }
    out.push_back(std::move(t));
  }
  return out;
}

const std::set<std::string>& option_keys() {
  static const std::set<std::string> keys{"app", "mode", "pattern", "source",
                                          "direction", "name", "path", "scope"};
  return keys;
}

bool needs_quotes(std::string_view v) {
  if (v.empty()) return true;
  for (unsigned char c : v)
    if (c <= 0x20 || c == 0x7f || c == '"' || c == '\\' || c == '{' || c == '}' || c == '#')
      return true;
  return false;
}

std::string quote(std::string_view v) {
  if (!needs_quotes(v)) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

struct Builder {
  CapabilityInvocation inv;
  std::optional<bool> opaque;
  std::set<std::string> seen;

  void apply(const std::string& key, const std::string& value) {
    if (!seen.insert(key).second) throw Error(ErrorCode::InvalidArgument, "duplicate parameter '" + key + "'");
    auto bad = [&](const std::string& why) {
      throw Error(ErrorCode::InvalidArgument, "parameter '" + key + "': " + why);
    };
    if (key == "target" || key == "partition") {
      if (inv.target_data) bad("target given twice");
      try {
        inv.target_data = RegionRef::parse(value);
      } catch (const Error& e) {
        bad(e.what());
      }
      if (key == "partition" && inv.target_data->form() != RegionRef::Form::Partition)
        bad("expected a partition name");
    } else if (key == "key") {
      try {
        inv.key = decode_bytes(value);
      } catch (const Error& e) {
        bad(e.what());
      }
    } else if (key == "entry") {
      if (value.empty()) bad("empty entry point");
      inv.entry_point = value;
    } else if (key == "message") {
      try {
        inv.message = Payload{decode_bytes(value), false};
      } catch (const Error& e) {
        bad(e.what());
      }
    } else if (key == "opaque") {
      if (value != "true" && value != "false") bad("expected true or false");
      opaque = value == "true";
    } else if (key == "method") {
      if (value.empty()) bad("empty method");
      inv.method = value;
    } else if (key == "declare") {
      std::size_t start = 0;
      while (true) {
        std::size_t comma = value.find(',', start);
        std::string item = value.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item.empty()) bad("empty declared effect");
        DeclaredEffect eff;
        std::size_t hash = item.rfind('#');
        try {
          if (hash != std::string::npos) {
            eff.after_digest = Digest::from_hex(item.substr(hash + 1));
            item.resize(hash);
          }
          eff.region = RegionRef::parse(item);
        } catch (const Error& e) {
          bad(e.what());
        }
        inv.declared_effects.push_back(std::move(eff));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    } else if (option_keys().count(key)) {
      inv.options[key] = value;
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown parameter '" + key + "'");
    }
  }

  CapabilityInvocation finish() {
    if (opaque && *opaque) {
      if (!inv.message) inv.message = Payload{};
      inv.message->opaque = true;
    }
    return std::move(inv);
  }
};

}  // namespace

const std::vector<std::string>& plan_parameter_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k{"target", "partition", "key",    "entry",
                               "message", "opaque",   "method", "declare"};
    for (const auto& o : option_keys()) k.push_back(o);
    return k;
  }();
  return keys;
}

std::string encode_bytes(ByteView bytes) {
  bool printable = std::all_of(bytes.begin(), bytes.end(),
                               [](std::uint8_t c) { return c >= 0x20 && c < 0x7f; });
  return printable ? "text:" + to_string(bytes) : "hex:" + to_hex(bytes);
}

Bytes decode_bytes(std::string_view value) {
  if (value.substr(0, 5) == "text:") return to_bytes(value.substr(5));
  if (value.substr(0, 4) == "hex:") return from_hex(value.substr(4));
  throw Error(ErrorCode::InvalidArgument, "byte values need a text: or hex: prefix");
}

Params encode_params(const CapabilityInvocation& inv) {
  Params out;
  if (inv.target_data) {
    const bool partition = inv.kind == CapabilityKind::ForensicCopy &&
                           inv.target_data->form() == RegionRef::Form::Partition;
    out.emplace_back(partition ? "partition" : "target", inv.target_data->text());
  }
  if (inv.key) out.emplace_back("key", encode_bytes(*inv.key));
  if (inv.entry_point) out.emplace_back("entry", *inv.entry_point);
  if (inv.message) {
    out.emplace_back("message", encode_bytes(inv.message->data));
    if (inv.message->opaque) out.emplace_back("opaque", "true");
  }
  if (inv.method) out.emplace_back("method", *inv.method);
  if (!inv.declared_effects.empty()) {
    std::string d;
    for (const auto& e : inv.declared_effects) {
      if (!d.empty()) d += ",";
      d += e.region.text();
      if (e.after_digest) d += "#" + e.after_digest->hex();
    }
    out.emplace_back("declare", d);
  }
  for (const auto& [k, v] : inv.options) out.emplace_back(k, v);
  return out;
}

CapabilityInvocation decode_params(CapabilityKind kind, const Params& params) {
  Builder b;
  b.inv.kind = kind;
  for (const auto& [k, v] : params) b.apply(k, v);
  return b.finish();
}

Plan parse_plan(std::string_view text) {
  const std::vector<Token> toks = tokenize(text);
  Plan plan;
  bool saw_level = false;
  bool saw_practitioner = false;
  std::set<StageKind> seen;
  std::size_t i = 0;

  auto value_after = [&](const Token& kw, const char* what) -> const Token& {
    if (i >= toks.size() || toks[i].brace || toks[i].line != kw.line)
      throw ParseError(kw.line, kw.column, std::string("expected ") + what + " after '" + kw.text + "'");
    return toks[i++];
  };

  while (i < toks.size()) {
    const Token& t = toks[i++];
    if (t.is("level")) {
      if (saw_level) throw ParseError(t.line, t.column, "duplicate level declaration");
      if (!plan.stages.empty()) throw ParseError(t.line, t.column, "level must precede stages");
      const Token& v = value_after(t, "strict or standard");
      auto level = parse_level(v.text);
      if (!level) throw ParseError(v.line, v.column, "unknown level '" + v.text + "'");
      plan.level = *level;
      saw_level = true;
    } else if (t.is("practitioner")) {
      if (saw_practitioner) throw ParseError(t.line, t.column, "duplicate practitioner declaration");
      if (!plan.stages.empty()) throw ParseError(t.line, t.column, "practitioner must precede stages");
      const Token& id = value_after(t, "a practitioner id");
      if (id.text.empty()) throw ParseError(id.line, id.column, "empty practitioner id");
      const Token& exp = value_after(t, "an experience level");
      auto e = parse_experience(exp.text);
      if (!e) throw ParseError(exp.line, exp.column, "unknown experience level '" + exp.text + "'");
      plan.practitioner = {id.text, *e};
      saw_practitioner = true;
    } else if (t.is("stage")) {
      if (i >= toks.size() || toks[i].brace) throw ParseError(t.line, t.column, "expected a stage name");
      const Token& name = toks[i++];
      auto kind = parse_stage(name.text);
      if (!kind || name.quoted) throw ParseError(name.line, name.column, "unknown stage '" + name.text + "'");
      if (!seen.insert(*kind).second)
        throw ParseError(name.line, name.column, "duplicate stage '" + name.text + "'");
      if (i >= toks.size() || !toks[i].brace || toks[i].text != "{")
        throw ParseError(name.line, name.column, "expected '{' after stage name");
      ++i;
      PlanStage stage;
      stage.kind = *kind;
      stage.line = t.line;
      bool closed = false;
      while (i < toks.size()) {
        const Token& s = toks[i++];
        if (s.brace && s.text == "}") {
          closed = true;
          break;
        }
        if (!s.is("invoke"))
          throw ParseError(s.line, s.column, "expected 'invoke' or '}', found '" + s.text + "'");
        if (i >= toks.size() || toks[i].brace)
          throw ParseError(s.line, s.column, "expected a capability name");
        const Token& cap = toks[i++];
        auto ck = parse_capability(cap.text);
        if (!ck || cap.quoted)
          throw ParseError(cap.line, cap.column, "unknown capability '" + cap.text + "'");
        Builder b;
        b.inv.kind = *ck;
        while (i < toks.size() && !toks[i].brace && !toks[i].is("invoke")) {
          const Token& p = toks[i++];
          auto eq = p.text.find('=');
          if (eq == std::string::npos || eq == 0)
            throw ParseError(p.line, p.column, "expected key=value, found '" + p.text + "'");
          try {
            b.apply(p.text.substr(0, eq), p.text.substr(eq + 1));
          } catch (const Error& e) {
            throw ParseError(p.line, p.column, e.what());
          }
        }
        stage.invocations.push_back(b.finish());
      }
      if (!closed) throw ParseError(t.line, t.column, "unterminated stage block");
      plan.stages.push_back(std::move(stage));
    } else {
      throw ParseError(t.line, t.column, "unexpected '" + t.text + "'");
    }
  }
  return plan;
}

Plan load_plan(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read plan " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_plan(ss.str());
}

std::string render_plan(const Plan& plan) {
  std::string out = "level " + std::string(to_string(plan.level)) + "\n";
  out += "practitioner " + quote(plan.practitioner.id) + " " +
         std::string(to_string(plan.practitioner.experience)) + "\n";
  for (const PlanStage& s : plan.stages) {
    out += "\nstage " + std::string(to_string(s.kind)) + " {\n";
    for (const auto& inv : s.invocations) {
      out += "  invoke " + std::string(to_string(inv.kind));
      for (const auto& [k, v] : encode_params(inv)) out += " " + k + "=" + quote(v);
      out += "\n";
    }
    out += "}\n";
  }
  return out;
}

}  // namespace forenskit
