#include "bkg/scene.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace bkg {

namespace {

enum class Tok { Ident, Number, String, LBrace, RBrace, LBracket, RBracket, Comma, Equals, Semicolon, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Equals: return "'='";
    case Tok::Semicolon: return "';'";
    case Tok::End: return "end of input";
  }
  return "?";
}

[[noreturn]] void fail(std::size_t line, std::size_t column, const std::string& block, const std::string& msg) {
  throw SceneError(msg, line, column, block);
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
        lex_number(t);
      } else if (c == '"') {
        lex_string(t);
      } else {
        advance();
        switch (c) {
          case '{': t.kind = Tok::LBrace; break;
          case '}': t.kind = Tok::RBrace; break;
          case '[': t.kind = Tok::LBracket; break;
          case ']': t.kind = Tok::RBracket; break;
          case ',': t.kind = Tok::Comma; break;
          case '=': t.kind = Tok::Equals; break;
          case ';': t.kind = Tok::Semicolon; break;
          default: fail(t.line, t.column, "", std::string("unexpected character '") + c + "'");
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  void lex_number(Token& t) {
    t.kind = Tok::Number;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      const bool exp_sign = (c == '-' || c == '+') && !t.text.empty() && (t.text.back() == 'e' || t.text.back() == 'E');
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' || exp_sign ||
          ((c == '-' || c == '+') && t.text.empty()))
        t.text += advance();
      else
        break;
    }
    const char* first = t.text.data() + (t.text.front() == '+' ? 1 : 0);
    const char* last = t.text.data() + t.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, t.number);
    if (ec != std::errc() || ptr != last) fail(t.line, t.column, "", "malformed number '" + t.text + "'");
  }

  void lex_string(Token& t) {
    t.kind = Tok::String;
    advance();
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') fail(t.line, t.column, "", "unterminated string");
      const char c = advance();
      if (c == '"') return;
      if (c == '\\') {
        if (pos_ >= text_.size()) fail(t.line, t.column, "", "unterminated string");
        t.text += advance();
      } else {
        t.text += c;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct Value {
  enum class Kind { Number, String, List } kind = Kind::Number;
  double number = 0.0;
  std::string text;
  std::vector<Value> items;
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Entry {
  std::string key;
  Value value;
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Block {
  std::string name;
  std::vector<Entry> entries;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::vector<Block> run() {
    static const std::set<std::string> known = {"ambient", "immersion", "sample", "check", "output"};
    std::vector<Block> blocks;
    std::set<std::string> seen;
    while (peek().kind != Tok::End) {
      const Token& name = expect(Tok::Ident, "", "block name");
      if (!known.count(name.text))
        fail(name.line, name.column, name.text,
             "unknown block '" + name.text + "'; expected ambient, immersion, sample, check or output");
      if (!seen.insert(name.text).second)
        fail(name.line, name.column, name.text, "duplicate block '" + name.text + "'");
      Block b{name.text, {}, name.line, name.column};
      expect(Tok::LBrace, b.name, "'{'");
      std::set<std::string> keys;
      while (peek().kind != Tok::RBrace) {
        if (peek().kind == Tok::Semicolon) {
          next();
          continue;
        }
        const Token& key = expect(Tok::Ident, b.name, "key or '}'");
        if (!keys.insert(key.text).second)
          fail(key.line, key.column, b.name, "duplicate key '" + key.text + "' in block '" + b.name + "'");
        expect(Tok::Equals, b.name, "'=' after '" + key.text + "'");
        b.entries.push_back({key.text, value(b.name), key.line, key.column});
      }
      next();
      blocks.push_back(std::move(b));
    }
    return blocks;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  const Token& expect(Tok kind, const std::string& block, const std::string& what) {
    const Token& t = peek();
    if (t.kind != kind) {
      std::string got(describe(t.kind));
      if (t.kind == Tok::Ident || t.kind == Tok::Number) got += " '" + t.text + "'";
      fail(t.line, t.column, block, "expected " + what + ", found " + got);
    }
    return next();
  }

  Value value(const std::string& block) {
    const Token& t = peek();
    Value v;
    v.line = t.line;
    v.column = t.column;
    if (t.kind == Tok::Number) {
      v.number = next().number;
    } else if (t.kind == Tok::String) {
      v.kind = Value::Kind::String;
      v.text = next().text;
    } else if (t.kind == Tok::LBracket) {
      next();
      v.kind = Value::Kind::List;
      if (peek().kind != Tok::RBracket) {
        v.items.push_back(value(block));
        while (peek().kind == Tok::Comma) {
          next();
          v.items.push_back(value(block));
        }
      }
      expect(Tok::RBracket, block, "',' or ']'");
    } else {
      std::string got(describe(t.kind));
      if (t.kind == Tok::Ident) got += " '" + t.text + "' (strings must be quoted)";
      fail(t.line, t.column, block, "expected value, found " + got);
    }
    return v;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Typed accessors; type errors point at the value.
struct Reader {
  const Block& block;
  const Entry* entry = nullptr;

  [[noreturn]] void bad(const Value& v, const std::string& msg) const { fail(v.line, v.column, block.name, msg); }

  double number(const Value& v) const {
    if (v.kind != Value::Kind::Number) bad(v, "'" + entry->key + "' expects a number");
    if (!std::isfinite(v.number)) bad(v, "'" + entry->key + "' must be finite");
    return v.number;
  }
  Index integer(const Value& v) const {
    const double x = number(v);
    if (x != std::floor(x) || std::abs(x) > 1e9) bad(v, "'" + entry->key + "' expects an integer");
    return static_cast<Index>(x);
  }
  std::string string(const Value& v) const {
    if (v.kind != Value::Kind::String) bad(v, "'" + entry->key + "' expects a quoted string");
    return v.text;
  }
  const std::vector<Value>& list(const Value& v) const {
    if (v.kind != Value::Kind::List) bad(v, "'" + entry->key + "' expects a list");
    return v.items;
  }
  std::vector<double> numbers(const Value& v) const {
    std::vector<double> out;
    for (const auto& x : list(v)) out.push_back(number(x));
    return out;
  }
  std::vector<std::vector<double>> rows(const Value& v) const {
    std::vector<std::vector<double>> out;
    for (const auto& x : list(v)) out.push_back(numbers(x));
    return out;
  }
  // a single string is shorthand for a one-element list
  std::vector<std::string> strings(const Value& v) const {
    if (v.kind == Value::Kind::String) return {v.text};
    std::vector<std::string> out;
    for (const auto& x : list(v)) out.push_back(string(x));
    return out;
  }
  double positive(const Value& v) const {
    const double x = number(v);
    if (!(x > 0.0)) bad(v, "'" + entry->key + "' must be positive");
    return x;
  }

  [[noreturn]] void unknown(const std::vector<std::string>& keys) const {
    std::string list;
    for (const auto& k : keys) list += (list.empty() ? "" : ", ") + k;
    fail(entry->line, entry->column, block.name,
         "unknown key '" + entry->key + "' in block '" + block.name + "'; expected one of " + list);
  }
};

template <class F>
void for_entries(const Block& b, F&& f) {
  Reader r{b};
  for (const auto& e : b.entries) {
    r.entry = &e;
    f(r, e);
  }
}

struct Locations {
  std::size_t line = 1;
  std::size_t column = 1;
};

void read_ambient(const Block& b, AmbientSpec& s, bool& m_given) {
  for_entries(b, [&](Reader& r, const Entry& e) {
    if (e.key == "kind") {
      s.kind = r.string(e.value);
      if (s.kind != "flat" && s.kind != "space_form" && s.kind != "product")
        r.bad(e.value, "ambient kind must be \"flat\", \"space_form\" or \"product\"");
    } else if (e.key == "m") {
      s.m = r.integer(e.value);
      if (s.m < 1) r.bad(e.value, "'m' must be at least 1");
      m_given = true;
    } else if (e.key == "c") {
      s.c = r.number(e.value);
    } else if (e.key == "curvatures") {
      s.curvatures = r.numbers(e.value);
    } else if (e.key == "j_perturb") {
      s.j_perturb = r.number(e.value);
    } else {
      r.unknown({"kind", "m", "c", "curvatures", "j_perturb"});
    }
  });
}

void read_immersion(const Block& b, ImmersionSpec& s, std::vector<Value>& component_values) {
  for_entries(b, [&](Reader& r, const Entry& e) {
    if (e.key == "builtin") {
      s.builtins = r.strings(e.value);
      if (s.builtins.empty()) r.bad(e.value, "'builtin' needs at least one name");
    } else if (e.key == "params") {
      s.params = r.numbers(e.value);
    } else if (e.key == "parameters") {
      s.parameters = r.strings(e.value);
    } else if (e.key == "components") {
      component_values = r.list(e.value);
      s.components.clear();
      for (const auto& v : component_values) s.components.push_back(r.string(v));
    } else if (e.key == "name") {
      s.name = r.string(e.value);
    } else {
      r.unknown({"builtin", "params", "parameters", "components", "name"});
    }
  });
}

void read_sample(const Block& b, SampleSpec& s) {
  for_entries(b, [&](Reader& r, const Entry& e) {
    if (e.key == "ranges") {
      s.ranges.clear();
      for (const auto& v : r.list(e.value)) {
        const auto pair = r.numbers(v);
        if (pair.size() != 2 || pair[0] > pair[1]) r.bad(v, "each range must be [lo, hi] with lo <= hi");
        s.ranges.push_back({pair[0], pair[1]});
      }
    } else if (e.key == "counts") {
      s.counts.clear();
      for (const auto& v : r.list(e.value)) {
        s.counts.push_back(r.integer(v));
        if (s.counts.back() < 1) r.bad(v, "grid counts must be at least 1");
      }
    } else if (e.key == "points") {
      s.points = r.rows(e.value);
    } else {
      r.unknown({"ranges", "counts", "points"});
    }
  });
}

void read_check(const Block& b, CheckSpec& s) {
  for_entries(b, [&](Reader& r, const Entry& e) {
    if (e.key == "theorems") {
      s.theorems = r.strings(e.value);
      for (const auto& t : s.theorems) {
        try {
          parse_theorem(t);
        } catch (const InputError& err) {
          r.bad(e.value, err.what());
        }
      }
    } else if (e.key == "interpretations") {
      s.interpretations = r.strings(e.value);
      for (const auto& name : s.interpretations) {
        if (name == "all") continue;
        try {
          Interpretation::parse(name);
        } catch (const InputError& err) {
          r.bad(e.value, err.what());
        }
      }
    } else if (e.key == "tol") {
      s.tol = r.positive(e.value);
    } else if (e.key == "eq_tol") {
      s.eq_tol = r.positive(e.value);
    } else if (e.key == "fd_step") {
      s.fd_step = r.positive(e.value);
    } else if (e.key == "directions") {
      s.directions = r.rows(e.value);
    } else if (e.key == "direction_count") {
      s.direction_count = r.integer(e.value);
      if (s.direction_count < 1) r.bad(e.value, "'direction_count' must be at least 1");
    } else if (e.key == "slant") {
      s.slant = r.string(e.value);
      if (s.slant != "printed" && s.slant != "n-cos2") r.bad(e.value, "slant must be \"printed\" or \"n-cos2\"");
    } else {
      r.unknown({"theorems", "interpretations", "tol", "eq_tol", "fd_step", "directions", "direction_count", "slant"});
    }
  });
}

void read_output(const Block& b, OutputSpec& s) {
  for_entries(b, [&](Reader& r, const Entry& e) {
    if (e.key == "format") {
      s.format = r.string(e.value);
      if (s.format != "text" && s.format != "json" && s.format != "csv")
        r.bad(e.value, "format must be \"text\", \"json\" or \"csv\"");
    } else if (e.key == "path") {
      s.path = r.string(e.value);
    } else {
      r.unknown({"format", "path"});
    }
  });
}

const BuiltinInfo* catalogue_entry(const std::string& name) {
  for (const auto& b : builtin_catalogue())
    if (b.name == name) return &b;
  return nullptr;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T, class F>
std::string list_of(const std::vector<T>& xs, F&& f) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + f(xs[i]);
  return out + "]";
}

}  // namespace

SceneConfig parse_scene(std::string_view text) {
  const auto blocks = Parser(Lexer(text).run()).run();
  SceneConfig s;
  bool m_given = false;
  const Block* ambient = nullptr;
  const Block* immersion = nullptr;
  const Block* sample = nullptr;
  const Block* check = nullptr;
  std::vector<Value> component_values;
  for (const auto& b : blocks) {
    if (b.name == "ambient") {
      ambient = &b;
      read_ambient(b, s.ambient, m_given);
    } else if (b.name == "immersion") {
      immersion = &b;
      read_immersion(b, s.immersion, component_values);
    } else if (b.name == "sample") {
      sample = &b;
      read_sample(b, s.sample);
    } else if (b.name == "check") {
      check = &b;
      read_check(b, s.check);
    } else {
      read_output(b, s.output);
    }
  }

  // semantic checks across keys
  auto& a = s.ambient;
  const Locations at_ambient = ambient ? Locations{ambient->line, ambient->column} : Locations{};
  if (a.kind == "product") {
    if (a.curvatures.empty()) fail(at_ambient.line, at_ambient.column, "ambient", "product ambient needs 'curvatures'");
    if (!m_given) a.m = static_cast<Index>(a.curvatures.size());
    if (static_cast<Index>(a.curvatures.size()) != a.m)
      fail(at_ambient.line, at_ambient.column, "ambient", "product ambient needs one curvature per complex dimension");
  } else if (!a.curvatures.empty()) {
    fail(at_ambient.line, at_ambient.column, "ambient", "'curvatures' only applies to the product kind");
  }
  if (a.kind != "space_form" && a.c != 0.0)
    fail(at_ambient.line, at_ambient.column, "ambient", "'c' only applies to the space_form kind");

  if (!immersion) fail(1, 1, "immersion", "scene has no immersion block");
  auto& im = s.immersion;
  const Locations at_imm{immersion->line, immersion->column};
  std::vector<Index> dims;
  if (!im.builtins.empty() && !im.components.empty())
    fail(at_imm.line, at_imm.column, "immersion", "give either 'builtin' or 'components', not both");
  if (!im.builtins.empty()) {
    if (!im.parameters.empty())
      fail(at_imm.line, at_imm.column, "immersion", "'parameters' only applies to expression components");
    if (im.builtins.size() > 1 && !im.params.empty())
      fail(at_imm.line, at_imm.column, "immersion", "'params' needs a single builtin");
    for (const auto& name : im.builtins) {
      const BuiltinInfo* info = catalogue_entry(name);
      if (!info) {
        std::string names;
        for (const auto& b : builtin_catalogue()) names += " " + b.name;
        fail(at_imm.line, at_imm.column, "immersion", "unknown builtin '" + name + "'; available:" + names);
      }
      if (a.m < info->min_complex_dim)
        fail(at_imm.line, at_imm.column, "immersion",
             "builtin '" + name + "' needs complex dimension >= " + std::to_string(info->min_complex_dim));
      if (im.params.size() > info->param_names.size())
        fail(at_imm.line, at_imm.column, "immersion", "too many params for builtin '" + name + "'");
      dims.push_back(info->param_dim);
    }
  } else if (!im.components.empty()) {
    if (im.parameters.empty())
      fail(at_imm.line, at_imm.column, "immersion", "expression components need 'parameters'");
    if (!im.params.empty()) fail(at_imm.line, at_imm.column, "immersion", "'params' only applies to builtins");
    if (static_cast<Index>(im.components.size()) != 2 * a.m)
      fail(at_imm.line, at_imm.column, "immersion",
           "immersion has " + std::to_string(im.components.size()) + " components; ambient m = " +
               std::to_string(a.m) + " needs " + std::to_string(2 * a.m));
    for (std::size_t k = 0; k < im.components.size(); ++k) {
      try {
        expr::parse_expression(im.components[k], im.parameters);
      } catch (const expr::SyntaxError& err) {
        fail(component_values[k].line, component_values[k].column + err.offset(), "immersion",
             "component " + std::to_string(k + 1) + ": " + err.what());
      } catch (const expr::UnknownIdentifierError& err) {
        fail(component_values[k].line, component_values[k].column + err.offset(), "immersion",
             "component " + std::to_string(k + 1) + ": " + err.what());
      }
    }
    dims.push_back(static_cast<Index>(im.parameters.size()));
  } else {
    fail(at_imm.line, at_imm.column, "immersion", "immersion needs 'builtin' or 'components'");
  }

  const Locations at_sample = sample ? Locations{sample->line, sample->column} : Locations{};
  for (Index n : dims) {
    if (!s.sample.ranges.empty() && static_cast<Index>(s.sample.ranges.size()) != n)
      fail(at_sample.line, at_sample.column, "sample", "'ranges' needs one range per parameter");
    if (s.sample.counts.size() > 1 && static_cast<Index>(s.sample.counts.size()) != n)
      fail(at_sample.line, at_sample.column, "sample", "'counts' needs one count per parameter (or a single count)");
    for (const auto& p : s.sample.points)
      if (static_cast<Index>(p.size()) != n)
        fail(at_sample.line, at_sample.column, "sample", "every point needs one coordinate per parameter");
    const Locations at_check = check ? Locations{check->line, check->column} : Locations{};
    for (const auto& d : s.check.directions)
      if (static_cast<Index>(d.size()) != n)
        fail(at_check.line, at_check.column, "check", "every direction needs one coefficient per tangent dimension");
  }
  return s;
}

SceneConfig load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read scene file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

std::string emit_scene(const SceneConfig& s) {
  std::ostringstream os;
  const auto numbers = [](const std::vector<double>& xs) { return list_of(xs, exact); };
  const auto strings = [](const std::vector<std::string>& xs) { return list_of(xs, quote); };
  const auto rows = [&](const std::vector<std::vector<double>>& xs) { return list_of(xs, numbers); };

  os << "ambient {\n  kind = " << quote(s.ambient.kind) << "\n  m = " << s.ambient.m << "\n";
  if (s.ambient.kind == "space_form") os << "  c = " << exact(s.ambient.c) << "\n";
  if (!s.ambient.curvatures.empty()) os << "  curvatures = " << numbers(s.ambient.curvatures) << "\n";
  os << "  j_perturb = " << exact(s.ambient.j_perturb) << "\n}\n";

  const auto& im = s.immersion;
  os << "immersion {\n";
  if (!im.builtins.empty()) os << "  builtin = " << strings(im.builtins) << "\n";
  if (!im.params.empty()) os << "  params = " << numbers(im.params) << "\n";
  if (!im.parameters.empty()) os << "  parameters = " << strings(im.parameters) << "\n";
  if (!im.components.empty()) os << "  components = " << strings(im.components) << "\n";
  if (!im.name.empty()) os << "  name = " << quote(im.name) << "\n";
  os << "}\n";

  const auto& sa = s.sample;
  os << "sample {\n";
  if (!sa.ranges.empty())
    os << "  ranges = " << list_of(sa.ranges, [&](const ParameterRange& r) { return numbers({r.lo, r.hi}); }) << "\n";
  if (!sa.counts.empty())
    os << "  counts = " << list_of(sa.counts, [](Index c) { return std::to_string(c); }) << "\n";
  if (!sa.points.empty()) os << "  points = " << rows(sa.points) << "\n";
  os << "}\n";

  const auto& c = s.check;
  os << "check {\n  theorems = " << strings(c.theorems) << "\n  interpretations = " << strings(c.interpretations)
     << "\n  tol = " << exact(c.tol) << "\n  eq_tol = " << exact(c.eq_tol) << "\n  fd_step = " << exact(c.fd_step)
     << "\n";
  if (!c.directions.empty()) os << "  directions = " << rows(c.directions) << "\n";
  os << "  direction_count = " << c.direction_count << "\n  slant = " << quote(c.slant) << "\n}\n";

  os << "output {\n  format = " << quote(s.output.format) << "\n";
  if (!s.output.path.empty()) os << "  path = " << quote(s.output.path) << "\n";
  os << "}\n";
  return os.str();
}

AmbientManifold build_ambient(const AmbientSpec& spec) {
  AmbientManifold amb = spec.kind == "space_form" ? complex_space_form(spec.m, spec.c)
                        : spec.kind == "product"  ? product_of_curves(spec.curvatures)
                                                  : flat_ambient(spec.m);
  if (spec.j_perturb != 0.0) amb = with_perturbed_j(std::move(amb), spec.j_perturb);
  return amb;
}

std::vector<Fixture> build_fixtures(const SceneConfig& scene) {
  const auto& im = scene.immersion;
  std::vector<Fixture> out;
  if (!im.components.empty()) {
    std::vector<expr::Expr> comps;
    for (const auto& c : im.components) comps.push_back(expr::parse_expression(c, im.parameters));
    const std::string name = im.name.empty() ? "expression" : im.name;
    out.push_back({name, expression_immersion(im.parameters, std::move(comps), name)});
    return out;
  }
  for (const auto& b : im.builtins) {
    const std::string name = im.builtins.size() == 1 && !im.name.empty() ? im.name : b;
    out.push_back({name, builtin_immersion(b, im.params, scene.ambient.m)});
  }
  return out;
}

std::vector<Vec> sample_points(const SceneConfig& scene, const Immersion& imm) {
  std::vector<Vec> out;
  const auto& sa = scene.sample;
  if (!sa.points.empty()) {
    for (const auto& p : sa.points) out.push_back(Eigen::Map<const Vec>(p.data(), static_cast<Index>(p.size())));
    return out;
  }
  const Index n = imm.param_dim;
  const auto& ranges = sa.ranges.empty() ? imm.default_domain : sa.ranges;
  std::vector<Index> counts(n, 3);
  for (Index k = 0; k < n && !sa.counts.empty(); ++k) counts[k] = sa.counts.size() == 1 ? sa.counts[0] : sa.counts[k];

  std::vector<Index> idx(n, 0);
  for (;;) {
    Vec u(n);
    for (Index k = 0; k < n; ++k) {
      const auto& r = ranges[k];
      u[k] = counts[k] == 1 ? 0.5 * (r.lo + r.hi)
                            : r.lo + (r.hi - r.lo) * static_cast<double>(idx[k]) / static_cast<double>(counts[k] - 1);
    }
    out.push_back(u);
    Index k = n - 1;
    while (k >= 0 && ++idx[k] == counts[k]) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::vector<Vec> sample_directions(const CheckSpec& check, Index n) {
  std::vector<Vec> out;
  if (!check.directions.empty()) {
    for (const auto& d : check.directions) out.push_back(Eigen::Map<const Vec>(d.data(), static_cast<Index>(d.size())));
    return out;
  }
  for (Index k = 0; k < check.direction_count; ++k) {
    const double t = std::numbers::pi * static_cast<double>(k) / static_cast<double>(check.direction_count);
    Vec c = Vec::Zero(n);
    c[0] = std::cos(t);
    if (n > 1) c[1] = std::sin(t);
    out.push_back(c);
  }
  return out;
}

std::vector<Interpretation> scene_interpretations(const CheckSpec& check) {
  std::vector<Interpretation> out;
  for (const auto& name : check.interpretations) {
    const auto batch = name == "all" ? Interpretation::all() : std::vector<Interpretation>{Interpretation::parse(name)};
    for (const auto& i : batch)
      if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  }
  return out;
}

Tolerances scene_tolerances(const CheckSpec& check) {
  Tolerances t;
  t.holds = check.tol;
  t.equality = check.eq_tol;
  return t;
}

FdPolicy scene_policy(const CheckSpec& check) {
  FdPolicy p;
  p.h0 = check.fd_step;
  p.validate();
  return p;
}

}  // namespace bkg
