#include "remedy/printkit.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <set>

#include "remedy/errors.hpp"

namespace remedy {

std::string snake_case(const std::string& name) {
  std::string out;
  auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
  auto lower_or_digit = [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c));
  };
  for (size_t i = 0; i < name.size(); ++i) {
    char c = name[i];
    if (!std::isalnum(static_cast<unsigned char>(c))) {
      if (!out.empty() && out.back() != '_') out += '_';
      continue;
    }
    if (upper(c) && i > 0) {
      bool after_lower = lower_or_digit(name[i - 1]);
      bool starts_word = upper(name[i - 1]) && i + 1 < name.size() &&
                         std::islower(static_cast<unsigned char>(name[i + 1]));
      if ((after_lower || starts_word) && !out.empty() && out.back() != '_') out += '_';
    }
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "op_" + out;
  return out;
}

// Printing -------------------------------------------------------------------

namespace {

std::string operator_expr(const OperatorSpec& op) {
  std::string out = op.class_name();
  if (!op.fixed.empty()) {
    out += "(";
    for (size_t i = 0; i < op.fixed.size(); ++i) {
      if (i) out += ", ";
      out += op.fixed[i].first + "=" + to_source(op.fixed[i].second);
    }
    out += ")";
  }
  if (!op.hyperparams.empty()) {
    out += ".customize_schema(";
    for (size_t i = 0; i < op.hyperparams.size(); ++i) {
      if (i) out += ", ";
      out += op.hyperparams[i].first + "=" + to_string(op.hyperparams[i].second);
    }
    out += ")";
  }
  return out;
}

std::string base_name(const Step& s) {
  if (auto* op = s.as_operator()) {
    std::string b = snake_case(op->class_name());
    return b == "pipeline" ? "pipeline_op" : b;
  }
  return s.as_choice() ? "choice" : "branch";
}

// Pre-order list of every node the printer names.
void collect(const Step& s, std::vector<const Step*>& out) {
  out.push_back(&s);
  if (s.as_operator()) return;
  const auto& children = s.as_choice() ? s.as_choice()->alternatives : s.as_seq()->steps;
  for (const auto& c : children) collect(c, out);
}

std::map<const Step*, std::string> assign_names(const std::vector<const Step*>& nodes) {
  std::map<std::string, int> totals, seen;
  for (const auto* n : nodes) ++totals[base_name(*n)];
  std::map<const Step*, std::string> names;
  for (const auto* n : nodes) {
    std::string b = base_name(*n);
    names[n] = totals[b] > 1 ? b + "_" + std::to_string(seen[b]++) : b;
  }
  return names;
}

void emit(const Step& s, const std::map<const Step*, std::string>& names, std::string& text) {
  if (auto* op = s.as_operator()) {
    text += names.at(&s) + " = " + operator_expr(*op) + "\n";
    return;
  }
  const auto& children = s.as_choice() ? s.as_choice()->alternatives : s.as_seq()->steps;
  for (const auto& c : children) emit(c, names, text);
  std::string line = names.at(&s) + " = ";
  for (size_t i = 0; i < children.size(); ++i) {
    if (i) line += s.as_choice() ? " | " : " >> ";
    line += names.at(&children[i]);
  }
  text += line + "\n";
}

}  // namespace

PipelineSource pretty_print(const PlannedPipeline& p) {
  std::vector<const Step*> nodes;
  for (const auto& s : p.steps) collect(s, nodes);
  auto names = assign_names(nodes);
  PipelineSource src;
  for (const auto& s : p.steps) emit(s, names, src.text);
  std::string last = "pipeline = ";
  for (size_t i = 0; i < p.steps.size(); ++i) {
    if (i) last += " >> ";
    last += names.at(&p.steps[i]);
  }
  src.text += last + "\n";
  for (const auto* n : nodes)
    if (auto* op = n->as_operator()) src.binding_names.try_emplace(op->name, names.at(n));
  return src;
}

// Parsing --------------------------------------------------------------------

namespace {

enum class Tok { Ident, Int, Real, String, Punct, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  Literal value;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    int depth = 0;
    while (true) {
      skip_blanks();
      if (i_ >= s_.size()) break;
      char c = s_[i_];
      int line = line_, col = col_;
      if (c == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
        continue;
      }
      if (c == '\n') {
        advance();
        if (depth == 0 && !out.empty() && out.back().kind != Tok::Newline)
          out.push_back({Tok::Newline, "\\n", {}, line, col});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
          id += s_[i_];
          advance();
        }
        out.push_back({Tok::Ident, id, {}, line, col});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          ((c == '-' || c == '+') && i_ + 1 < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[i_ + 1])) || s_[i_ + 1] == '.'))) {
        out.push_back(number(line, col));
        continue;
      }
      if (c == '"' || c == '\'') {
        out.push_back(string(line, col));
        continue;
      }
      if (c == '>' && i_ + 1 < s_.size() && s_[i_ + 1] == '>') {
        advance();
        advance();
        out.push_back({Tok::Punct, ">>", {}, line, col});
        continue;
      }
      if (std::string("=(),.|").find(c) != std::string::npos) {
        if (c == '(') ++depth;
        if (c == ')' && depth > 0) --depth;
        advance();
        out.push_back({Tok::Punct, std::string(1, c), {}, line, col});
        continue;
      }
      fail(line, col, std::string("unexpected character '") + c + "'");
    }
    if (!out.empty() && out.back().kind != Tok::Newline) out.push_back({Tok::Newline, "\\n", {}, line_, col_});
    out.push_back({Tok::End, "end of input", {}, line_, col_});
    return out;
  }

  [[noreturn]] static void fail(int line, int col, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }

 private:
  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_blanks() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\r')) advance();
  }

  Token number(int line, int col) {
    size_t start = i_;
    if (s_[i_] == '-' || s_[i_] == '+') advance();
    bool real = false;
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '.' || c == 'e' || c == 'E') {
        real = true;
        advance();
        if ((c == 'e' || c == 'E') && i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) advance();
      } else {
        break;
      }
    }
    std::string text = s_.substr(start, i_ - start);
    if (!real) {
      std::int64_t v = 0;
      const char* first = text.data() + (text[0] == '+' ? 1 : 0);
      auto [p, ec] = std::from_chars(first, text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size()) fail(line, col, "bad integer '" + text + "'");
      return {Tok::Int, text, Literal{v}, line, col};
    }
    char* end = nullptr;
    double d = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) fail(line, col, "bad number '" + text + "'");
    return {Tok::Real, text, Literal{d}, line, col};
  }

  Token string(int line, int col) {
    char q = s_[i_];
    advance();
    std::string v;
    while (true) {
      if (i_ >= s_.size() || s_[i_] == '\n') fail(line, col, "unterminated string");
      char c = s_[i_];
      advance();
      if (c == q) break;
      if (c == '\\') {
        if (i_ >= s_.size()) fail(line, col, "unterminated string");
        char e = s_[i_];
        advance();
        switch (e) {
          case 'n': v += '\n'; break;
          case 't': v += '\t'; break;
          default: v += e;
        }
        continue;
      }
      v += c;
    }
    return {Tok::String, v, Literal{v}, line, col};
  }

  const std::string& s_;
  size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  PlannedPipeline run() {
    std::optional<Step> result;
    while (peek().kind != Tok::End) {
      if (result) fail(peek(), "statements after 'pipeline = ...' are not allowed");
      Token name = expect(Tok::Ident, "a variable name");
      expect_punct("=");
      Step value = expr();
      if (peek().kind != Tok::Newline) fail(peek(), "expected end of line, found '" + peek().text + "'");
      next();
      if (name.text == "pipeline") result = std::move(value);
      else vars_.insert_or_assign(name.text, std::move(value));
    }
    if (!result) fail(peek(), "missing final 'pipeline = ...' statement");
    PlannedPipeline p;
    if (auto* seq = result->as_seq()) p.steps = seq->steps;
    else p.steps.push_back(std::move(*result));
    try {
      validate(p);
    } catch (const ValidationError& e) {
      throw ParseError(std::string("invalid pipeline: ") + e.what());
    }
    return normalize(std::move(p));
  }

 private:
  const Token& peek() const { return t_[pos_]; }
  Token next() { return t_[pos_++]; }
  bool at_punct(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }

  [[noreturn]] void fail(const Token& at, const std::string& msg) { Lexer::fail(at.line, at.col, msg); }

  Token expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(peek(), "expected " + what + ", found '" + peek().text + "'");
    return next();
  }
  void expect_punct(const char* p) {
    if (!at_punct(p)) fail(peek(), std::string("expected '") + p + "', found '" + peek().text + "'");
    next();
  }

  Step expr() {
    std::vector<Step> alts{chain()};
    while (at_punct("|")) {
      next();
      alts.push_back(chain());
    }
    if (alts.size() == 1) return std::move(alts.front());
    return Step(ChoiceNode{std::move(alts)});
  }

  Step chain() {
    std::vector<Step> steps{primary()};
    while (at_punct(">>")) {
      next();
      steps.push_back(primary());
    }
    if (steps.size() == 1) return std::move(steps.front());
    return Step(SeqNode{std::move(steps)});
  }

  Step primary() {
    if (at_punct("(")) {
      next();
      Step s = expr();
      expect_punct(")");
      return s;
    }
    Token id = expect(Tok::Ident, "an operator or variable");
    bool configured = at_punct("(") || at_punct(".");
    if (!configured) {
      if (auto it = vars_.find(id.text); it != vars_.end()) return it->second;
      if (std::islower(static_cast<unsigned char>(id.text[0])) || id.text[0] == '_')
        fail(id, "undefined variable '" + id.text + "'");
      return Step(OperatorSpec{id.text, {}, {}});
    }
    OperatorSpec op{id.text, {}, {}};
    if (at_punct("(")) {
      next();
      while (!at_punct(")")) {
        Token kw = expect(Tok::Ident, "a keyword argument");
        expect_punct("=");
        op.fixed.emplace_back(kw.text, literal());
        if (!at_punct(",")) break;
        next();
      }
      expect_punct(")");
    }
    if (at_punct(".")) {
      next();
      Token m = expect(Tok::Ident, "customize_schema");
      if (m.text != "customize_schema") fail(m, "unknown method '" + m.text + "'");
      expect_punct("(");
      while (!at_punct(")")) {
        Token kw = expect(Tok::Ident, "a hyperparameter name");
        expect_punct("=");
        op.hyperparams.emplace_back(kw.text, domain());
        if (!at_punct(",")) break;
        next();
      }
      expect_punct(")");
    }
    return Step(std::move(op));
  }

  Literal literal() {
    const Token& t = peek();
    if (t.kind == Tok::Int || t.kind == Tok::Real || t.kind == Tok::String) return next().value;
    if (t.kind == Tok::Ident && (t.text == "True" || t.text == "False")) {
      next();
      return t.text == "True";
    }
    fail(t, "expected a literal, found '" + t.text + "'");
  }

  double real() {
    const Token& t = peek();
    if (t.kind != Tok::Int && t.kind != Tok::Real) fail(t, "expected a number, found '" + t.text + "'");
    return *as_number(next().value);
  }

  std::int64_t integer() {
    const Token& t = peek();
    if (t.kind != Tok::Int) fail(t, "expected an integer, found '" + t.text + "'");
    return std::get<std::int64_t>(next().value);
  }

  HyperparamDomain domain() {
    Token form = expect(Tok::Ident, "a domain literal");
    expect_punct("(");
    auto wrap = [&](auto&& make) {
      try {
        return make();
      } catch (const ValidationError& e) {
        fail(form, e.what());
      }
    };
    HyperparamDomain d = HyperparamDomain::anything();
    if (form.text == "cat") {
      std::vector<Literal> values{literal()};
      while (at_punct(",")) {
        next();
        values.push_back(literal());
      }
      d = wrap([&] { return HyperparamDomain::categorical(values); });
    } else if (form.text == "int") {
      std::int64_t lo = integer();
      expect_punct(",");
      std::int64_t hi = integer();
      d = wrap([&] { return HyperparamDomain::int_range(lo, hi); });
    } else if (form.text == "float") {
      double lo = real();
      expect_punct(",");
      double hi = real();
      bool open_lo = false, open_hi = false;
      if (at_punct(",")) {
        next();
        Token o = expect(Tok::String, "\"lo\", \"hi\" or \"both\"");
        if (o.text == "lo" || o.text == "both") open_lo = true;
        if (o.text == "hi" || o.text == "both") open_hi = true;
        if (!open_lo && !open_hi) fail(o, "openness must be \"lo\", \"hi\" or \"both\"");
      }
      d = wrap([&] { return HyperparamDomain::float_range(lo, hi, open_lo, open_hi); });
    } else if (form.text == "const") {
      d = HyperparamDomain::constant(literal());
    } else if (form.text == "any") {
      d = HyperparamDomain::anything();
    } else {
      fail(form, "unknown domain literal '" + form.text + "'");
    }
    expect_punct(")");
    return d;
  }

  std::vector<Token> t_;
  size_t pos_ = 0;
  std::map<std::string, Step> vars_;
};

}  // namespace

PlannedPipeline parse_dsl(const std::string& src) { return Parser(Lexer(src).run()).run(); }

// Instances ------------------------------------------------------------------

std::string print_instance(const PlannedPipeline& p, const PipelineInstance& inst) {
  std::vector<const OperatorSpec*> chosen;
  std::set<std::string> names;
  for_each_operator(p, [&](const OperatorSpec& op) {
    bool used = inst.binds_operator(op.name) || (is_mandatory(p, op.name) && !op.leaves_trace());
    if (used && names.insert(op.name).second) chosen.push_back(&op);
  });
  std::map<std::string, int> totals, seen;
  for (const auto* op : chosen) ++totals[snake_case(op->class_name())];
  std::string text, last = "pipeline = ";
  for (size_t i = 0; i < chosen.size(); ++i) {
    const auto& op = *chosen[i];
    std::string var = snake_case(op.class_name());
    if (totals[var] > 1) var += "_" + std::to_string(seen[var]++);
    std::string args;
    for (const auto& [key, value] : inst.bindings) {
      if (key.op != op.name) continue;
      if (!args.empty()) args += ", ";
      args += key.hp + "=" + to_source(value);
    }
    text += var + " = " + op.class_name() + (args.empty() ? "" : "(" + args + ")") + "\n";
    last += (i ? " >> " : "") + var;
  }
  return text + last + "\n";
}

}  // namespace remedy
