#include "oam/netlist.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace oam {

namespace {

struct Token {
  std::string text;
  SourceLoc loc;
};

// Tokenizes one line; '#' starts a comment.
std::vector<Token> tokenize_line(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#') {
      ++i;
    }
    out.push_back({std::string(line.substr(start, i - start)),
                   SourceLoc{line_no, static_cast<int>(start) + 1}});
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, int line_no)
      : tokens_(std::move(tokens)), line_no_(line_no) {}

  const Token& next(const char* what) {
    if (pos_ >= tokens_.size()) {
      throw ParseError(end_loc(), std::string("expected ") + what);
    }
    return tokens_[pos_++];
  }

  bool done() const { return pos_ >= tokens_.size(); }

  void expect_done() {
    if (!done()) {
      throw ParseError(tokens_[pos_].loc,
                       "unexpected trailing token '" + tokens_[pos_].text + "'");
    }
  }

  double real(const char* what) {
    const Token& t = next(what);
    // std::from_chars for double is unreliable pre-libstdc++11 for all formats;
    // strtod on a NUL-terminated copy is exact and strict here.
    const std::string s = t.text;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty() || errno == ERANGE ||
        !std::isfinite(v)) {
      throw ParseError(t.loc, std::string("malformed number '") + s + "' for " + what);
    }
    return v;
  }

  long long integer(const char* what) {
    const Token& t = next(what);
    long long v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || p != t.text.data() + t.text.size()) {
      throw ParseError(t.loc, std::string("malformed integer '") + t.text + "' for " + what);
    }
    return v;
  }

  Label label(const char* what) {
    const Token& t = next(what);
    auto l = Label::parse(t.text);
    if (!l) {
      throw ParseError(t.loc, std::string("malformed label '") + t.text + "' for " + what +
                                  " (integer within the OAM bound, or H/V)");
    }
    return *l;
  }

  SourceLoc end_loc() const {
    if (!tokens_.empty()) {
      const Token& last = tokens_.back();
      return SourceLoc{last.loc.line,
                       last.loc.column + static_cast<int>(last.text.size())};
    }
    return SourceLoc{line_no_, 1};
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int line_no_;
};

// Re-throws circuit-construction failures with the statement's location.
template <typename Fn>
void with_loc(SourceLoc loc, Fn&& fn) {
  try {
    fn();
  } catch (const SemanticError& e) {
    throw SemanticError(loc, e.what());
  }
}

}  // namespace

Circuit parse_netlist(std::string_view text) {
  Circuit circuit;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    auto tokens = tokenize_line(line, line_no);
    if (nl == std::string_view::npos) {
      pos = text.size() + 1;
    } else {
      pos = nl + 1;
    }
    if (tokens.empty()) continue;

    LineParser p(std::move(tokens), line_no);
    const Token kw = p.next("statement keyword");
    if (kw.text == "source") {
      const Token port = p.next("port name");
      p.expect_done();
      with_loc(kw.loc, [&] { circuit.add_source(port.text); });
    } else if (kw.text == "bs") {
      const Token conv = p.next("convention (hadamard|symmetric)");
      BsConvention convention;
      if (conv.text == "hadamard") {
        convention = BsConvention::hadamard;
      } else if (conv.text == "symmetric") {
        convention = BsConvention::symmetric;
      } else {
        throw ParseError(conv.loc, "unknown beam splitter convention '" + conv.text + "'");
      }
      const double ratio = p.real("ratio");
      const Token a = p.next("input port A");
      const Token b = p.next("input port B");
      const Token arrow = p.next("'->'");
      if (arrow.text != "->") throw ParseError(arrow.loc, "expected '->'");
      const Token c = p.next("output port C");
      const Token d = p.next("output port D");
      p.expect_done();
      with_loc(kw.loc, [&] {
        circuit.add_element(BeamSplitter{a.text, b.text, c.text, d.text, ratio, convention});
      });
    } else if (kw.text == "phase") {
      const Token port = p.next("port");
      const double phi = p.real("phase (radians)");
      p.expect_done();
      with_loc(kw.loc, [&] { circuit.add_element(PhaseShift{port.text, phi}); });
    } else if (kw.text == "atten") {
      const Token port = p.next("port");
      const double t = p.real("transmission");
      p.expect_done();
      with_loc(kw.loc, [&] { circuit.add_element(Attenuator{port.text, t}); });
    } else if (kw.text == "shift") {
      const Token port = p.next("port");
      const long long delta = p.integer("OAM shift");
      if (std::llabs(delta) > 2LL * max_abs_oam()) {
        throw SemanticError(kw.loc, "OAM shift " + std::to_string(delta) +
                                        " is far beyond the label bound");
      }
      p.expect_done();
      with_loc(kw.loc, [&] {
        circuit.add_element(OamShift{port.text, static_cast<int>(delta)});
      });
    } else if (kw.text == "sorter") {
      const Token in = p.next("input port");
      const Token rej_kw = p.next("'reject'");
      if (rej_kw.text != "reject") throw ParseError(rej_kw.loc, "expected 'reject'");
      const Token rej = p.next("reject port");
      const Token open = p.next("'{'");
      if (open.text != "{") throw ParseError(open.loc, "expected '{'");
      std::map<Label, PathId> table;
      for (;;) {
        const Token t = p.next("label:port entry or '}'");
        if (t.text == "}") break;
        const std::size_t colon = t.text.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 >= t.text.size()) {
          throw ParseError(t.loc, "expected <label>:<port>, got '" + t.text + "'");
        }
        const auto label = Label::parse(t.text.substr(0, colon));
        if (!label) {
          throw ParseError(t.loc, "malformed sorter label '" + t.text.substr(0, colon) + "'");
        }
        const PathId out = t.text.substr(colon + 1);
        if (table.count(*label)) {
          throw SemanticError(t.loc, "duplicate sorter label '" + label->to_string() + "'");
        }
        table.emplace(*label, out);
      }
      p.expect_done();
      with_loc(kw.loc, [&] {
        circuit.add_element(Sorter{in.text, std::move(table), rej.text});
      });
    } else if (kw.text == "hwp") {
      const Token port = p.next("port");
      const Token which = p.next("diagonal (plus45|minus45)");
      Diagonal d;
      if (which.text == "plus45") {
        d = Diagonal::plus45;
      } else if (which.text == "minus45") {
        d = Diagonal::minus45;
      } else {
        throw ParseError(which.loc, "unknown diagonal '" + which.text + "'");
      }
      p.expect_done();
      with_loc(kw.loc, [&] { circuit.add_element(half_wave_plate(port.text, d)); });
    } else if (kw.text == "lunitary") {
      const Token port = p.next("port");
      const Label l0 = p.label("first label");
      const Label l1 = p.label("second label");
      double v[8];
      for (double& x : v) x = p.real("matrix entry");
      p.expect_done();
      const Mat2 u{Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5]),
                   Complex(v[6], v[7])};
      with_loc(kw.loc, [&] {
        circuit.add_element(LabelUnitary{port.text, l0, l1, u});
      });
    } else if (kw.text == "detect") {
      const Token name = p.next("detector name");
      const Token port = p.next("port");
      p.expect_done();
      with_loc(kw.loc, [&] { circuit.add_detector(name.text, port.text); });
    } else {
      throw ParseError(kw.loc, "unknown statement '" + kw.text + "'");
    }
  }
  return circuit;
}

namespace {

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string emit_netlist(const Circuit& circuit) {
  std::ostringstream out;
  std::vector<PathId> sources = circuit.sources();
  std::sort(sources.begin(), sources.end());
  for (const PathId& s : sources) out << "source " << s << "\n";
  for (const Element& e : circuit.elements()) {
    std::visit(
        [&](const auto& el) {
          using T = std::decay_t<decltype(el)>;
          if constexpr (std::is_same_v<T, BeamSplitter>) {
            out << "bs "
                << (el.convention == BsConvention::hadamard ? "hadamard" : "symmetric")
                << " " << fmt_real(el.ratio) << " " << el.in_a << " " << el.in_b
                << " -> " << el.out_c << " " << el.out_d << "\n";
          } else if constexpr (std::is_same_v<T, PhaseShift>) {
            out << "phase " << el.port << " " << fmt_real(el.phi) << "\n";
          } else if constexpr (std::is_same_v<T, Attenuator>) {
            out << "atten " << el.port << " " << fmt_real(el.t) << "\n";
          } else if constexpr (std::is_same_v<T, OamShift>) {
            out << "shift " << el.port << " " << el.delta << "\n";
          } else if constexpr (std::is_same_v<T, Sorter>) {
            out << "sorter " << el.in << " reject " << el.reject << " {";
            for (const auto& [label, port] : el.table) {
              out << " " << label.to_string() << ":" << port;
            }
            out << " }\n";
          } else {  // LabelUnitary
            out << "lunitary " << el.port << " " << el.l0.to_string() << " "
                << el.l1.to_string();
            for (const Complex& c : {el.u.m00, el.u.m01, el.u.m10, el.u.m11}) {
              out << " " << fmt_real(c.real()) << " " << fmt_real(c.imag());
            }
            out << "\n";
          }
        },
        e);
  }
  auto detectors = circuit.detectors();
  std::sort(detectors.begin(), detectors.end());
  for (const auto& [name, port] : detectors) {
    out << "detect " << name << " " << port << "\n";
  }
  return out.str();
}

}  // namespace oam
