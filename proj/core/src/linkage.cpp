#include "atspec/linkage.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

namespace atspec {

namespace {

struct Token {
  std::string text;
  int column = 1;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const unsigned char ch = static_cast<unsigned char>(line[i]);
    if (line[i] == '#') {
      break;
    }
    if (std::isspace(ch)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != '#' &&
           !std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    tokens.push_back({line.substr(start, i - start),
                      static_cast<int>(start + 1)});
  }
  return tokens;
}

bool valid_label(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) {
    return false;
  }
  for (const char ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') {
      return false;
    }
  }
  return true;
}

const std::string& expect_label(const Token& t, int line) {
  if (!valid_label(t.text)) {
    throw SyntaxError("invalid label '" + t.text + "'", line, t.column);
  }
  return t.text;
}

double expect_float(const Token& t, int line) {
  double value = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last) {
    throw SyntaxError("expected a number, got '" + t.text + "'", line,
                      t.column);
  }
  return value;
}

}  // namespace

std::string format_shortest(double value) {
  std::array<char, 32> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

LinkageGraph parse(const std::string& source) {
  LinkageGraph g;
  bool saw_gamma = false;
  bool saw_init = false;
  bool saw_excited = false;
  bool saw_vacuum = false;
  bool saw_phase_bearing = false;

  std::vector<std::string> lines;
  {
    std::string current;
    for (const char ch : source) {
      if (ch == '\n') {
        lines.push_back(current);
        current.clear();
      } else {
        current += ch;
      }
    }
    lines.push_back(current);
  }

  auto declared = [&](const std::string& label) {
    return std::find(g.states.begin(), g.states.end(), label) !=
           g.states.end();
  };

  for (int ln = 1; ln <= static_cast<int>(lines.size()); ++ln) {
    std::string line = lines[ln - 1];
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    const auto toks = tokenize(line);
    if (toks.empty()) {
      continue;
    }
    const std::string& kw = toks[0].text;

    if (kw == "gamma") {
      if (toks.size() != 2) {
        throw SyntaxError("'gamma' expects exactly one value", ln,
                          toks.size() > 2 ? toks[2].column : toks[0].column);
      }
      const double value = expect_float(toks[1], ln);
      if (saw_gamma) {
        throw SemanticError("duplicate gamma statement", ln, toks[0].column);
      }
      if (!std::isfinite(value) || value <= 0.0) {
        throw SemanticError("gamma must be a positive finite number", ln,
                            toks[1].column);
      }
      g.gamma = value;
      saw_gamma = true;

    } else if (kw == "state") {
      if (toks.size() != 2 && toks.size() != 3) {
        throw SyntaxError("'state' expects a label and an optional role", ln,
                          toks.size() > 3 ? toks[3].column : toks[0].column);
      }
      const std::string& label = expect_label(toks[1], ln);
      if (declared(label)) {
        throw SemanticError("duplicate state label '" + label + "'", ln,
                            toks[1].column);
      }
      if (toks.size() == 3) {
        if (toks[2].text == "excited") {
          if (saw_excited) {
            throw SemanticError("excited state already declared", ln,
                                toks[2].column);
          }
          g.excited = label;
          saw_excited = true;
        } else if (toks[2].text == "vacuum") {
          if (saw_vacuum) {
            throw SemanticError("vacuum target already declared", ln,
                                toks[2].column);
          }
          g.vacuum_target = label;
          saw_vacuum = true;
        } else {
          throw SyntaxError("unknown state role '" + toks[2].text + "'", ln,
                            toks[2].column);
        }
      }
      g.states.push_back(label);

    } else if (kw == "couple") {
      if (toks.size() != 5 && toks.size() != 7) {
        throw SyntaxError(
            "'couple' expects: couple <a> <b> rabi <value> [phase <value>]",
            ln, toks.size() > 7 ? toks[7].column : toks[0].column);
      }
      const std::string& a = expect_label(toks[1], ln);
      const std::string& b = expect_label(toks[2], ln);
      if (toks[3].text != "rabi") {
        throw SyntaxError("expected keyword 'rabi', got '" + toks[3].text +
                              "'",
                          ln, toks[3].column);
      }
      const double rabi = expect_float(toks[4], ln);
      double phase = 0.0;
      if (toks.size() == 7) {
        if (toks[5].text != "phase") {
          throw SyntaxError("expected keyword 'phase', got '" + toks[5].text +
                                "'",
                            ln, toks[5].column);
        }
        phase = expect_float(toks[6], ln);
      }
      if (!declared(a)) {
        throw SemanticError("coupling references undeclared state '" + a +
                                "'",
                            ln, toks[1].column);
      }
      if (!declared(b)) {
        throw SemanticError("coupling references undeclared state '" + b +
                                "'",
                            ln, toks[2].column);
      }
      if (a == b) {
        throw SemanticError("self-coupling on state '" + a + "'", ln,
                            toks[2].column);
      }
      if (saw_vacuum && (a == g.vacuum_target || b == g.vacuum_target)) {
        throw SemanticError("vacuum target must not appear in a coupling", ln,
                            toks[1].column);
      }
      if (!std::isfinite(rabi) || rabi < 0.0) {
        throw SemanticError("coupling magnitude must be finite and nonnegative",
                            ln, toks[4].column);
      }
      if (!std::isfinite(phase)) {
        throw SemanticError("coupling phase must be finite", ln,
                            toks[6].column);
      }
      for (const auto& c : g.couplings) {
        if ((c.from == a && c.to == b) || (c.from == b && c.to == a)) {
          throw SemanticError("duplicate coupling between '" + a + "' and '" +
                                  b + "'",
                              ln, toks[1].column);
        }
      }
      if (phase != 0.0) {
        if (saw_phase_bearing) {
          throw SemanticError("at most one coupling may carry a nonzero phase",
                              ln, toks[6].column);
        }
        saw_phase_bearing = true;
      }
      g.couplings.push_back({a, b, rabi, phase});

    } else if (kw == "init") {
      if (toks.size() != 2) {
        throw SyntaxError("'init' expects exactly one label", ln,
                          toks.size() > 2 ? toks[2].column : toks[0].column);
      }
      const std::string& label = expect_label(toks[1], ln);
      if (saw_init) {
        throw SemanticError("duplicate init statement", ln, toks[0].column);
      }
      if (!declared(label)) {
        throw SemanticError("init references undeclared state '" + label +
                                "'",
                            ln, toks[1].column);
      }
      if (saw_vacuum && label == g.vacuum_target) {
        throw SemanticError("initial state must be a driven state", ln,
                            toks[1].column);
      }
      g.initial = label;
      saw_init = true;

    } else {
      throw SyntaxError("unknown statement '" + kw + "'", ln, toks[0].column);
    }
  }

  const int last_line = std::max<int>(1, static_cast<int>(lines.size()));
  if (!saw_excited) {
    throw SemanticError("no excited state declared", last_line, 1);
  }
  if (!saw_vacuum) {
    throw SemanticError("no vacuum target declared", last_line, 1);
  }
  return g;
}

std::string serialize(const LinkageGraph& graph) {
  std::string out;
  out += "gamma " + format_shortest(graph.gamma) + "\n";
  for (const auto& s : graph.states) {
    out += "state " + s;
    if (s == graph.excited) {
      out += " excited";
    } else if (s == graph.vacuum_target) {
      out += " vacuum";
    }
    out += "\n";
  }
  for (const auto& c : graph.couplings) {
    out += "couple " + c.from + " " + c.to + " rabi " + format_shortest(c.rabi);
    if (c.phase != 0.0) {
      out += " phase " + format_shortest(c.phase);
    }
    out += "\n";
  }
  if (!graph.initial.empty()) {
    out += "init " + graph.initial + "\n";
  }
  return out;
}

LinkageGraph preset(const std::string& name,
                    const std::vector<double>& rabi_values, double phase) {
  constexpr double half_pi = std::numbers::pi / 2.0;

  std::size_t arity = 0;
  std::size_t grounds = 0;
  if (name == "doublet") {
    arity = 1;
    grounds = 1;
  } else if (name == "triplet") {
    arity = 3;
    grounds = 2;
  } else if (name == "quartuplet") {
    arity = 4;
    grounds = 3;
  } else if (name == "quintuplet") {
    arity = 5;
    grounds = 4;
  } else if (name == "sextuplet") {
    arity = 7;
    grounds = 6;
  } else {
    throw UnknownPreset("unknown preset '" + name + "'");
  }
  if (rabi_values.size() != arity) {
    throw ArityMismatch("preset '" + name + "' expects " +
                        std::to_string(arity) + " Rabi magnitudes, got " +
                        std::to_string(rabi_values.size()));
  }

  LinkageGraph g;
  g.excited = "e";
  g.vacuum_target = "g";
  g.states.push_back("e");
  for (std::size_t i = 1; i <= grounds; ++i) {
    g.states.push_back("g" + std::to_string(i));
  }
  g.states.push_back("g");

  const auto& r = rabi_values;
  if (name == "doublet") {
    g.couplings = {{"e", "g1", r[0], phase}};
  } else if (name == "triplet") {
    g.couplings = {{"e", "g1", r[0], phase + half_pi},
                   {"g1", "g2", r[1], 0.0},
                   {"e", "g2", r[2], 0.0}};
  } else if (name == "quartuplet") {
    g.couplings = {{"e", "g1", r[0], phase + half_pi},
                   {"e", "g2", r[1], 0.0},
                   {"g1", "g3", r[2], 0.0},
                   {"g3", "g2", r[3], 0.0}};
  } else if (name == "quintuplet") {
    g.couplings = {{"e", "g1", r[0], phase},
                   {"e", "g2", r[1], 0.0},
                   {"g1", "g3", r[2], 0.0},
                   {"g3", "g2", r[3], 0.0},
                   {"g2", "g4", r[4], 0.0}};
  } else {
    g.couplings = {{"e", "g1", r[0], phase},
                   {"e", "g2", r[1], 0.0},
                   {"g1", "g3", r[2], 0.0},
                   {"g3", "g2", r[3], 0.0},
                   {"g3", "g4", r[4], 0.0},
                   {"g4", "g5", r[5], 0.0},
                   {"g5", "g6", r[6], 0.0}};
  }
  return g;
}

}  // namespace atspec
