#include "atspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

namespace atspec {

namespace {

bool is_declared(const LinkageGraph& g, const std::string& label) {
  return std::find(g.states.begin(), g.states.end(), label) != g.states.end();
}

/// Check every graph invariant; throws InvalidGraph or UnknownState.
void validate(const LinkageGraph& g) {
  if (!std::isfinite(g.gamma) || g.gamma <= 0.0) {
    throw InvalidGraph("gamma must be a positive finite number");
  }
  std::set<std::string> seen;
  for (const auto& s : g.states) {
    if (s.empty()) {
      throw InvalidGraph("state labels must be nonempty");
    }
    if (!seen.insert(s).second) {
      throw InvalidGraph("duplicate state label '" + s + "'");
    }
  }
  if (!is_declared(g, g.excited)) {
    throw UnknownState("excited state '" + g.excited + "' is not declared");
  }
  if (!is_declared(g, g.vacuum_target)) {
    throw UnknownState("vacuum target '" + g.vacuum_target +
                       "' is not declared");
  }
  if (g.excited == g.vacuum_target) {
    throw InvalidGraph("excited state and vacuum target must be distinct");
  }

  int phase_bearing = 0;
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& c : g.couplings) {
    if (!is_declared(g, c.from)) {
      throw UnknownState("coupling references undeclared state '" + c.from +
                         "'");
    }
    if (!is_declared(g, c.to)) {
      throw UnknownState("coupling references undeclared state '" + c.to +
                         "'");
    }
    if (c.from == c.to) {
      throw InvalidGraph("self-coupling on state '" + c.from + "'");
    }
    if (c.from == g.vacuum_target || c.to == g.vacuum_target) {
      throw InvalidGraph("vacuum target must not appear in a coupling");
    }
    if (!std::isfinite(c.rabi) || c.rabi < 0.0) {
      throw InvalidGraph("coupling Rabi magnitude must be finite and nonnegative");
    }
    if (!std::isfinite(c.phase)) {
      throw InvalidGraph("coupling phase must be finite");
    }
    auto key = c.from < c.to ? std::make_pair(c.from, c.to)
                             : std::make_pair(c.to, c.from);
    if (!pairs.insert(key).second) {
      throw InvalidGraph("duplicate coupling between '" + key.first +
                         "' and '" + key.second + "'");
    }
    if (c.phase != 0.0) {
      ++phase_bearing;
    }
  }
  if (phase_bearing > 1) {
    throw InvalidGraph("at most one coupling may carry a nonzero phase");
  }

  if (!g.initial.empty()) {
    if (!is_declared(g, g.initial)) {
      throw UnknownState("initial state '" + g.initial + "' is not declared");
    }
    if (g.initial == g.vacuum_target) {
      throw InvalidGraph("initial state must be a driven state");
    }
  }
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::ClosedForm:
      return "closed_form";
    case Method::Dressed:
      return "dressed";
    case Method::LinearSolve:
      return "linear_solve";
    case Method::TimeDomain:
      return "time_domain";
  }
  return "unknown";
}

std::string to_string(PresetTopology topology) {
  switch (topology) {
    case PresetTopology::Doublet:
      return "doublet";
    case PresetTopology::Triplet:
      return "triplet";
    case PresetTopology::Quartuplet:
      return "quartuplet";
    case PresetTopology::Quintuplet:
      return "quintuplet";
    case PresetTopology::Sextuplet:
      return "sextuplet";
  }
  return "unknown";
}

CoupledSystem compile(const LinkageGraph& graph) {
  validate(graph);

  CoupledSystem sys;
  sys.gamma = graph.gamma;
  sys.basis.push_back(graph.excited);
  for (const auto& s : graph.states) {
    if (s != graph.excited && s != graph.vacuum_target) {
      sys.basis.push_back(s);
    }
  }

  const std::size_t n = sys.basis.size();
  sys.matrix = ComplexMatrix(n);
  auto index = [&](const std::string& label) {
    return static_cast<std::size_t>(
        std::find(sys.basis.begin(), sys.basis.end(), label) -
        sys.basis.begin());
  };

  for (const auto& c : graph.couplings) {
    const std::size_t i = index(c.from);
    const std::size_t j = index(c.to);
    const cplx drive(0.0, -c.rabi);
    sys.matrix(i, j) += drive * std::exp(cplx(0.0, c.phase));
    sys.matrix(j, i) += drive * std::exp(cplx(0.0, -c.phase));
  }
  sys.matrix(0, 0) -= cplx(graph.gamma / 2.0, 0.0);

  sys.x0.assign(n, cplx(0.0, 0.0));
  const std::string& start = graph.initial.empty() ? graph.excited
                                                   : graph.initial;
  sys.x0[index(start)] = cplx(1.0, 0.0);
  return sys;
}

std::optional<PresetMatch> match_topology(const LinkageGraph& graph) {
  validate(graph);
  constexpr double half_pi = std::numbers::pi / 2.0;

  // Couplings never touch the vacuum target, so the coupling graph lives
  // entirely on the driven states.
  std::size_t driven_count = 0;
  for (const auto& s : graph.states) {
    if (s != graph.vacuum_target) {
      ++driven_count;
    }
  }

  const auto& cs = graph.couplings;
  auto edges_at = [&](const std::string& v) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (cs[k].from == v || cs[k].to == v) {
        out.push_back(k);
      }
    }
    return out;
  };
  auto degree = [&](const std::string& v) { return edges_at(v).size(); };
  auto other_end = [&](std::size_t k, const std::string& v) {
    return cs[k].from == v ? cs[k].to : cs[k].from;
  };
  auto edge_between = [&](const std::string& a,
                          const std::string& b) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if ((cs[k].from == a && cs[k].to == b) ||
          (cs[k].from == b && cs[k].to == a)) {
        return k;
      }
    }
    return std::nullopt;
  };

  // Sum of stored phases along a closed walk, counted positively when the
  // walk crosses a coupling in its stored from->to direction.
  auto loop_phase = [&](const std::vector<std::string>& walk) {
    double phi = 0.0;
    for (std::size_t k = 0; k < walk.size(); ++k) {
      const std::string& u = walk[k];
      const std::string& v = walk[(k + 1) % walk.size()];
      const std::size_t edge = *edge_between(u, v);
      phi += cs[edge].from == u ? cs[edge].phase : -cs[edge].phase;
    }
    return phi;
  };

  const std::string& e = graph.excited;
  const auto e_edges = edges_at(e);

  // The loop convention anchors on the phase-bearing excited-state coupling
  // when there is one, otherwise on the first declared one. Relabeling the
  // anchor only flips the walk orientation, which the closed forms cannot
  // see (their phase dependence is even under that flip).
  auto anchor = [&]() -> std::size_t {
    for (std::size_t k : e_edges) {
      if (cs[k].phase != 0.0) {
        return k;
      }
    }
    return e_edges.front();
  };

  const std::size_t nd = driven_count;
  const std::size_t m = cs.size();

  if (nd == 2 && m == 1 && e_edges.size() == 1) {
    // Single driven transition. No loop exists, so a stored phase is pure
    // gauge and the reported loop phase is zero.
    return PresetMatch{PresetTopology::Doublet, {cs[0].rabi}, 0.0};
  }

  if (nd == 3 && m == 3 && e_edges.size() == 2) {
    const std::size_t o1 = anchor();
    const std::size_t m2 = e_edges[0] == o1 ? e_edges[1] : e_edges[0];
    const std::string a = other_end(o1, e);
    const std::string b = other_end(m2, e);
    const auto m1 = edge_between(a, b);
    if (!m1) {
      return std::nullopt;
    }
    const double phi = loop_phase({e, a, b});
    return PresetMatch{PresetTopology::Triplet,
                       {cs[o1].rabi, cs[*m1].rabi, cs[m2].rabi},
                       phi - half_pi};
  }

  if (nd == 4 && m == 4 && e_edges.size() == 2) {
    const std::size_t o1 = anchor();
    const std::size_t o2 = e_edges[0] == o1 ? e_edges[1] : e_edges[0];
    const std::string a = other_end(o1, e);
    const std::string b = other_end(o2, e);
    std::string c;
    for (const auto& s : graph.states) {
      if (s != graph.vacuum_target && s != e && s != a && s != b) {
        c = s;
      }
    }
    const auto m1 = edge_between(a, c);
    const auto m2 = edge_between(c, b);
    if (!m1 || !m2) {
      return std::nullopt;
    }
    const double phi = loop_phase({e, a, c, b});
    return PresetMatch{
        PresetTopology::Quartuplet,
        {cs[o1].rabi, cs[o2].rabi, cs[*m1].rabi, cs[*m2].rabi},
        phi - half_pi};
  }

  if (nd == 5 && m == 5 && e_edges.size() == 2) {
    // One pendant state hangs off the loop vertex opposite the free arm.
    std::vector<std::string> pendants;
    for (const auto& s : graph.states) {
      if (s != graph.vacuum_target && degree(s) == 1) {
        pendants.push_back(s);
      }
    }
    if (pendants.size() != 1 || pendants[0] == e) {
      return std::nullopt;
    }
    const std::string p = pendants[0];
    const std::size_t m3 = edges_at(p)[0];
    const std::string q = other_end(m3, p);
    if (q == e || degree(q) != 3) {
      return std::nullopt;
    }
    const auto o2 = edge_between(e, q);
    if (!o2) {
      return std::nullopt;
    }
    const std::size_t o1 = e_edges[0] == *o2 ? e_edges[1] : e_edges[0];
    const std::string g1 = other_end(o1, e);
    std::string g3;
    for (std::size_t k : edges_at(q)) {
      const std::string w = other_end(k, q);
      if (w != e && w != p) {
        g3 = w;
      }
    }
    const auto m1 = edge_between(g1, g3);
    const auto m2 = edge_between(g3, q);
    if (!m1 || !m2) {
      return std::nullopt;
    }
    const double phi = loop_phase({e, g1, g3, q});
    return PresetMatch{
        PresetTopology::Quintuplet,
        {cs[o1].rabi, cs[*o2].rabi, cs[*m1].rabi, cs[*m2].rabi, cs[m3].rabi},
        phi};
  }

  if (nd == 7 && m == 7 && e_edges.size() == 2) {
    // Four-cycle through the excited state plus a three-state chain off the
    // shared ground hub.
    const std::size_t o1 = anchor();
    const std::size_t o2 = e_edges[0] == o1 ? e_edges[1] : e_edges[0];
    const std::string a = other_end(o1, e);
    const std::string b = other_end(o2, e);
    if (degree(a) != 2 || degree(b) != 2) {
      return std::nullopt;
    }
    const auto ha = edge_between(a, b);
    if (ha) {
      return std::nullopt;  // would be a triangle, not the four-cycle
    }
    std::string h;
    for (std::size_t k : edges_at(a)) {
      const std::string w = other_end(k, a);
      if (w != e) {
        h = w;
      }
    }
    const auto m1 = edge_between(a, h);
    const auto m2 = edge_between(h, b);
    if (!m1 || !m2 || degree(h) != 3) {
      return std::nullopt;
    }
    std::string c1;
    for (std::size_t k : edges_at(h)) {
      const std::string w = other_end(k, h);
      if (w != a && w != b) {
        c1 = w;
      }
    }
    if (c1.empty() || degree(c1) != 2) {
      return std::nullopt;
    }
    std::string c2;
    for (std::size_t k : edges_at(c1)) {
      const std::string w = other_end(k, c1);
      if (w != h) {
        c2 = w;
      }
    }
    if (degree(c2) != 2) {
      return std::nullopt;
    }
    std::string c3;
    for (std::size_t k : edges_at(c2)) {
      const std::string w = other_end(k, c2);
      if (w != c1) {
        c3 = w;
      }
    }
    if (degree(c3) != 1) {
      return std::nullopt;
    }
    const auto b1 = edge_between(h, c1);
    const auto b2 = edge_between(c1, c2);
    const auto b3 = edge_between(c2, c3);
    const double phi = loop_phase({e, a, h, b});
    return PresetMatch{PresetTopology::Sextuplet,
                       {cs[o1].rabi, cs[o2].rabi, cs[*m1].rabi, cs[*m2].rabi,
                        cs[*b1].rabi, cs[*b2].rabi, cs[*b3].rabi},
                       phi};
  }

  return std::nullopt;
}

double effective_rabi(const LinkageGraph& graph) {
  const auto match = match_topology(graph);
  if (match && match->topology == PresetTopology::Quartuplet) {
    const auto& r = match->rabi;
    return std::sqrt(r[1] * r[1] + r[2] * r[2] + r[3] * r[3]);
  }
  if (match && match->topology == PresetTopology::Quintuplet) {
    const auto& r = match->rabi;
    return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3] +
                     r[4] * r[4]);
  }
  throw UnsupportedTopology(
      "effective Rabi magnitude is defined only for quartuplet and "
      "quintuplet linkages");
}

}  // namespace atspec
