#include "timewarp/extract.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace timewarp {

PointSet points_of(const std::string& var, const Prediagram& d, const SampleSet& delta) {
  const SampleArena& ar = delta.arena();
  PointSet ps{var, {}};
  for (SampleId s : delta.members()) {
    const SampleNode& n = ar.node(s);
    if (n.kind != SampleKind::App) continue;
    const BasicTerm& t = ar.term(n.term);
    if (t.kind() != BasicTerm::Kind::Var || t.name() != var) continue;
    ps.points.emplace_back(d.at(n.child), d.at(s));
  }
  std::sort(ps.points.begin(), ps.points.end());
  ps.points.erase(std::unique(ps.points.begin(), ps.points.end()), ps.points.end());
  return ps;
}

Warp build_warp(const PointSet& p, ExtNat at_omega) {
  auto reject = [&](const std::string& why) {
    throw std::invalid_argument("points of " + p.var + " " + why);
  };
  std::vector<Breakpoint> anchors;
  std::uint64_t last_in = 0;
  ExtNat last_out(0);
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    auto [in, out] = p.points[i];
    if (i > 0 && p.points[i - 1].first == in) reject("are not functional at " + in.to_string());
    if (out < last_out) reject("are not monotone at " + in.to_string());
    if (out > at_omega) reject("exceed the value at ω");
    if (in.is_omega()) {
      if (out != at_omega) reject("disagree with the value at ω");
      continue;
    }
    if (in.is_zero()) {
      if (!out.is_zero()) reject("do not fix 0");
      continue;
    }
    anchors.push_back(Breakpoint{in.value(), out, true});
    last_in = in.value();
    last_out = out;
  }
  if (at_omega == last_out) return Warp::from_breakpoints(anchors, Tail::constant(at_omega));
  if (at_omega.is_omega()) return Warp::from_breakpoints(anchors, Tail::unit_ramp());
  std::uint64_t gap = at_omega.value() - last_out.value();
  anchors.push_back(Breakpoint{ExtNat(last_in + gap).value(), at_omega, true});
  return Warp::from_breakpoints(anchors, Tail::constant(at_omega));
}

Valuation valuation_from_diagram(const Prediagram& d, const SampleSet& delta,
                                 const std::vector<std::string>& vars) {
  const SampleArena& ar = delta.arena();
  Valuation theta;
  for (const std::string& v : vars) theta[v] = Warp::identity();

  // f(ω) comes from x[last(x)], which saturation adds next to any x[α].
  for (SampleId s : delta.members()) {
    const SampleNode& n = ar.node(s);
    if (n.kind != SampleKind::App) continue;
    const BasicTerm& t = ar.term(n.term);
    if (t.kind() != BasicTerm::Kind::Var) continue;
    const SampleNode& c = ar.node(n.child);
    if (c.kind != SampleKind::Last || c.term != n.term) continue;
    theta[t.name()] = build_warp(points_of(t.name(), d, delta), d.at(s));
  }
  return theta;
}

bool verify(const Valuation& theta, ExtNat p, const std::vector<BasicTerm>& goals) {
  for (const BasicTerm& g : goals)
    if (!(interpret(g, theta)(p) < p)) return false;
  return true;
}

nlohmann::json to_json(const Counterexample& c) {
  nlohmann::json val = nlohmann::json::object();
  for (const auto& [name, w] : c.valuation) val[name] = to_json(w);
  nlohmann::json p = c.p.is_omega() ? nlohmann::json("omega") : nlohmann::json(c.p.value());
  return {{"p", p}, {"valuation", val}, {"verified", c.verified}};
}

std::string to_string(const Counterexample& c) {
  std::string out = "p = " + c.p.to_string();
  for (const auto& [name, w] : c.valuation) out += ", " + name + " = " + to_string(w);
  return out;
}

}  // namespace timewarp
