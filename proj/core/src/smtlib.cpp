#include <sstream>
#include <unordered_set>

#include "timewarp/solve.hpp"

namespace timewarp {

namespace {

// Quoted symbols may hold any printable ASCII except | and \.
std::string ascii_symbol(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (s.compare(i, 2, "κ") == 0) {
      out += 'k';
      ++i;
    } else if (c >= 0x80) {
      // skip continuation bytes of other multibyte characters
      while (i + 1 < s.size() && (static_cast<unsigned char>(s[i + 1]) & 0xC0) == 0x80) ++i;
      out += '_';
    } else if (c == '|' || c == '\\' || c < 0x20) {
      out += '_';
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> smt_names(const SampleArena& arena) {
  std::vector<std::string> names;
  names.reserve(arena.size());
  std::unordered_set<std::string> used{"0"};
  for (SampleId i = 0; i < arena.size(); ++i) {
    std::string base = ascii_symbol(arena.print(i));
    std::string name = base;
    for (int k = 1; used.count(name); ++k) name = base + "#" + std::to_string(k);
    used.insert(name);
    names.push_back(std::move(name));
  }
  return names;
}

std::string emit_smtlib(const SigmaFormula& phi, const std::vector<std::string>& names) {
  std::vector<bool> mentioned(names.size(), false);
  auto ref = [&](std::uint32_t x) -> std::string {
    if (x == kZeroVar) return "0";
    mentioned.at(x) = true;
    return "|" + names[x] + "|";
  };

  std::ostringstream body;
  auto emit = [&](auto& self, const SigmaFormula& f) -> void {
    using K = SigmaFormula::Kind;
    auto nary = [&](const char* op) {
      if (f.kids().empty()) {
        body << (f.kind() == K::And ? "true" : "false");
        return;
      }
      body << '(' << op;
      for (const SigmaFormula& k : f.kids()) {
        body << ' ';
        self(self, k);
      }
      body << ')';
    };
    switch (f.kind()) {
      case K::True: body << "true"; return;
      case K::False: body << "false"; return;
      case K::Not:
        body << "(not ";
        self(self, f.kids()[0]);
        body << ')';
        return;
      case K::And: nary("and"); return;
      case K::Or: nary("or"); return;
      case K::Implies: nary("=>"); return;
      case K::Iff: nary("="); return;
      case K::Atom: break;
    }
    const SigmaAtom& a = f.atom();
    switch (a.kind) {
      case SigmaAtom::Kind::Leq: body << "(<= " << ref(a.x) << ' ' << ref(a.y) << ')'; return;
      case SigmaAtom::Kind::Succ:
        body << "(= " << ref(a.y) << " (+ " << ref(a.x) << " 1))";
        return;
      case SigmaAtom::Kind::IsZero: body << "(= " << ref(a.x) << " 0)"; return;
      case SigmaAtom::Kind::Eq: body << "(= " << ref(a.x) << ' ' << ref(a.y) << ')'; return;
    }
  };
  emit(emit, phi);

  std::ostringstream out;
  out << "(set-logic QF_LIA)\n";
  for (std::size_t i = 0; i < names.size(); ++i)
    if (mentioned[i]) out << "(declare-const |" << names[i] << "| Int)\n";
  for (std::size_t i = 0; i < names.size(); ++i)
    if (mentioned[i]) out << "(assert (>= |" << names[i] << "| 0))\n";
  out << "(assert " << body.str() << ")\n";
  out << "(check-sat)\n(get-model)\n";
  return out.str();
}

}  // namespace timewarp
