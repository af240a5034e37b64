#include <catch_amalgamated.hpp>

#include <sstream>

#include "diagcalc/cli.hpp"

using namespace diagcalc;

namespace {

struct Run {
  int rc = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  for (auto& a : args)
    if (a.rfind("specs/", 0) == 0) a = std::string(DIAGCALC_SPECS) + a.substr(5);
  std::ostringstream out, err;
  int rc = run_cli(args, out, err);
  return {rc, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("solve reports the outcome and exit code", "[cli]") {
  Run heat = run({"solve", "specs/heat_path3.dc", "heat", "start"});
  CHECK(heat.rc == 0);
  CHECK(has(heat.out, "outcome: Unique"));
  CHECK(has(heat.out, "u(1,1) = 0.5"));

  Run free = run({"solve", "specs/heat_free.dc", "heat", "nothing"});
  CHECK(free.rc == 2);
  CHECK(has(free.out, "nullity: 3"));

  Run inf = run({"solve", "specs/inconsistent.dc", "twice", "one"});
  CHECK(inf.rc == 3);
  CHECK(has(inf.out, "outcome: Infeasible"));
}

TEST_CASE("bvp and push", "[cli]") {
  Run b = run({"bvp", "specs/dirichlet_p3.dc", "restrict", "g"});
  CHECK(b.rc == 0);
  CHECK(has(b.out, "u(1) = 0.5"));
  CHECK(has(b.out, "u(0) = 0"));
  CHECK(has(b.out, "u(2) = 1"));

  Run p = run({"push", "specs/dirichlet_p3.dc", "restrict", "harmonic"});
  CHECK(p.rc == 0);
  CHECK(has(p.out, "u_b(0) = 0"));
  CHECK(has(p.out, "u_b(2) = 1"));
  CHECK(run({"push", "specs/dirichlet_p3.dc", "restrict", "g"}).rc != 0);
}

TEST_CASE("check subcommand", "[cli]") {
  CHECK(run({"check", "specs/transport.dc"}).rc == 0);
  CHECK(run({"check", "specs/lie.dc", "onto"}).rc == 0);
  CHECK(run({"check", "specs/bad_naturality.dc"}).rc == 3);
  Run bad = run({"check", "specs/bad_type.dc"});
  CHECK(bad.rc == 3);
  CHECK(has(bad.err, "bad_type.dc:"));
  Run syn = run({"check", "specs/bad_syntax.dc"});
  CHECK(syn.rc == 1);
  CHECK(has(syn.err, "bad_syntax.dc:3: expected ':'"));
  CHECK(run({"check", "specs/does_not_exist.dc"}).rc == 1);
}

TEST_CASE("compose and equiv", "[cli]") {
  Run c = run({"compose", "specs/transport.dc", "transport", "fick", "cons", "--expect", "diff"});
  CHECK(c.rc == 0);
  CHECK(has(c.out, "composite: 5 objects, 5 arrows, 1 feet"));
  CHECK(has(c.out, "isomorphic to diff: yes"));
  CHECK(run({"compose", "specs/transport.dc", "transport", "fick"}).rc == 1);

  Run e = run({"equiv", "specs/diffusion_heat.dc", "dh"});
  CHECK(e.rc == 0);
  CHECK(has(e.out, "certificate InitialFunctor"));
  Run l = run({"equiv", "specs/lie.dc", "onto"});
  CHECK(l.rc == 0);
  CHECK(has(l.out, "certificate RelativelyInitial"));
  Run n = run({"equiv", "specs/lie_norule.dc", "onto"});
  CHECK(n.rc == 3);
  CHECK(has(n.out, "not proven"));
}

TEST_CASE("export and models", "[cli]") {
  Run dot = run({"export", "specs/dirichlet_p3.dc", "interior"});
  CHECK(dot.rc == 0);
  CHECK(dot.out.rfind("digraph \"interior\" {", 0) == 0);
  Run text = run({"--format", "text", "export", "specs/dirichlet_p3.dc", "interior"});
  CHECK(text.out.rfind("diagram interior linear", 0) == 0);
  Run u = run({"export", "specs/transport.dc", "transport"});
  CHECK(u.out.rfind("graph \"transport\"", 0) == 0);

  Run list = run({"models"});
  CHECK(list.rc == 0);
  CHECK(has(list.out, "diffusion-to-heat (morphism)"));
  Run emit = run({"models", "heat", "graph=path:2", "T=1", "--emit"});
  CHECK(emit.rc == 0);
  CHECK(has(emit.out, "diagram heat linear"));
  CHECK(run({"models", "heat", "graph=path:2"}).rc == 1);
}

TEST_CASE("usage errors", "[cli]") {
  CHECK(run({}).rc == 1);
  CHECK(run({"frobnicate"}).rc == 1);
  CHECK(run({"--format", "svg", "export", "specs/lie.dc", "tri"}).rc == 1);
  CHECK(run({"--help"}).rc == 0);
  CHECK(run({"solve", "specs/heat_path3.dc", "missing"}).rc == 1);
}
