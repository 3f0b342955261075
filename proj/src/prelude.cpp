#include "amlab/prelude.hpp"

namespace amlab {

TermPtr church(unsigned n) {
  TermPtr body = var("x");
  for (unsigned i = 0; i < n; ++i) body = app(var("f"), body);
  return lam("f", lam("x", std::move(body)));
}

const std::map<std::string, TermPtr>& prelude() {
  static const std::map<std::string, TermPtr> table = [] {
    std::map<std::string, TermPtr> m;
    m["I"] = lam("x", var("x"));
    m["K"] = lam("x", lam("y", var("x")));
    m["S"] = lam("x", lam("y", lam("z", app(app(var("x"), var("z")),
                                            app(var("y"), var("z"))))));
    TermPtr omega = lam("x", app(var("x"), var("x")));
    m["omega"] = omega;
    m["Omega"] = app(omega, omega);
    m["pair"] = lam("x", lam("y", lam("f", app(app(var("f"), var("x")),
                                               var("y")))));
    for (unsigned n = 0; n <= 9; ++n)
      m["c" + std::to_string(n)] = church(n);
    return m;
  }();
  return table;
}

TermPtr prelude_lookup(const std::string& name) {
  const auto& table = prelude();
  auto it = table.find(name);
  return it == table.end() ? nullptr : it->second;
}

}  // namespace amlab
