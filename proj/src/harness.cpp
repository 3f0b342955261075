#include "amlab/harness.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "amlab/errors.hpp"
#include "amlab/machines/cek.hpp"
#include "amlab/machines/ghost_kn.hpp"
#include "amlab/machines/kn.hpp"
#include "amlab/machines/krivine.hpp"
#include "amlab/machines/mam.hpp"
#include "amlab/machines/scam.hpp"
#include "amlab/machines/secd.hpp"
#include "amlab/prelude.hpp"

namespace amlab::harness {

using nlohmann::json;
namespace mach = amlab::machines;

RenderStyle style_from_name(const std::string& name) {
  if (name == "plain") return RenderStyle::Plain;
  if (name == "refocus") return RenderStyle::Refocus;
  if (name == "json") return RenderStyle::Json;
  throw std::invalid_argument("unknown trace style: " + name);
}

MachineId machine_from_name(const std::string& name) {
  if (name == "add-l") return MachineId::AddL;
  if (name == "add-r") return MachineId::AddR;
  if (name == "krivine") return MachineId::Krivine;
  if (name == "cek") return MachineId::Cek;
  if (name == "secd") return MachineId::Secd;
  if (name == "kn") return MachineId::Kn;
  if (name == "ghost-kn") return MachineId::GhostKn;
  if (name == "mam") return MachineId::Mam;
  if (name == "scam") return MachineId::Scam;
  throw std::invalid_argument("unknown machine: " + name);
}

std::string machine_name(MachineId m) {
  switch (m) {
    case MachineId::AddL: return "add-l";
    case MachineId::AddR: return "add-r";
    case MachineId::Krivine: return "krivine";
    case MachineId::Cek: return "cek";
    case MachineId::Secd: return "secd";
    case MachineId::Kn: return "kn";
    case MachineId::GhostKn: return "ghost-kn";
    case MachineId::Mam: return "mam";
    case MachineId::Scam: return "scam";
  }
  return "?";
}

bool is_additive_machine(MachineId m) {
  return m == MachineId::AddL || m == MachineId::AddR;
}

namespace {

// Strong de Bruijn machines take open terms by closing over the free
// variables; the wrapper binders are stripped from the read-back.
struct ClosedInput {
  NamelessPtr nameless;
  std::vector<std::string> free_order;  // outermost wrapper first
};

ClosedInput close_for_indices(const TermPtr& t) {
  auto fv = free_vars(t);
  std::vector<std::string> order(fv.begin(), fv.end());
  TermPtr wrapped = t;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    wrapped = lam(*it, wrapped);
  return ClosedInput{to_indices(wrapped), order};
}

TermPtr strip_wrappers(const NamelessPtr& nf,
                       const std::vector<std::string>& free_order) {
  TermPtr named = from_indices(nf);
  FreshSupply fresh = fresh_for({named});
  for (const auto& name : free_order) {
    const auto& l = named->lam();
    named = subst_avoiding(l.body, l.binder, var(name), fresh);
  }
  return named;
}

template <typename Run, typename Show>
void fill_steps(RunOutcome& out, const Run& run, Show&& show_config) {
  out.initial_config = show_config(run.trace.initial);
  for (const auto& step : run.trace.steps)
    out.steps.emplace_back(step.rule, show_config(step.config));
}

}  // namespace

RunOutcome run_machine_on(MachineId m, const std::string& input,
                          std::uint64_t fuel, bool record_trace) {
  RunOutcome out;
  out.machine = m;
  if (is_additive_machine(m)) {
    auto e = additive::parse_additive(input);
    out.input_text = additive::print(e);
    auto order = m == MachineId::AddL ? additive::EvalOrder::Left
                                      : additive::EvalOrder::Right;
    auto run = additive::run_machine(order, e);
    out.status = RunStatus::Halted;
    out.result = run.result.str();
    out.has_result = true;
    out.stats = run.stats;
    fill_steps(out, run, [order](const additive::Config& k) {
      return additive::show_config(order, k);
    });
    out.additive_run = std::move(run);
    return out;
  }

  TermPtr t = parse(input);
  out.input_text = print(t);
  switch (m) {
    case MachineId::Krivine: {
      auto run = mach::run_krivine(to_indices(t), fuel, record_trace);
      out.status = run.status;
      out.stats = run.stats;
      fill_steps(out, run,
                 [](const mach::KrivineConfig& k) { return mach::show(k); });
      if (run.status == RunStatus::Halted) {
        out.result = mach::show(run.final);
        out.has_result = true;
        out.readback = from_indices(mach::krivine_readback(run.final.focus));
      }
      return out;
    }
    case MachineId::Cek: {
      if (!is_closed(t)) {
        auto fv = free_vars(t);
        throw OpenTermError(std::vector<std::string>(fv.begin(), fv.end()));
      }
      auto run = mach::run_cek(t, fuel, record_trace);
      out.status = run.status;
      out.stats = run.stats;
      fill_steps(out, run,
                 [](const mach::CekConfig& k) { return mach::show(k); });
      if (run.status == RunStatus::Halted) {
        out.result = mach::show(run.final);
        out.has_result = true;
        out.readback = mach::cek_readback(run.final.value);
      }
      return out;
    }
    case MachineId::Secd: {
      if (!is_closed(t)) {
        auto fv = free_vars(t);
        throw OpenTermError(std::vector<std::string>(fv.begin(), fv.end()));
      }
      auto run = mach::run_secd(t, fuel, record_trace);
      out.status = run.status;
      out.stats = run.stats;
      fill_steps(out, run,
                 [](const mach::SecdConfig& k) { return mach::show(k); });
      if (run.status == RunStatus::Halted) {
        out.result = mach::show(run.final);
        out.has_result = true;
        out.readback = mach::secd_readback(run.final.stack.head());
      }
      return out;
    }
    case MachineId::Kn: {
      auto closed = close_for_indices(t);
      auto run = mach::run_kn(closed.nameless, fuel, record_trace);
      out.status = run.status;
      out.stats = run.stats;
      fill_steps(out, run,
                 [](const mach::KnConfig& k) { return mach::show(k); });
      if (run.status == RunStatus::Halted) {
        out.result = print(run.final.term);
        out.has_result = true;
        out.readback = strip_wrappers(run.final.term, closed.free_order);
      }
      return out;
    }
    case MachineId::GhostKn: {
      auto closed = close_for_indices(t);
      auto run = mach::run_ghost(closed.nameless, fuel, record_trace);
      out.status = run.status;
      out.stats = run.stats;
      fill_steps(out, run,
                 [](const mach::GhostConfig& k) { return mach::show(k); });
      if (run.status == RunStatus::Halted) {
        NamelessPtr erased = mach::erase(run.final.normal);
        out.result = print(erased);
        out.has_result = true;
        out.readback = strip_wrappers(erased, closed.free_order);
      }
      return out;
    }
    case MachineId::Mam: {
      auto run = mach::run_mam(t, fuel, record_trace);
      out.status = run.status;
      out.stats = run.stats;
      fill_steps(out, run,
                 [](const mach::MamConfig& k) { return mach::show(k); });
      if (run.status == RunStatus::Halted) {
        out.result = print(run.final.focus) + "  with store size " +
                     std::to_string(run.final.store.size());
        out.has_result = true;
        out.readback = mach::mam_unfold(run.final.focus, run.final.store);
      }
      return out;
    }
    case MachineId::Scam: {
      auto run = mach::run_scam(t, fuel, record_trace);
      out.status = run.status;
      out.stats = run.stats;
      fill_steps(out, run,
                 [](const mach::ScamConfig& k) { return mach::show(k); });
      if (run.status == RunStatus::Halted) {
        out.result = mach::show(run.final.focus);
        out.has_result = true;
        out.readback = mach::readback(run.final.focus);
      }
      return out;
    }
    default:
      throw std::logic_error("unhandled machine");
  }
}

namespace {

std::string refocus_expr(const additive::ExprPtr& e, bool parens) {
  if (e->is_const()) return "⌈" + e->cst().n.str() + "⌉";
  std::string s = refocus_expr(e->plus().left, true) + " ⊕ " +
                  refocus_expr(e->plus().right, true);
  return parens ? "(" + s + ")" : s;
}

// The hole inherits the parenthesization of its position, so stripping
// the focus brackets from a rendered row leaves exactly the rendering of
// the recomposed expression.
std::string refocus_ctx(const additive::ContextPtr& ctx,
                        const std::function<std::string(bool)>& inner,
                        bool parens) {
  if (ctx->is_hole()) return inner(parens);
  std::string s;
  if (ctx->is_plus_l()) {
    s = refocus_ctx(ctx->plus_l().ctx, inner, true) + " ⊕ " +
        refocus_expr(ctx->plus_l().right, true);
  } else {
    s = refocus_expr(ctx->plus_r().left, true) + " ⊕ " +
        refocus_ctx(ctx->plus_r().ctx, inner, true);
  }
  return parens ? "(" + s + ")" : s;
}

std::string refocus_config(additive::EvalOrder order,
                           const additive::Config& k) {
  auto decomposition = additive::decode(order, k);
  std::string tag = k.mode == additive::Mode::Down ? "∇" : "Δ";
  auto focus = [&](bool parens) {
    return "⟨" + refocus_expr(decomposition.focus, parens) + "⟩" +
           tag;
  };
  return refocus_ctx(decomposition.ctx, focus, false);
}

}  // namespace

std::string render_expr_refocus(const additive::ExprPtr& e) {
  return refocus_expr(e, false);
}

std::string render_refocus(additive::EvalOrder order,
                           const Trace<additive::Config>& trace) {
  std::ostringstream out;
  out << "0: " << refocus_config(order, trace.initial) << "\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    out << (i + 1) << ": " << refocus_config(order, trace.steps[i].config)
        << "   (" << trace.steps[i].rule << ")\n";
  }
  return out.str();
}

std::string render_trace(const RunOutcome& outcome, RenderStyle style) {
  if (style == RenderStyle::Json) return trace_json(outcome);
  if (style == RenderStyle::Refocus) {
    if (!outcome.additive_run)
      throw UnsupportedStyle(
          "refocus rendering needs a machine with a decoder (add-l, add-r)");
    auto order = outcome.machine == MachineId::AddL
                     ? additive::EvalOrder::Left
                     : additive::EvalOrder::Right;
    return render_refocus(order, outcome.additive_run->trace);
  }
  std::ostringstream out;
  out << "0: " << outcome.initial_config << "\n";
  for (std::size_t i = 0; i < outcome.steps.size(); ++i) {
    out << (i + 1) << ": " << outcome.steps[i].second << "   ("
        << outcome.steps[i].first << ")\n";
  }
  return out.str();
}

std::string trace_json(const RunOutcome& outcome) {
  json steps = json::array();
  for (std::size_t i = 0; i < outcome.steps.size(); ++i) {
    steps.push_back({{"index", i + 1},
                     {"rule", outcome.steps[i].first},
                     {"config", outcome.steps[i].second}});
  }
  json per_rule = json::object();
  for (const auto& [rule, count] : outcome.stats.per_rule)
    per_rule[rule] = count;
  json j{{"machine", machine_name(outcome.machine)},
         {"input", outcome.input_text},
         {"steps", steps},
         {"stats",
          {{"total", outcome.stats.total},
           {"beta", outcome.stats.beta},
           {"perRule", per_rule}}},
         {"result", outcome.has_result ? json(outcome.result) : json(nullptr)},
         {"status", outcome.status == RunStatus::Halted ? "halted"
                                                        : "fuel-exhausted"}};
  return j.dump(2);
}

std::vector<additive::ExprPtr> gen_additive(std::size_t count, unsigned bound,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<additive::ExprPtr> out;
  out.reserve(count);
  // bound is the maximum tree height: 1 yields bare constants. The
  // branch probability keeps sizes varied.
  std::function<additive::ExprPtr(unsigned)> gen = [&](unsigned height) {
    if (height <= 1 || rng() % 5 == 0)
      return additive::cst(additive::Nat(rng() % 100));
    return additive::plus(gen(height - 1), gen(height - 1));
  };
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(gen(bound));
  return out;
}

std::vector<TermPtr> gen_closed_terms(std::size_t count, std::size_t max_size,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  static const std::vector<std::string> pool = {"x", "y", "z", "w"};
  std::function<TermPtr(std::size_t, std::vector<std::string>&)> gen =
      [&](std::size_t budget, std::vector<std::string>& ctx) -> TermPtr {
    const bool can_var = !ctx.empty();
    if (budget <= 1 && can_var) return var(ctx[rng() % ctx.size()]);
    if (budget <= 1) budget = 2;  // forced to build an abstraction
    unsigned choice = rng() % 4;
    if (!can_var && choice == 0) choice = 1 + rng() % 2;
    if (budget < 3 && choice == 2) choice = can_var ? 0 : 1;
    if (choice == 0 && can_var) return var(ctx[rng() % ctx.size()]);
    if (choice == 2) {
      std::size_t left = 1 + rng() % (budget - 2);
      TermPtr fn = gen(left, ctx);
      TermPtr arg = gen(budget - 1 - left, ctx);
      return app(std::move(fn), std::move(arg));
    }
    std::string binder = pool[rng() % pool.size()];
    ctx.push_back(binder);
    TermPtr body = gen(budget - 1, ctx);
    ctx.pop_back();
    return lam(binder, std::move(body));
  };
  std::vector<TermPtr> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::string> ctx;
    out.push_back(gen(2 + rng() % max_size, ctx));
  }
  return out;
}

namespace {

void enumerate_nameless(std::size_t size, std::size_t depth,
                        std::vector<NamelessPtr>& out) {
  if (size == 1) {
    for (std::size_t i = 0; i < depth; ++i) out.push_back(nl_idx(i));
    return;
  }
  // Abstractions.
  std::vector<NamelessPtr> bodies;
  enumerate_nameless(size - 1, depth + 1, bodies);
  for (auto& b : bodies) out.push_back(nl_lam(std::move(b)));
  // Applications.
  for (std::size_t left = 1; left + 1 < size; ++left) {
    std::vector<NamelessPtr> fns;
    std::vector<NamelessPtr> args;
    enumerate_nameless(left, depth, fns);
    enumerate_nameless(size - 1 - left, depth, args);
    for (const auto& f : fns)
      for (const auto& a : args) out.push_back(nl_app(f, a));
  }
}

}  // namespace

std::vector<TermPtr> enumerate_closed_terms(std::size_t max_size) {
  std::vector<TermPtr> out;
  for (std::size_t size = 1; size <= max_size; ++size) {
    std::vector<NamelessPtr> nameless;
    enumerate_nameless(size, 0, nameless);
    for (const auto& t : nameless) out.push_back(from_indices(t));
  }
  return out;
}

std::vector<TermPtr> sn_corpus() {
  std::vector<TermPtr> out = enumerate_closed_terms(7);
  for (const auto& [name, body] : prelude()) {
    if (name == "Omega") continue;  // divergent
    out.push_back(body);
  }
  // Church arithmetic: exponentiation by application, successor and
  // addition built from the numerals.
  TermPtr succ = parse_raw("\\n f x. f (n f x)");
  TermPtr add = parse_raw("\\m n f x. m f (n f x)");
  TermPtr mul = parse_raw("\\m n f. m (n f)");
  for (unsigned m = 0; m <= 4; ++m)
    for (unsigned n = 0; n <= 4; ++n)
      out.push_back(app(church(m), church(n)));
  for (unsigned m = 0; m <= 4; ++m) {
    out.push_back(app(succ, church(m)));
    for (unsigned n = 0; n <= 4; ++n) {
      out.push_back(app(app(add, church(m)), church(n)));
      out.push_back(app(app(mul, church(m)), church(n)));
    }
  }
  return out;
}

TermPtr size_explosion(unsigned n) {
  TermPtr chain = prelude_lookup("I");
  for (unsigned k = 0; k < n; ++k) {
    // chain_{k+1} = \x. chain_k (\f. f x x)
    chain = lam("x", app(chain, lam("f", app(app(var("f"), var("x")),
                                             var("x")))));
  }
  return app(chain, var("y"));
}

namespace {

bool machine_beta_locksteps(MachineId m) {
  switch (m) {
    case MachineId::Krivine:
    case MachineId::Cek:
    case MachineId::Secd:
    case MachineId::Kn:
    case MachineId::GhostKn:
      return true;
    default:
      return false;
  }
}

}  // namespace

CompareReport compare(const std::vector<MachineId>& machines,
                      strategies::StrategyId oracle,
                      const std::vector<TermPtr>& inputs, std::uint64_t fuel) {
  CompareReport report;
  for (const auto& input : inputs) {
    auto oracle_run = strategies::normalize(oracle, input, fuel);
    for (MachineId m : machines) {
      CompareRow row;
      row.input = print(input);
      row.machine = machine_name(m);
      row.oracle_status =
          oracle_run.exhausted ? RunStatus::FuelExhausted : RunStatus::Halted;
      row.oracle_steps = oracle_run.steps;
      RunOutcome out = run_machine_on(m, print(input), fuel, false);
      row.machine_status = out.status;
      row.machine_beta = out.stats.beta;
      if (out.status == RunStatus::Halted &&
          row.oracle_status == RunStatus::Halted) {
        row.beta_checked = machine_beta_locksteps(m);
        if (row.beta_checked)
          row.beta_ok = out.stats.beta == oracle_run.steps;
        if (m == MachineId::Kn || m == MachineId::GhostKn ||
            m == MachineId::Mam) {
          row.result_ok = alpha_eq(out.readback, oracle_run.term);
        } else {
          auto conv =
              strategies::convertible(out.readback, oracle_run.term, fuel);
          row.result_ok = conv.convertible && !conv.exhausted;
        }
      } else {
        // Agreement on divergence: both sides must exhaust together.
        row.result_ok = out.status == row.oracle_status;
        row.beta_ok = true;
      }
      row.agree = row.result_ok && row.beta_ok;
      if (!row.agree) ++report.mismatches;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string compare_json(const CompareReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back(
        {{"input", r.input},
         {"machine", r.machine},
         {"machineStatus", r.machine_status == RunStatus::Halted
                               ? "halted"
                               : "fuel-exhausted"},
         {"oracleStatus", r.oracle_status == RunStatus::Halted
                              ? "halted"
                              : "fuel-exhausted"},
         {"machineBeta", r.machine_beta},
         {"oracleSteps", r.oracle_steps},
         {"betaChecked", r.beta_checked},
         {"betaOk", r.beta_ok},
         {"resultOk", r.result_ok},
         {"agree", r.agree}});
  }
  json j{{"rows", rows}, {"mismatches", report.mismatches}};
  return j.dump(2);
}

BenchReport bench_size_explosion(const std::vector<MachineId>& machines,
                                 unsigned n_max, std::uint64_t fuel) {
  BenchReport report;
  report.family = "size-explosion";
  for (unsigned n = 1; n <= n_max; ++n) {
    BenchRow row;
    row.n = n;
    TermPtr input = size_explosion(n);
    auto oracle =
        strategies::normalize(strategies::StrategyId::NormalOrder, input, fuel);
    row.beta_count = oracle.steps;
    row.nf_size = term_size(oracle.term);
    for (MachineId m : machines) {
      RunOutcome out = run_machine_on(m, print(input), fuel, false);
      row.machine_steps[machine_name(m)] = out.stats.total;
    }
    report.rows.push_back(std::move(row));
  }
  for (const auto& row : report.rows) {
    for (const auto& [name, steps] : row.machine_steps) {
      (void)steps;
      report.ratios[name] = {};
      report.diffs[name] = {};
    }
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    for (auto& [name, ratios] : report.ratios) {
      double prev =
          static_cast<double>(report.rows[i - 1].machine_steps.at(name));
      double cur = static_cast<double>(report.rows[i].machine_steps.at(name));
      ratios.push_back(prev == 0 ? 0.0 : cur / prev);
      report.diffs[name].push_back(
          static_cast<std::int64_t>(report.rows[i].machine_steps.at(name)) -
          static_cast<std::int64_t>(report.rows[i - 1].machine_steps.at(name)));
    }
  }
  return report;
}

std::string bench_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "n,beta,nf_size";
  std::vector<std::string> names;
  if (!report.rows.empty())
    for (const auto& [name, steps] : report.rows.front().machine_steps) {
      (void)steps;
      names.push_back(name);
      out << "," << name;
    }
  out << "\n";
  for (const auto& row : report.rows) {
    out << row.n << "," << row.beta_count << "," << row.nf_size;
    for (const auto& name : names) out << "," << row.machine_steps.at(name);
    out << "\n";
  }
  return out.str();
}

std::string bench_json(const BenchReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json steps = json::object();
    for (const auto& [name, count] : row.machine_steps) steps[name] = count;
    rows.push_back({{"n", row.n},
                    {"beta", row.beta_count},
                    {"nfSize", row.nf_size},
                    {"machineSteps", steps}});
  }
  json ratios = json::object();
  for (const auto& [name, values] : report.ratios) ratios[name] = values;
  json j{{"family", report.family}, {"rows", rows}, {"ratios", ratios}};
  return j.dump(2);
}

}  // namespace amlab::harness
