#include <chrono>
#include <functional>
#include <unordered_map>

#include "loopsynth/errors.hpp"
#include "loopsynth/eval.hpp"
#include "loopsynth/solver.hpp"

namespace loopsynth {

namespace {

using Clock = std::chrono::steady_clock;

struct Instr {
  enum class Code : std::uint8_t { Literal, Param, Child, Apply };
  Code code;
  Op op = Op::Concat;
  std::uint32_t index = 0;  // literal pool / parameter / child occurrence
  std::uint32_t nargs = 0;
};

struct Production {
  Term term;
  std::vector<Instr> program;  // postfix
  std::vector<std::uint32_t> child_nts;
  std::size_t fixed = 0;  // nodes contributed by the production itself
};

struct Candidate {
  std::uint32_t nt;
  std::uint32_t prod;
  std::uint32_t size;
  std::vector<std::uint32_t> kids;
  std::vector<Value> values;
};

std::size_t hash_values(const std::vector<Value>& vals) {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const Value& v : vals) h = (h ^ v.hash()) * 0x100000001b3ULL;
  return h;
}

class Enumerator {
 public:
  Enumerator(const Grammar& g, const FunctionSignature& target,
             const std::vector<ConstraintExample>& examples,
             const SolveBudget& budget, std::stop_token stop)
      : grammar_(g),
        target_(target),
        examples_(examples),
        budget_(budget),
        stop_(std::move(stop)),
        deadline_(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(
                                         budget.timeout_seconds))) {
    compile();
  }

  SolveResult run() {
    const auto started = Clock::now();
    auto finish = [&](auto outcome) {
      stats_.seconds =
          std::chrono::duration<double>(Clock::now() - started).count();
      return SolveResult(std::move(outcome), stats_);
    };
    std::vector<Value> wanted;
    for (const ConstraintExample& ex : examples_) wanted.push_back(ex.output);
    const std::size_t wanted_hash = hash_values(wanted);

    std::size_t last_growth = 0;
    for (std::size_t size = 1; size <= budget_.max_size; ++size) {
      stats_.max_size_reached = size;
      grew_ = false;
      tie_cache_.clear();
      // Allocate this size's buckets up front so references into smaller
      // buckets stay valid while candidates are added.
      for (std::uint32_t nt : order_) bank(nt, size);
      try {
        for (std::uint32_t nt : order_) {
          for (std::uint32_t p : nt_prods_[nt]) {
            if (!is_unit(p)) expand(nt, p, size);
          }
        }
        close_units(size);
      } catch (const Stop& s) {
        return finish(SolveFailure{s.kind, s.message});
      }
      if (grew_) last_growth = size;
      if (auto id = lookup(start_, wanted, wanted_hash)) {
        return finish(build(*id));
      }
      if (size > last_growth && size > max_reachable(last_growth)) {
        return finish(SolveFailure{
            FailureKind::Infeasible,
            "grammar exhausted at size " + std::to_string(last_growth)});
      }
    }
    return finish(SolveFailure{
        FailureKind::Infeasible,
        "no solution up to size " + std::to_string(budget_.max_size)});
  }

 private:
  struct Stop {
    FailureKind kind;
    std::string message;
  };

  void compile() {
    for (std::size_t i = 0; i < grammar_.nonterminals.size(); ++i) {
      nt_index_.emplace(grammar_.nonterminals[i].name,
                        static_cast<std::uint32_t>(i));
    }
    nt_prods_.resize(grammar_.nonterminals.size());
    banks_.resize(grammar_.nonterminals.size());
    seen_.resize(grammar_.nonterminals.size());
    for (std::size_t i = 0; i < grammar_.nonterminals.size(); ++i) {
      for (const Term& rule : grammar_.rules(grammar_.nonterminals[i].name)) {
        Production p{rule, {}, {}, 0};
        compile_term(rule, p);
        p.fixed = rule.size() - p.child_nts.size();
        nt_prods_[i].push_back(static_cast<std::uint32_t>(prods_.size()));
        prods_.push_back(std::move(p));
      }
    }
    start_ = nt_index_.at(grammar_.start);
    // Only nonterminals reachable from the start symbol are enumerated.
    std::vector<bool> reach(grammar_.nonterminals.size(), false);
    std::vector<std::uint32_t> work{start_};
    reach[start_] = true;
    while (!work.empty()) {
      std::uint32_t nt = work.back();
      work.pop_back();
      for (std::uint32_t p : nt_prods_[nt]) {
        for (std::uint32_t c : prods_[p].child_nts) {
          if (!reach[c]) {
            reach[c] = true;
            work.push_back(c);
          }
        }
      }
    }
    for (std::uint32_t i = 0; i < reach.size(); ++i) {
      if (reach[i]) order_.push_back(i);
    }
  }

  void compile_term(const Term& t, Production& p) {
    switch (t.kind()) {
      case Kind::Literal:
        p.program.push_back({Instr::Code::Literal, Op::Concat,
                             static_cast<std::uint32_t>(literals_.size()), 0});
        literals_.push_back(t.value());
        return;
      case Kind::Var: {
        if (auto it = nt_index_.find(t.name()); it != nt_index_.end()) {
          p.program.push_back({Instr::Code::Child, Op::Concat,
                               static_cast<std::uint32_t>(p.child_nts.size()), 0});
          p.child_nts.push_back(it->second);
          return;
        }
        for (std::uint32_t i = 0; i < target_.params.size(); ++i) {
          if (target_.params[i].name == t.name()) {
            p.program.push_back({Instr::Code::Param, Op::Concat, i, 0});
            return;
          }
        }
        throw Error("grammar references unknown symbol " + t.name());
      }
      case Kind::App:
        for (const Term& a : t.args()) compile_term(a, p);
        p.program.push_back({Instr::Code::Apply, t.op(), 0,
                             static_cast<std::uint32_t>(t.args().size())});
        return;
      default:
        throw Error("unsupported node in grammar production");
    }
  }

  bool is_unit(std::uint32_t p) const {
    return prods_[p].fixed == 0 && prods_[p].child_nts.size() == 1;
  }

  std::size_t max_reachable(std::size_t largest_child) const {
    std::size_t best = 0;
    for (std::uint32_t nt : order_) {
      for (std::uint32_t p : nt_prods_[nt]) {
        best = std::max(best, prods_[p].fixed +
                                  prods_[p].child_nts.size() * largest_child);
      }
    }
    return best;
  }

  std::vector<std::uint32_t>& bank(std::uint32_t nt, std::size_t size) {
    auto& b = banks_[nt];
    if (b.size() <= size) b.resize(size + 1);
    return b[size];
  }

  std::optional<std::uint32_t> lookup(std::uint32_t nt,
                                      const std::vector<Value>& vals,
                                      std::size_t h) const {
    auto it = seen_[nt].find(h);
    if (it == seen_[nt].end()) return std::nullopt;
    for (std::uint32_t id : it->second) {
      if (cands_[id].values == vals) return id;
    }
    return std::nullopt;
  }

  void tick() {
    ++stats_.candidates;
    if ((stats_.candidates & 1023) == 0) {
      if (stop_.stop_requested()) throw Stop{FailureKind::Cancelled, "cancelled"};
      if (Clock::now() >= deadline_) {
        throw Stop{FailureKind::Timeout, "wall timeout"};
      }
    }
    if (stats_.candidates > budget_.max_candidates) {
      throw Stop{FailureKind::Timeout, "candidate budget exhausted"};
    }
  }

  // Enumerate every assignment of child sizes for production p at `size`.
  void expand(std::uint32_t nt, std::uint32_t p, std::size_t size) {
    const Production& prod = prods_[p];
    if (prod.fixed > size) return;
    const std::size_t k = prod.child_nts.size();
    if (k == 0) {
      if (prod.fixed == size) consider(nt, p, {}, size);
      return;
    }
    if (size - prod.fixed < k) return;
    std::vector<std::size_t> sizes(k);
    std::function<void(std::size_t, std::size_t)> split = [&](std::size_t i,
                                                              std::size_t left) {
      if (i + 1 == k) {
        if (left == 0 || bank(prod.child_nts[i], left).empty()) return;
        sizes[i] = left;
        product(nt, p, sizes, size);
        return;
      }
      for (std::size_t s = 1; s + (k - 1 - i) <= left; ++s) {
        if (bank(prod.child_nts[i], s).empty()) continue;
        sizes[i] = s;
        split(i + 1, left - s);
      }
    };
    split(0, size - prod.fixed);
  }

  void product(std::uint32_t nt, std::uint32_t p,
               const std::vector<std::size_t>& sizes, std::size_t size) {
    const Production& prod = prods_[p];
    const std::size_t k = sizes.size();
    std::vector<std::uint32_t> kids(k);
    std::function<void(std::size_t)> pick = [&](std::size_t i) {
      if (i == k) {
        consider(nt, p, kids, size);
        return;
      }
      const auto& ids = bank(prod.child_nts[i], sizes[i]);
      for (std::size_t j = 0; j < ids.size(); ++j) {
        kids[i] = ids[j];
        pick(i + 1);
      }
    };
    pick(0);
  }

  bool evaluate_production(const Production& prod,
                           const std::vector<std::uint32_t>& kids,
                           std::vector<Value>& out) {
    out.clear();
    out.reserve(examples_.size());
    std::vector<Value> stack;
    for (std::size_t e = 0; e < examples_.size(); ++e) {
      stack.clear();
      for (const Instr& in : prod.program) {
        switch (in.code) {
          case Instr::Code::Literal:
            stack.push_back(literals_[in.index]);
            break;
          case Instr::Code::Param:
            stack.push_back(examples_[e].inputs[in.index]);
            break;
          case Instr::Code::Child:
            stack.push_back(cands_[kids[in.index]].values[e]);
            break;
          case Instr::Code::Apply: {
            std::span<const Value> args(stack.data() + stack.size() - in.nargs,
                                        in.nargs);
            Value r = Value::boolean(false);
            try {
              r = apply_builtin(in.op, args);
            } catch (const EvalError&) {
              return false;
            }
            stack.erase(stack.end() - in.nargs, stack.end());
            stack.push_back(std::move(r));
            break;
          }
        }
      }
      out.push_back(std::move(stack.back()));
    }
    return true;
  }

  void consider(std::uint32_t nt, std::uint32_t p,
                const std::vector<std::uint32_t>& kids, std::size_t size) {
    tick();
    std::vector<Value> vals;
    if (!evaluate_production(prods_[p], kids, vals)) return;
    const std::size_t h = hash_values(vals);
    if (auto existing = lookup(nt, vals, h)) {
      Candidate& c = cands_[*existing];
      if (c.size < size) return;
      // Same size, same outputs: keep the lexicographically smaller print.
      std::string mine;
      print_parts(p, kids, mine);
      auto cached = tie_cache_.find(*existing);
      if (cached == tie_cache_.end()) {
        std::string theirs;
        print_parts(c.prod, c.kids, theirs);
        cached = tie_cache_.emplace(*existing, std::move(theirs)).first;
      }
      if (mine < cached->second) {
        c.prod = p;
        c.kids = kids;
        cached->second = std::move(mine);
      }
      return;
    }
    const auto id = static_cast<std::uint32_t>(cands_.size());
    cands_.push_back(Candidate{nt, p, static_cast<std::uint32_t>(size), kids,
                               std::move(vals)});
    seen_[nt][h].push_back(id);
    bank(nt, size).push_back(id);
    grew_ = true;
  }

  void close_units(std::size_t size) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t nt : order_) {
        for (std::uint32_t p : nt_prods_[nt]) {
          if (!is_unit(p)) continue;
          const std::uint32_t child = prods_[p].child_nts[0];
          if (child == nt) continue;
          for (std::size_t j = 0; j < bank(child, size).size(); ++j) {
            const std::size_t before = bank(nt, size).size();
            consider(nt, p, {bank(child, size)[j]}, size);
            if (bank(nt, size).size() != before) changed = true;
          }
        }
      }
    }
  }

  void print_cand(std::uint32_t id, std::string& out) const {
    print_parts(cands_[id].prod, cands_[id].kids, out);
  }

  void print_parts(std::uint32_t p, const std::vector<std::uint32_t>& kids,
                   std::string& out) const {
    std::size_t next = 0;
    print_prod(prods_[p].term, kids, next, out);
  }

  void print_prod(const Term& t, const std::vector<std::uint32_t>& kids,
                  std::size_t& next, std::string& out) const {
    switch (t.kind()) {
      case Kind::Var:
        if (nt_index_.count(t.name())) {
          print_cand(kids[next++], out);
        } else {
          out += t.name();
        }
        return;
      case Kind::App:
        out += '(';
        out += op_symbol(t.op());
        for (const Term& a : t.args()) {
          out += ' ';
          print_prod(a, kids, next, out);
        }
        out += ')';
        return;
      default:
        out += t.to_string();
        return;
    }
  }

  Term build(std::uint32_t id) const {
    std::size_t next = 0;
    return build_prod(prods_[cands_[id].prod].term, cands_[id].kids, next);
  }

  Term build_prod(const Term& t, const std::vector<std::uint32_t>& kids,
                  std::size_t& next) const {
    if (t.kind() == Kind::Var && nt_index_.count(t.name())) {
      return build(kids[next++]);
    }
    if (t.args().empty()) return t;
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(build_prod(a, kids, next));
    return t.with_args(std::move(args));
  }

  const Grammar& grammar_;
  const FunctionSignature& target_;
  const std::vector<ConstraintExample>& examples_;
  const SolveBudget& budget_;
  std::stop_token stop_;
  Clock::time_point deadline_;

  std::unordered_map<std::string, std::uint32_t> nt_index_;
  std::vector<Production> prods_;
  std::vector<std::vector<std::uint32_t>> nt_prods_;
  std::vector<Value> literals_;
  std::vector<std::uint32_t> order_;
  std::uint32_t start_ = 0;

  std::vector<Candidate> cands_;
  std::vector<std::vector<std::vector<std::uint32_t>>> banks_;
  std::vector<std::unordered_map<std::size_t, std::vector<std::uint32_t>>> seen_;
  std::unordered_map<std::uint32_t, std::string> tie_cache_;
  bool grew_ = false;
  SolveStats stats_;
};

}  // namespace

SolveResult builtin_enumerate(const Grammar& grammar,
                              const FunctionSignature& target,
                              const std::vector<ConstraintExample>& examples,
                              const SolveBudget& budget, std::stop_token stop) {
  budget.validate();
  if (grammar.start_sort() != target.result) {
    throw Error("grammar start sort does not match the target return sort");
  }
  // No function maps one input to two outputs.
  for (std::size_t i = 0; i < examples.size(); ++i) {
    for (std::size_t j = i + 1; j < examples.size(); ++j) {
      if (examples[i].inputs == examples[j].inputs &&
          examples[i].output != examples[j].output) {
        return {SolveFailure{FailureKind::Infeasible,
                             "examples " + std::to_string(i) + " and " +
                                 std::to_string(j) + " contradict each other"},
                SolveStats{}};
      }
    }
  }
  return Enumerator(grammar, target, examples, budget, std::move(stop)).run();
}

}  // namespace loopsynth
