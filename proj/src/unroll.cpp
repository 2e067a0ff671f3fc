#include "loopsynth/unroll.hpp"

#include <tuple>

#include "loopsynth/errors.hpp"

namespace loopsynth {

namespace {

// Does `cur` carry the same context as `top` along `path`, i.e. equal node
// labels on the path and equal off-path siblings?
bool same_context(const Term& cur, const Term& top, const Path& path) {
  const Term* a = &cur;
  const Term* b = &top;
  for (std::uint32_t step : path) {
    if (a->kind() != b->kind() || a->args().size() != b->args().size()) {
      return false;
    }
    if (a->kind() == Kind::App && a->op() != b->op()) return false;
    if (a->kind() == Kind::Call && a->name() != b->name()) return false;
    for (std::uint32_t j = 0; j < a->args().size(); ++j) {
      if (j != step && a->arg(j) != b->arg(j)) return false;
    }
    a = &a->arg(step);
    b = &b->arg(step);
  }
  return a->sort() == b->sort();
}

struct Candidate {
  std::size_t reps;
  std::size_t context_size;
  std::size_t outer;  // preorder index of p
  std::size_t inner;  // preorder index of q within the subtree at p

  // Strictly better under (max reps, min context size, leftmost p, leftmost q).
  bool better_than(const Candidate& o) const {
    return std::make_tuple(o.reps, context_size, outer, inner) <
           std::make_tuple(reps, o.context_size, o.outer, o.inner);
  }
};

}  // namespace

Term recompose(const Decomposition& d) { return recompose(d, d.reps); }

Term recompose(const Decomposition& d, std::size_t reps) {
  return apply_context(d.skeleton, apply_context_n(d.context, d.base, reps));
}

std::optional<Decomposition> decompose(const Term& solution, std::size_t source) {
  if (solution.hole_count() != 0) {
    throw HoleCountError("decompose expects a hole-free term");
  }
  const std::vector<Path> outer = positions(solution);
  std::optional<Candidate> best;
  Path best_p, best_q;
  for (std::size_t pi = 0; pi < outer.size(); ++pi) {
    const Term& top = subterm_at(solution, outer[pi]);
    if (top.args().empty()) continue;
    const std::vector<Path> inner = positions(top);
    for (std::size_t qi = 1; qi < inner.size(); ++qi) {
      const Path& q = inner[qi];
      const Term& cut = subterm_at(top, q);
      if (cut.sort() != top.sort()) continue;
      std::size_t reps = 1;
      const Term* cur = &cut;
      while (same_context(*cur, top, q)) {
        ++reps;
        cur = &subterm_at(*cur, q);
      }
      Candidate c{reps, top.size() - cut.size() + 1, pi, qi};
      if (!best || c.better_than(*best)) {
        best = c;
        best_p = outer[pi];
        best_q = q;
      }
    }
  }
  if (!best || best->reps < kMinReps) return std::nullopt;

  const Term& top = subterm_at(solution, best_p);
  Decomposition d{
      replace_at(solution, best_p, Term::hole(top.sort())),
      replace_at(top, best_q, Term::hole(top.sort())),
      top,
      best->reps,
      source,
  };
  const Term* base = &top;
  for (std::size_t i = 0; i < best->reps; ++i) base = &subterm_at(*base, best_q);
  d.base = *base;
  return d;
}

CategoryKey category_key(const Decomposition& d) {
  return {d.skeleton.to_string(), d.context.to_string(), d.base.to_string()};
}

std::string_view state_name(CategoryState s) {
  switch (s) {
    case CategoryState::Fresh:
      return "fresh";
    case CategoryState::LoopSynthesized:
      return "loop-synthesized";
    case CategoryState::Exhausted:
      return "exhausted";
  }
  return "?";
}

CategoryRegistry::Admission CategoryRegistry::admit(const Decomposition& d) {
  CategoryKey key = category_key(d);
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    Category& c = categories_[i];
    if (c.key != key) continue;
    for (CategoryMember& m : c.members) {
      if (m.example != d.source) continue;
      if (m.reps == d.reps) return {i, false};
      m.reps = d.reps;
      c.state = CategoryState::Fresh;
      return {i, true};
    }
    c.members.push_back({d.source, d.reps});
    c.state = CategoryState::Fresh;
    return {i, true};
  }
  categories_.push_back(Category{std::move(key), d, {{d.source, d.reps}},
                                 CategoryState::Fresh});
  return {categories_.size() - 1, true};
}

}  // namespace loopsynth
