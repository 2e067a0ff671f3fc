#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "loopsynth/term.hpp"

namespace loopsynth {

/// solution == skeleton[context^reps[base]]
struct Decomposition {
  Term skeleton;  // one Hole, where the repeated region sits
  Term context;   // one Hole, never a bare Hole
  Term base;      // Hole-free
  std::size_t reps = 0;
  std::size_t source = 0;  // originating example index
};

/// Rebuild skeleton[context^reps[base]].
Term recompose(const Decomposition& d);
/// Same, with a different repetition count.
Term recompose(const Decomposition& d, std::size_t reps);

inline constexpr std::size_t kMinReps = 2;

/// Find the repeated one-hole context in a normalized, Hole-free solution.
///
/// Every node p and every proper descendant q of p of the same sort induce
/// a context (subtree at p with q cut out). Its repetition count is the
/// number of consecutive copies of that context starting at p. The winner
/// maximizes the count, then minimizes the context size, then prefers the
/// leftmost p (and q) in preorder. Returns nullopt when the best count is
/// below kMinReps.
std::optional<Decomposition> decompose(const Term& solution,
                                       std::size_t source = 0);

/// Printed (skeleton, context, base). The repetition count is not part of
/// the key.
struct CategoryKey {
  std::string skeleton;
  std::string context;
  std::string base;

  friend bool operator==(const CategoryKey&, const CategoryKey&) = default;
  friend auto operator<=>(const CategoryKey&, const CategoryKey&) = default;
};

CategoryKey category_key(const Decomposition& d);

enum class CategoryState { Fresh, LoopSynthesized, Exhausted };

std::string_view state_name(CategoryState s);

struct CategoryMember {
  std::size_t example;
  std::size_t reps;
};

struct Category {
  CategoryKey key;
  /// Decomposition of the first admitted member; its skeleton, context and
  /// base are shared by every member.
  Decomposition shape;
  std::vector<CategoryMember> members;
  CategoryState state = CategoryState::Fresh;
};

class CategoryRegistry {
 public:
  struct Admission {
    std::size_t category;
    bool grew;
  };

  /// Add the decomposition's example to the matching category, creating one
  /// if needed. `grew` is false only when the same (example, reps) pair is
  /// already recorded. Growth resets the category to Fresh.
  Admission admit(const Decomposition& d);

  const std::vector<Category>& categories() const { return categories_; }
  Category& at(std::size_t i) { return categories_.at(i); }
  const Category& at(std::size_t i) const { return categories_.at(i); }
  std::size_t size() const { return categories_.size(); }
  bool empty() const { return categories_.empty(); }

 private:
  std::vector<Category> categories_;
};

}  // namespace loopsynth
