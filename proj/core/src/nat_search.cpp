#include <algorithm>

#include "geoctx/presheaf.hpp"

namespace geoctx {

namespace {

// Backtracking over assignments x |-> t, one element at a time. Assigning
// (U, x) forces the image of every restriction of x, so each choice is
// propagated along all arrows into U before descending.
class Search {
 public:
  Search(const PresheafPtr& f, const PresheafPtr& g, bool bijective)
      : f_(f), g_(g), c_(f->category()), bijective_(bijective) {
    for (ObjectId u = 0; u < c_.object_count(); ++u) {
      assign_.emplace_back(f->size(u), -1);
      used_.emplace_back(g->size(u), false);
    }
    std::vector<ObjectId> objs(c_.object_count());
    for (ObjectId u = 0; u < c_.object_count(); ++u) objs[u] = u;
    std::stable_sort(objs.begin(), objs.end(), [&](ObjectId a, ObjectId b) {
      return popcount(c_.arrows_into(a)) > popcount(c_.arrows_into(b));
    });
    for (ObjectId u : objs)
      for (int x = 0; x < f->size(u); ++x) order_.emplace_back(u, x);
  }

  std::size_t run(const std::function<bool(const NatTrans&)>& visit) {
    visit_ = &visit;
    stop_ = false;
    count_ = 0;
    descend(0);
    return count_;
  }

 private:
  bool set(ObjectId u, int x, int t) {
    int& slot = assign_[u][x];
    if (slot != -1) return slot == t;
    if (bijective_ && used_[u][t]) return false;
    slot = t;
    if (bijective_) used_[u][t] = true;
    trail_.emplace_back(u, x);
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [u, x] = trail_.back();
      trail_.pop_back();
      if (bijective_) used_[u][assign_[u][x]] = false;
      assign_[u][x] = -1;
    }
  }

  bool choose(ObjectId u, int x, int t) {
    if (!set(u, x, t)) return false;
    for (ArrowId a : members(c_.arrows_into(u)))
      if (!set(c_.source(a), f_->restrict(a, x), g_->restrict(a, t))) return false;
    return true;
  }

  void descend(std::size_t k) {
    while (k < order_.size() && assign_[order_[k].first][order_[k].second] != -1) ++k;
    if (k == order_.size()) {
      ++count_;
      if (!(*visit_)(NatTrans{f_, g_, assign_})) stop_ = true;
      return;
    }
    auto [u, x] = order_[k];
    for (int t = 0; t < g_->size(u) && !stop_; ++t) {
      std::size_t mark = trail_.size();
      if (choose(u, x, t)) descend(k + 1);
      undo(mark);
    }
  }

  PresheafPtr f_, g_;
  const FiniteCategory& c_;
  bool bijective_;
  std::vector<std::vector<int>> assign_;
  std::vector<std::vector<bool>> used_;
  std::vector<std::pair<ObjectId, int>> order_;
  std::vector<std::pair<ObjectId, int>> trail_;
  const std::function<bool(const NatTrans&)>* visit_ = nullptr;
  bool stop_ = false;
  std::size_t count_ = 0;
};

}  // namespace

std::optional<NatTrans> find_isomorphism(const PresheafPtr& f, const PresheafPtr& g) {
  const FiniteCategory& c = f->category();
  for (ObjectId u = 0; u < c.object_count(); ++u)
    if (f->size(u) != g->size(u)) return std::nullopt;
  std::optional<NatTrans> found;
  Search(f, g, true).run([&](const NatTrans& t) {
    found = t;
    return false;
  });
  return found;
}

std::size_t for_each_nat_trans(const PresheafPtr& f, const PresheafPtr& g,
                               const std::function<bool(const NatTrans&)>& visit) {
  return Search(f, g, false).run(visit);
}

std::vector<NatTrans> all_nat_trans(const PresheafPtr& f, const PresheafPtr& g, std::size_t limit) {
  std::vector<NatTrans> out;
  if (limit == 0) return out;
  for_each_nat_trans(f, g, [&](const NatTrans& t) {
    out.push_back(t);
    return out.size() < limit;
  });
  return out;
}

}  // namespace geoctx
