#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracksym {

// A trivalent train track as a ribbon graph. Every switch has one trunk slot
// (the single-edge side of the tie) and two branch slots. The counterclockwise
// cyclic order of edge-ends around a switch is fixed once and for all as
// (trunk, right, left); "left"/"right" label the branches as seen from the
// incoming trunk, for the surface orientation. All left/right and sign
// conventions elsewhere in the library derive from this choice.

struct EndRef {
  int edge = -1;
  int end = 0;  // 0 or 1

  bool operator==(const EndRef&) const = default;
};

enum class Slot { Trunk = 0, Right = 1, Left = 2 };

inline const char* slot_name(Slot s) {
  switch (s) {
    case Slot::Trunk: return "trunk";
    case Slot::Right: return "right";
    case Slot::Left: return "left";
  }
  return "?";
}

// Side of the canonically oriented tie on which the branch pair lies.
// Meaningful only on oriented tracks.
enum class Divergence { Left, Right };

struct SwitchRecord {
  std::string id;
  EndRef trunk;
  EndRef left;
  EndRef right;
  std::optional<Divergence> divergence;

  const EndRef& slot(Slot s) const {
    switch (s) {
      case Slot::Trunk: return trunk;
      case Slot::Right: return right;
      case Slot::Left: return left;
    }
    throw std::logic_error("bad slot");
  }
};

// Deck involution of an orientation cover: a pair of bijections, stored by
// index.
struct Involution {
  std::vector<int> switch_image;
  std::vector<int> edge_image;
};

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
  // Non-fatal observations, e.g. divergence flags that do not admit a
  // coherent edge direction field.
  std::vector<std::string> warnings;
};

// Where an edge-end sits: which switch, which slot.
struct EndPlacement {
  int switch_index = -1;
  Slot slot = Slot::Trunk;
};

class TrainTrack {
 public:
  TrainTrack() = default;

  TrainTrack(std::vector<std::string> edge_ids, std::vector<SwitchRecord> switches,
             std::optional<std::vector<int>> tie_transport = std::nullopt,
             std::optional<Involution> involution = std::nullopt)
      : edge_ids_(std::move(edge_ids)),
        switches_(std::move(switches)),
        tie_transport_(std::move(tie_transport)),
        involution_(std::move(involution)) {
    for (std::size_t i = 0; i < edge_ids_.size(); ++i) {
      if (!edge_index_.emplace(edge_ids_[i], static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate edge id: " + edge_ids_[i]);
    }
    for (std::size_t i = 0; i < switches_.size(); ++i) {
      if (!switch_index_.emplace(switches_[i].id, static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate switch id: " + switches_[i].id);
    }
    if (tie_transport_ && tie_transport_->size() != edge_ids_.size())
      throw std::invalid_argument("tie_transport size mismatch");
  }

  std::size_t edge_count() const { return edge_ids_.size(); }
  std::size_t switch_count() const { return switches_.size(); }

  const std::string& edge_id(int e) const { return edge_ids_.at(e); }
  const std::vector<std::string>& edge_ids() const { return edge_ids_; }
  int edge_index(const std::string& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw std::invalid_argument("unknown edge id: " + id);
    return it->second;
  }
  bool has_edge(const std::string& id) const { return edge_index_.count(id) != 0; }

  const SwitchRecord& switch_at(int s) const { return switches_.at(s); }
  const std::vector<SwitchRecord>& switches() const { return switches_; }
  int switch_index(const std::string& id) const {
    auto it = switch_index_.find(id);
    if (it == switch_index_.end()) throw std::invalid_argument("unknown switch id: " + id);
    return it->second;
  }

  bool has_tie_transport() const { return tie_transport_.has_value(); }
  // Sign of tie co-orientation transport along an edge; +1 when unspecified.
  int tie_transport(int e) const {
    if (!tie_transport_) return 1;
    return (*tie_transport_)[e];
  }

  bool has_involution() const { return involution_.has_value(); }
  const Involution& involution() const {
    if (!involution_) throw std::invalid_argument("track has no involution");
    return *involution_;
  }

  // A track counts as oriented when every switch carries a divergence flag.
  bool oriented() const {
    if (switches_.empty()) return false;
    return std::all_of(switches_.begin(), switches_.end(),
                       [](const SwitchRecord& s) { return s.divergence.has_value(); });
  }

  bool end_ref_in_range(const EndRef& ref) const {
    return ref.edge >= 0 && ref.edge < static_cast<int>(edge_count()) &&
           (ref.end == 0 || ref.end == 1);
  }

  // Placement of every edge-end, valid only on tracks that pass validation.
  // placements()[e][k] is where end k of edge e sits.
  std::vector<std::array<EndPlacement, 2>> placements() const {
    std::vector<std::array<EndPlacement, 2>> out(edge_count());
    for (std::size_t s = 0; s < switches_.size(); ++s) {
      for (Slot slot : {Slot::Trunk, Slot::Right, Slot::Left}) {
        const EndRef& ref = switches_[s].slot(slot);
        if (!end_ref_in_range(ref)) continue;
        out[ref.edge][ref.end] = EndPlacement{static_cast<int>(s), slot};
      }
    }
    return out;
  }

 private:
  std::vector<std::string> edge_ids_;
  std::vector<SwitchRecord> switches_;
  std::optional<std::vector<int>> tie_transport_;
  std::optional<Involution> involution_;
  std::map<std::string, int> edge_index_;
  std::map<std::string, int> switch_index_;
};

namespace detail {

// +1 for trunk ends, -1 for branch ends.
inline int slot_sign(Slot s) { return s == Slot::Trunk ? 1 : -1; }

// An edge points into the switch at this end exactly when the "left of the
// oriented tie" direction crosses the tie toward the switch there.
inline bool end_points_into_switch(Divergence flag, Slot slot) {
  return (flag == Divergence::Left) == (slot == Slot::Trunk);
}

inline std::vector<std::vector<int>> switch_adjacency(const TrainTrack& t) {
  std::vector<std::vector<int>> adj(t.switch_count());
  auto place = t.placements();
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    const int s0 = place[e][0].switch_index;
    const int s1 = place[e][1].switch_index;
    if (s0 < 0 || s1 < 0) continue;
    adj[s0].push_back(static_cast<int>(e));
    adj[s1].push_back(static_cast<int>(e));
  }
  return adj;
}

inline std::vector<int> switch_components(const TrainTrack& t) {
  std::vector<int> comp(t.switch_count(), -1);
  const auto place = t.placements();
  const auto adj = switch_adjacency(t);
  int next = 0;
  for (std::size_t start = 0; start < t.switch_count(); ++start) {
    if (comp[start] >= 0) continue;
    std::vector<int> stack{static_cast<int>(start)};
    comp[start] = next;
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      for (int e : adj[s]) {
        for (int k : {0, 1}) {
          const int other = place[e][k].switch_index;
          if (other >= 0 && comp[other] < 0) {
            comp[other] = next;
            stack.push_back(other);
          }
        }
      }
    }
    ++next;
  }
  return comp;
}

inline int component_count(const TrainTrack& t) {
  const auto comp = switch_components(t);
  int n = 0;
  for (int c : comp) n = std::max(n, c + 1);
  return n;
}

}  // namespace detail

// Structural validation. Violations are data, not failures.
inline ValidationReport validate_track(const TrainTrack& t) {
  ValidationReport report;
  auto violation = [&](std::string msg) {
    report.valid = false;
    report.violations.push_back(std::move(msg));
  };

  if (t.switch_count() == 0 || t.edge_count() == 0) {
    violation("empty track");
    return report;
  }
  if (2 * t.edge_count() != 3 * t.switch_count()) {
    violation("not trivalent: 2#edges != 3#switches");
  }

  bool refs_ok = true;
  for (std::size_t s = 0; s < t.switch_count(); ++s) {
    const SwitchRecord& sw = t.switch_at(static_cast<int>(s));
    for (Slot slot : {Slot::Trunk, Slot::Right, Slot::Left}) {
      if (!t.end_ref_in_range(sw.slot(slot))) {
        violation("switch " + sw.id + ": " + slot_name(slot) + " slot has invalid end reference");
        refs_ok = false;
      }
    }
    if (refs_ok) {
      if (sw.trunk == sw.left || sw.trunk == sw.right || sw.left == sw.right) {
        violation("switch " + sw.id + ": trunk/left/right must reference distinct edge-ends");
      }
    }
  }
  if (!refs_ok) return report;

  // Every edge-end occupies exactly one slot of exactly one switch.
  std::vector<std::array<int, 2>> occupancy(t.edge_count(), {0, 0});
  for (std::size_t s = 0; s < t.switch_count(); ++s) {
    const SwitchRecord& sw = t.switch_at(static_cast<int>(s));
    for (Slot slot : {Slot::Trunk, Slot::Right, Slot::Left}) {
      const EndRef& ref = sw.slot(slot);
      occupancy[ref.edge][ref.end] += 1;
    }
  }
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    for (int k : {0, 1}) {
      if (occupancy[e][k] > 1) {
        violation("slot reuse: edge " + t.edge_id(static_cast<int>(e)) + " end " +
                  std::to_string(k) + " occupies " + std::to_string(occupancy[e][k]) + " slots");
      } else if (occupancy[e][k] == 0) {
        violation("unplaced edge-end: edge " + t.edge_id(static_cast<int>(e)) + " end " +
                  std::to_string(k));
      }
    }
  }
  if (!report.valid) return report;

  // Base tracks must be connected; oriented tracks (e.g. orientation covers)
  // may have several components.
  const int components = detail::component_count(t);
  if (!t.oriented() && components != 1) {
    violation("not connected (" + std::to_string(components) + " components)");
  }

  if (t.has_tie_transport()) {
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
      const int sign = t.tie_transport(static_cast<int>(e));
      if (sign != 1 && sign != -1)
        violation("tie_transport for edge " + t.edge_id(static_cast<int>(e)) + " must be +1 or -1");
    }
  }

  if (t.has_involution()) {
    const Involution& inv = t.involution();
    if (inv.switch_image.size() != t.switch_count() || inv.edge_image.size() != t.edge_count()) {
      violation("involution: wrong size");
      return report;
    }
    for (std::size_t s = 0; s < t.switch_count(); ++s) {
      const int img = inv.switch_image[s];
      if (img < 0 || img >= static_cast<int>(t.switch_count())) {
        violation("involution: switch image out of range");
        return report;
      }
      if (img == static_cast<int>(s))
        violation("involution: fixed switch " + t.switch_at(static_cast<int>(s)).id);
      if (inv.switch_image[img] != static_cast<int>(s))
        violation("involution: not self-inverse on switches at " +
                  t.switch_at(static_cast<int>(s)).id);
    }
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
      const int img = inv.edge_image[e];
      if (img < 0 || img >= static_cast<int>(t.edge_count())) {
        violation("involution: edge image out of range");
        return report;
      }
      if (img == static_cast<int>(e))
        violation("involution: fixed edge " + t.edge_id(static_cast<int>(e)));
      if (inv.edge_image[img] != static_cast<int>(e))
        violation("involution: not self-inverse on edges at " + t.edge_id(static_cast<int>(e)));
    }
    if (!report.valid) return report;

    // Slot compatibility: the involution preserves trunk/left/right slots
    // (labels are taken relative to the trunk, which the involution fixes)
    // and flips the divergence flag, which carries the tie reversal.
    for (std::size_t s = 0; s < t.switch_count(); ++s) {
      const SwitchRecord& sw = t.switch_at(static_cast<int>(s));
      const SwitchRecord& im = t.switch_at(inv.switch_image[s]);
      for (Slot slot : {Slot::Trunk, Slot::Right, Slot::Left}) {
        const EndRef& ref = sw.slot(slot);
        const EndRef& img_ref = im.slot(slot);
        if (img_ref.edge != inv.edge_image[ref.edge]) {
          violation("involution: switch " + sw.id + " " + slot_name(slot) +
                    " slot does not map to the same slot of " + im.id);
        }
      }
      if (sw.divergence && im.divergence && *sw.divergence == *im.divergence) {
        violation("involution: divergence flag not flipped between " + sw.id + " and " + im.id);
      }
    }
  }

  // Coherence of divergence flags with a global edge direction field. Flags
  // that fail this still validate (abstract covers can be flag-incoherent),
  // but homology-side operations will refuse the track.
  if (report.valid && t.oriented()) {
    const auto place = t.placements();
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
      const auto& p0 = place[e][0];
      const auto& p1 = place[e][1];
      const bool into0 = detail::end_points_into_switch(
          *t.switch_at(p0.switch_index).divergence, p0.slot);
      const bool into1 = detail::end_points_into_switch(
          *t.switch_at(p1.switch_index).divergence, p1.slot);
      if (into0 == into1) {
        report.warnings.push_back("divergence flags are not orientation-consistent at edge " +
                                  t.edge_id(static_cast<int>(e)));
      }
    }
  }

  return report;
}

inline void require_valid(const TrainTrack& t, const char* what) {
  const ValidationReport report = validate_track(t);
  if (!report.valid) {
    std::string msg = std::string(what) + ": invalid input track";
    for (const auto& v : report.violations) msg += "; " + v;
    throw std::invalid_argument(msg);
  }
}

namespace detail {

// Geometric tie-transport cocycle of the ribbon structure, in the gauge where
// every reference tie orientation puts the branch pair on its left.
inline int geometric_tie_sign(const TrainTrack& t,
                              const std::vector<std::array<EndPlacement, 2>>& place, int e) {
  const int s0 = slot_sign(place[e][0].slot);
  const int s1 = slot_sign(place[e][1].slot);
  return -s0 * s1;
}

// Spanning-tree solve of mu(s0)*mu(s1) = rhs(e) over the switch graph.
// Returns nullopt when the system is inconsistent.
inline std::optional<std::vector<int>> solve_switch_gauge(
    const TrainTrack& t, const std::vector<std::array<EndPlacement, 2>>& place,
    const std::vector<int>& rhs) {
  std::vector<int> mu(t.switch_count(), 0);
  const auto adj = switch_adjacency(t);
  for (std::size_t root = 0; root < t.switch_count(); ++root) {
    if (mu[root] != 0) continue;
    mu[root] = 1;
    std::vector<int> stack{static_cast<int>(root)};
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      for (int e : adj[s]) {
        const int a = place[e][0].switch_index;
        const int b = place[e][1].switch_index;
        const int other = (a == s) ? b : a;
        if (a == b) {
          if (rhs[e] != 1) return std::nullopt;  // loop edge forces mu(s)^2 = -1
          continue;
        }
        if (mu[other] == 0) {
          mu[other] = rhs[e] * mu[s];
          stack.push_back(other);
        } else if (mu[other] * mu[s] != rhs[e]) {
          return std::nullopt;
        }
      }
    }
  }
  return mu;
}

}  // namespace detail

// True iff the tie co-orientation can be chosen consistently, i.e. the
// product of tie_transport signs around every cycle is +1. Equivalent to the
// orientation cover being disconnected.
inline bool is_orientable(const TrainTrack& t) {
  require_valid(t, "is_orientable");
  const auto place = t.placements();
  std::vector<int> rhs(t.edge_count());
  for (std::size_t e = 0; e < t.edge_count(); ++e) rhs[e] = t.tie_transport(static_cast<int>(e));
  return detail::solve_switch_gauge(t, place, rhs).has_value();
}

// The 2-fold orientation cover. Switches lift to pairs (s,+), (s,-) with the
// "+" lift left-diverging whenever the input tie_transport admits a coherent
// tie orientation (it is gauge-normalized over a spanning tree first). Edge
// lifts are glued according to the transport signs, and the deck involution
// exchanges the two lifts of everything.
inline TrainTrack orientation_cover(const TrainTrack& base) {
  require_valid(base, "orientation_cover");
  if (base.oriented() || base.has_involution())
    throw std::invalid_argument("orientation_cover: input is already oriented");

  const auto place = base.placements();
  const std::size_t E = base.edge_count();
  const std::size_t V = base.switch_count();

  // Gauge-fix tie_transport toward the geometric cocycle of the ribbon
  // structure so that divergence flags come out orientation-consistent
  // whenever possible.
  std::vector<int> eps(E);
  std::vector<int> discrepancy(E);
  for (std::size_t e = 0; e < E; ++e) {
    eps[e] = base.tie_transport(static_cast<int>(e));
    discrepancy[e] = eps[e] * detail::geometric_tie_sign(base, place, static_cast<int>(e));
  }
  if (auto mu = detail::solve_switch_gauge(base, place, discrepancy)) {
    for (std::size_t e = 0; e < E; ++e) {
      const int a = place[e][0].switch_index;
      const int b = place[e][1].switch_index;
      eps[e] *= (*mu)[a] * (*mu)[b];
    }
  }

  // Lift indices: switch s lifts to 2s ("+") and 2s+1 ("-"), edge e to
  // 2e ("+") and 2e+1 ("-"). Edge lift (e,o) has end 0 on sheet o and end 1
  // on sheet o*eps(e).
  std::vector<std::string> edge_ids(2 * E);
  for (std::size_t e = 0; e < E; ++e) {
    edge_ids[2 * e] = base.edge_id(static_cast<int>(e)) + "+";
    edge_ids[2 * e + 1] = base.edge_id(static_cast<int>(e)) + "-";
  }

  const auto lift_end = [&](const EndRef& ref, int sheet) -> EndRef {
    // Which lift of ref.edge has end ref.end on this sheet?
    int edge_sheet = sheet;
    if (ref.end == 1 && eps[ref.edge] == -1) edge_sheet = -sheet;
    const int lifted_edge = 2 * ref.edge + (edge_sheet == 1 ? 0 : 1);
    return EndRef{lifted_edge, ref.end};
  };

  std::vector<SwitchRecord> switches(2 * V);
  for (std::size_t s = 0; s < V; ++s) {
    const SwitchRecord& sw = base.switch_at(static_cast<int>(s));
    for (int sheet : {1, -1}) {
      SwitchRecord lifted;
      lifted.id = sw.id + (sheet == 1 ? "+" : "-");
      lifted.trunk = lift_end(sw.trunk, sheet);
      lifted.left = lift_end(sw.left, sheet);
      lifted.right = lift_end(sw.right, sheet);
      lifted.divergence = sheet == 1 ? Divergence::Left : Divergence::Right;
      switches[2 * s + (sheet == 1 ? 0 : 1)] = std::move(lifted);
    }
  }

  Involution iota;
  iota.switch_image.resize(2 * V);
  iota.edge_image.resize(2 * E);
  for (std::size_t s = 0; s < V; ++s) {
    iota.switch_image[2 * s] = static_cast<int>(2 * s + 1);
    iota.switch_image[2 * s + 1] = static_cast<int>(2 * s);
  }
  for (std::size_t e = 0; e < E; ++e) {
    iota.edge_image[2 * e] = static_cast<int>(2 * e + 1);
    iota.edge_image[2 * e + 1] = static_cast<int>(2 * e);
  }

  return TrainTrack(std::move(edge_ids), std::move(switches), std::nullopt, std::move(iota));
}

}  // namespace tracksym
