#include "pnsynth/invariants.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pnsynth {
namespace {

// One tableau row: y^T * C == a, with y >= 0 built from place rows.
struct Row {
  std::vector<int64_t> a;  // over transitions
  std::vector<int64_t> y;  // over places
};

void normalize(Row& r) {
  int64_t g = 0;
  for (int64_t v : r.a) g = std::gcd(g, v < 0 ? -v : v);
  for (int64_t v : r.y) g = std::gcd(g, v < 0 ? -v : v);
  if (g > 1) {
    for (int64_t& v : r.a) v /= g;
    for (int64_t& v : r.y) v /= g;
  }
}

std::vector<int64_t> row_key(const Row& r) {
  std::vector<int64_t> k = r.y;
  k.insert(k.end(), r.a.begin(), r.a.end());
  return k;
}

constexpr size_t kRowCap = 1u << 20;

}  // namespace

std::vector<UnitInvariant> unit_invariants(const PetriNet& net) {
  const uint32_t np = net.place_count();
  const uint32_t nt = net.transition_count();

  std::vector<Row> rows;
  rows.reserve(np);
  for (uint32_t p = 0; p < np; ++p) {
    Row r;
    r.a.resize(nt);
    for (uint32_t t = 0; t < nt; ++t) r.a[t] = net.incidence().c.at(p, t);
    r.y.assign(np, 0);
    r.y[p] = 1;
    rows.push_back(std::move(r));
  }

  // Eliminate transition columns one at a time; surviving rows satisfy
  // y^T * C = 0 on the processed prefix.
  for (uint32_t t = 0; t < nt; ++t) {
    std::vector<Row> next;
    std::set<std::vector<int64_t>> seen;
    auto push = [&](Row r) {
      normalize(r);
      if (seen.insert(row_key(r)).second) next.push_back(std::move(r));
      if (next.size() > kRowCap) {
        fail(ErrorKind::Internal, "invariant tableau exceeded " +
                                      std::to_string(kRowCap) + " rows");
      }
    };

    std::vector<size_t> pos, neg;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].a[t] == 0) {
        push(rows[i]);
      } else if (rows[i].a[t] > 0) {
        pos.push_back(i);
      } else {
        neg.push_back(i);
      }
    }
    for (size_t i : pos) {
      for (size_t j : neg) {
        const Row& ri = rows[i];
        const Row& rj = rows[j];
        const int64_t ci = ri.a[t];
        const int64_t cj = -rj.a[t];
        Row r;
        r.a.resize(nt);
        r.y.resize(np);
        for (uint32_t k = 0; k < nt; ++k) r.a[k] = cj * ri.a[k] + ci * rj.a[k];
        for (uint32_t k = 0; k < np; ++k) r.y[k] = cj * ri.y[k] + ci * rj.y[k];
        push(std::move(r));
      }
    }
    rows = std::move(next);
  }

  // Keep minimal-support semiflows only.
  std::vector<std::vector<uint32_t>> supports;
  supports.reserve(rows.size());
  for (const Row& r : rows) {
    std::vector<uint32_t> s;
    for (uint32_t p = 0; p < np; ++p) {
      if (r.y[p] != 0) s.push_back(p);
    }
    supports.push_back(std::move(s));
  }
  auto subset = [](const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };

  std::vector<UnitInvariant> out;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (supports[i].empty()) continue;
    bool minimal = true;
    for (size_t j = 0; j < rows.size() && minimal; ++j) {
      if (j != i && !supports[j].empty() && supports[j] != supports[i] &&
          subset(supports[j], supports[i])) {
        minimal = false;
      }
    }
    if (!minimal) continue;

    bool binary = true;
    for (int64_t v : rows[i].y) {
      if (v != 0 && v != 1) binary = false;
    }
    if (!binary) continue;

    int64_t tokens = 0;
    for (uint32_t p : supports[i]) tokens += net.initial_marking().test(p) ? 1 : 0;
    if (tokens != 1) continue;

    out.push_back(UnitInvariant{supports[i]});
  }

  std::sort(out.begin(), out.end(),
            [](const UnitInvariant& a, const UnitInvariant& b) { return a.places < b.places; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void require_partition(const PetriNet& net, std::span<const UnitInvariant> invariants) {
  std::vector<uint32_t> hits(net.place_count(), 0);
  for (const UnitInvariant& inv : invariants) {
    for (uint32_t p : inv.places) {
      if (p >= net.place_count()) {
        fail(ErrorKind::Internal, "invariant references place index out of range");
      }
      ++hits[p];
    }
  }
  for (uint32_t p = 0; p < net.place_count(); ++p) {
    if (hits[p] == 0) {
      fail(ErrorKind::Partition,
           "place '" + net.place(p).id + "' is covered by no unit invariant");
    }
    if (hits[p] > 1) {
      fail(ErrorKind::Partition,
           "place '" + net.place(p).id + "' is covered by more than one unit invariant");
    }
  }
}

}  // namespace

uint64_t possible_state_count(const PetriNet& net, std::span<const UnitInvariant> invariants) {
  require_partition(net, invariants);
  uint64_t count = 1;
  for (const UnitInvariant& inv : invariants) {
    const uint64_t n = inv.places.size();
    if (n != 0 && count > UINT64_MAX / n) {
      fail(ErrorKind::StateCap, "possible-state count does not fit in 64 bits");
    }
    count *= n;
  }
  return count;
}

std::vector<Marking> enumerate_possible_states(const PetriNet& net,
                                               std::span<const UnitInvariant> invariants) {
  const uint64_t count = possible_state_count(net, invariants);
  constexpr uint64_t kEnumerationCap = 1u << 24;
  if (count > kEnumerationCap) {
    fail(ErrorKind::StateCap, "refusing to materialise " + std::to_string(count) +
                                  " possible states (cap " +
                                  std::to_string(kEnumerationCap) + ")");
  }

  std::vector<Marking> out;
  out.reserve(size_t(count));
  std::vector<size_t> idx(invariants.size(), 0);
  for (uint64_t n = 0; n < count; ++n) {
    Marking m(net.place_count());
    for (size_t i = 0; i < invariants.size(); ++i) {
      m.set(invariants[i].places[idx[i]]);
    }
    out.push_back(std::move(m));
    // Odometer increment, first invariant fastest.
    for (size_t i = 0; i < idx.size(); ++i) {
      if (++idx[i] < invariants[i].places.size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

}  // namespace pnsynth
