#include "collapse/complex.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <string>

#include "collapse/errors.hpp"
#include "collapse/rng.hpp"
#include "collapse/union_find.hpp"

namespace collapse {
namespace {

constexpr std::uint32_t kMaxDimension = 15;
constexpr std::uint64_t kMaxRidges = std::uint64_t{1} << 27;

using VertexBuffer = std::array<Vertex, kMaxDimension + 2>;

}  // namespace

Complex::Complex(std::uint32_t n, std::uint32_t d)
    : n_(n), d_(d), codec_((d >= 1 && n > d && d <= kMaxDimension) ? n : 2, d + 1), facet_space_(0) {
  if (d < 1) throw InputError("dimension must be at least 1");
  if (d > kMaxDimension) throw InputError("dimension above " + std::to_string(kMaxDimension) + " is unsupported");
  if (n <= d) throw InputError("vertex count n=" + std::to_string(n) + " must exceed d=" + std::to_string(d));
  const std::uint64_t ridges = codec_.count(d);
  if (ridges > kMaxRidges) {
    throw InputError("C(n, d) = " + std::to_string(ridges) + " ridges exceeds the supported limit");
  }
  facet_space_ = codec_.count(d + 1);
  degree_.assign(ridges, 0);
  coface_xor_.assign(ridges, 0);
  free_pos_.assign(ridges, kNotFree);
}

std::vector<FacetId> Complex::facets() const {
  std::vector<FacetId> out;
  out.reserve(facets_.size());
  for (std::uint64_t f : facets_) out.push_back(FacetId{f});
  std::sort(out.begin(), out.end());
  return out;
}

void Complex::boundary_into(FacetId sigma, std::span<RidgeId> out) const {
  VertexBuffer buf{};
  const std::span<Vertex> v(buf.data(), d_ + 1);
  codec_.unrank_into(to_index(sigma), d_ + 1, v);
  // Dropping v_i shifts every later vertex down one colex position.
  std::array<std::uint64_t, kMaxDimension + 2> suffix{};
  suffix[d_ + 1] = 0;
  for (std::uint32_t j = d_ + 1; j-- > 0;) suffix[j] = suffix[j + 1] + codec_.choose(v[j], j);
  std::uint64_t prefix = 0;
  for (std::uint32_t i = 0; i <= d_; ++i) {
    out[i] = RidgeId{prefix + suffix[i + 1]};
    prefix += codec_.choose(v[i], i + 1);
  }
}

std::vector<RidgeId> Complex::boundary(FacetId sigma) const {
  if (to_index(sigma) >= facet_space_) throw InputError("facet rank out of range");
  std::vector<RidgeId> out(d_ + 1);
  boundary_into(sigma, out);
  return out;
}

void Complex::set_free(std::uint64_t ridge, bool is_free) {
  const bool was_free = free_pos_[ridge] != kNotFree;
  if (is_free == was_free) return;
  if (is_free) {
    free_pos_[ridge] = static_cast<std::uint32_t>(free_list_.size());
    free_list_.push_back(ridge);
  } else {
    const std::uint32_t pos = free_pos_[ridge];
    const std::uint64_t last = free_list_.back();
    free_list_[pos] = last;
    free_pos_[last] = pos;
    free_list_.pop_back();
    free_pos_[ridge] = kNotFree;
  }
}

void Complex::bump(RidgeId tau, FacetId sigma, int delta) {
  const std::uint64_t t = to_index(tau);
  std::uint32_t& deg = degree_[t];
  if (delta > 0) {
    if (deg == 0) ++nonisolated_;
    ++deg;
  } else {
    --deg;
    if (deg == 0) --nonisolated_;
  }
  coface_xor_[t] ^= to_index(sigma);
  set_free(t, deg == 1);
}

void Complex::add_facet(FacetId sigma) {
  if (to_index(sigma) >= facet_space_) throw InputError("facet rank out of range");
  if (!facets_.insert(to_index(sigma)).second) {
    throw InputError("facet rank " + std::to_string(to_index(sigma)) + " already present");
  }
  std::array<RidgeId, kMaxDimension + 1> ridges{};
  boundary_into(sigma, std::span(ridges.data(), d_ + 1));
  for (std::uint32_t i = 0; i <= d_; ++i) bump(ridges[i], sigma, +1);
}

void Complex::remove_facet(FacetId sigma) {
  if (facets_.erase(to_index(sigma)) == 0) {
    throw InputError("facet rank " + std::to_string(to_index(sigma)) + " not present");
  }
  std::array<RidgeId, kMaxDimension + 1> ridges{};
  boundary_into(sigma, std::span(ridges.data(), d_ + 1));
  for (std::uint32_t i = 0; i <= d_; ++i) bump(ridges[i], sigma, -1);
}

std::uint32_t Complex::degree(RidgeId tau) const {
  if (to_index(tau) >= degree_.size()) throw InputError("ridge rank out of range");
  return degree_[to_index(tau)];
}

std::vector<FacetId> Complex::cofaces(RidgeId tau) const {
  const std::uint32_t deg = degree(tau);
  std::vector<FacetId> out;
  if (deg == 0) return out;
  if (deg == 1) return {FacetId{coface_xor_[to_index(tau)]}};
  std::vector<Vertex> base = vertices(tau);
  std::vector<Vertex> candidate(d_ + 1);
  for (Vertex w = 0; w < n_; ++w) {
    if (std::binary_search(base.begin(), base.end(), w)) continue;
    auto pos = std::lower_bound(base.begin(), base.end(), w);
    std::copy(base.begin(), pos, candidate.begin());
    candidate[pos - base.begin()] = w;
    std::copy(pos, base.end(), candidate.begin() + (pos - base.begin()) + 1);
    const FacetId sigma{codec_.rank(candidate)};
    if (contains(sigma)) out.push_back(sigma);
  }
  std::sort(out.begin(), out.end());
  return out;
}

FacetId Complex::unique_coface(RidgeId tau) const {
  if (degree(tau) != 1) {
    throw PreconditionError("ridge " + std::to_string(to_index(tau)) + " is not free (degree " +
                            std::to_string(degree(tau)) + ")");
  }
  return FacetId{coface_xor_[to_index(tau)]};
}

std::vector<RidgeId> Complex::free_ridges() const {
  std::vector<RidgeId> out;
  out.reserve(free_list_.size());
  for (std::uint64_t t : free_list_) out.push_back(RidgeId{t});
  std::sort(out.begin(), out.end());
  return out;
}

CollapseResult Complex::elementary_collapse(RidgeId tau) {
  const FacetId sigma = unique_coface(tau);
  std::array<RidgeId, kMaxDimension + 1> ridges{};
  boundary_into(sigma, std::span(ridges.data(), d_ + 1));
  facets_.erase(to_index(sigma));
  CollapseResult result{tau, sigma, {}, {}};
  for (std::uint32_t i = 0; i <= d_; ++i) {
    bump(ridges[i], sigma, -1);
    if (ridges[i] == tau) continue;
    const std::uint32_t deg = degree_[to_index(ridges[i])];
    if (deg == 1) {
      result.newly_free.push_back(ridges[i]);
    } else if (deg == 0) {
      result.newly_isolated.push_back(ridges[i]);
    }
  }
  return result;
}

RidgeId Complex::ridge_id(std::span<const Vertex> vertices) const {
  if (vertices.size() != d_) throw InputError("a (d-1)-face needs exactly d vertices");
  return RidgeId{codec_.rank(vertices)};
}

FacetId Complex::facet_id(std::span<const Vertex> vertices) const {
  if (vertices.size() != d_ + 1) throw InputError("a d-face needs exactly d+1 vertices");
  return FacetId{codec_.rank(vertices)};
}

std::vector<Vertex> Complex::vertices(RidgeId tau) const { return codec_.unrank(to_index(tau), d_); }

std::vector<Vertex> Complex::vertices(FacetId sigma) const {
  return codec_.unrank(to_index(sigma), d_ + 1);
}

bool operator==(const Complex& a, const Complex& b) {
  return a.n_ == b.n_ && a.d_ == b.d_ && a.facets_ == b.facets_;
}

std::uint32_t degree(const Complex& complex, RidgeId tau) { return complex.degree(tau); }

std::vector<RidgeId> free_faces(const Complex& complex) { return complex.free_ridges(); }

CollapseResult elementary_collapse(Complex& complex, RidgeId tau) {
  return complex.elementary_collapse(tau);
}

Complex d_core(const Complex& complex, OrderPolicy policy, std::uint64_t seed) {
  Complex core = complex;
  std::vector<RidgeId> work = core.free_ridges();
  if (policy == OrderPolicy::kDeterministic) {
    std::deque<RidgeId> queue(work.begin(), work.end());
    while (!queue.empty()) {
      const RidgeId tau = queue.front();
      queue.pop_front();
      if (core.degree(tau) != 1) continue;
      for (RidgeId r : core.elementary_collapse(tau).newly_free) queue.push_back(r);
    }
  } else {
    Rng rng(seed);
    while (!work.empty()) {
      const auto pick = static_cast<std::size_t>(rng.uniform_below(work.size()));
      std::swap(work[pick], work.back());
      const RidgeId tau = work.back();
      work.pop_back();
      if (core.degree(tau) != 1) continue;
      for (RidgeId r : core.elementary_collapse(tau).newly_free) work.push_back(r);
    }
  }
  return core;
}

bool is_collapsible(const Complex& complex) { return d_core(complex).empty(); }

std::optional<std::vector<Vertex>> contains_simplex_boundary(const Complex& complex) {
  const std::uint32_t d = complex.d();
  const ColexCodec& codec = complex.codec();
  std::vector<Vertex> v(d + 1);
  std::vector<std::uint64_t> prefix(d + 2);
  std::vector<std::uint64_t> suffix(d + 2);
  for (FacetId sigma : complex.facets()) {
    codec.unrank_into(to_index(sigma), d + 1, v);
    // Each candidate (d+2)-set is visited once: sigma is the set minus its top vertex w.
    prefix[0] = 0;
    for (std::uint32_t j = 0; j <= d; ++j) prefix[j + 1] = prefix[j] + codec.choose(v[j], j + 1);
    suffix[d + 1] = 0;
    for (std::uint32_t j = d + 1; j-- > 0;) suffix[j] = suffix[j + 1] + codec.choose(v[j], j);
    for (Vertex w = v[d] + 1; w < complex.n(); ++w) {
      const std::uint64_t top = codec.choose(w, d + 1);
      bool all = true;
      for (std::uint32_t i = 0; i <= d && all; ++i) {
        all = complex.contains(FacetId{prefix[i] + suffix[i + 1] + top});
      }
      if (all) {
        std::vector<Vertex> found = v;
        found.push_back(w);
        return found;
      }
    }
  }
  return std::nullopt;
}

bool is_forest(const Complex& complex) {
  if (complex.d() != 1) throw InputError("is_forest requires a 1-dimensional complex");
  UnionFind components(complex.n());
  for (FacetId edge : complex.facets()) {
    const auto ends = complex.vertices(edge);
    if (!components.unite(ends[0], ends[1])) return false;
  }
  return true;
}

}  // namespace collapse
