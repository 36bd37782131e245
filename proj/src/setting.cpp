#include "zeroless/setting.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "zeroless/error.hpp"

namespace zeroless {

namespace {

template <class Set>
Set parse_set(std::string_view text, int limit) {
  Set out;
  if (!text.empty() && text.front() == '{' && text.back() == '}') text = text.substr(1, text.size() - 2);
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    int v = -1;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || p != item.data() + item.size() || v < 0 || v >= limit)
      throw ConfigError("bad set member '" + std::string(item) + "'");
    if (out.contains(v)) throw ConfigError("repeated set member " + std::to_string(v));
    out = out.with(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<std::int32_t> lookup_table(int n, const std::vector<IndexSet>& sets) {
  std::vector<std::int32_t> table(std::size_t{1} << n, -1);
  for (std::size_t i = 0; i < sets.size(); ++i) table[sets[i].bits] = static_cast<std::int32_t>(i);
  return table;
}

}  // namespace

IndexSet parse_index_set(std::string_view text) { return parse_set<IndexSet>(text, 32); }
LambdaSet parse_lambda_set(std::string_view text) { return parse_set<LambdaSet>(text, 32); }

std::vector<IndexSet> combinations(int n, int r) {
  std::vector<IndexSet> out;
  if (r < 0 || r > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(r));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    IndexSet s;
    for (int a : idx) s = s.with(a);
    out.push_back(s);
    int i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t b = 1;
  for (int i = 1; i <= r; ++i) b = b * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  return b;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size());
  for (int v : image_) {
    if (v < 0 || static_cast<std::size_t>(v) >= image_.size() || seen[static_cast<std::size_t>(v)])
      throw PreconditionError("not a permutation");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  return Permutation(std::move(image));
}

Permutation Permutation::unrank(int n, std::uint64_t rank) {
  if (rank >= factorial(n)) throw PreconditionError("permutation rank out of range");
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> image;
  image.reserve(pool.size());
  for (int i = n; i >= 1; --i) {
    auto block = factorial(i - 1);
    auto pick = static_cast<std::size_t>(rank / block);
    rank %= block;
    image.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return Permutation(std::move(image));
}

IndexSet Permutation::apply(IndexSet s) const {
  IndexSet out;
  for (int a : s.members()) out = out.with((*this)(a));
  return out;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[static_cast<std::size_t>(image_[i])] = static_cast<int>(i);
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& inner) const {
  if (inner.size() != size()) throw PreconditionError("permutation sizes differ");
  std::vector<int> out(image_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(inner(static_cast<int>(i)));
  return Permutation(std::move(out));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < image_.size(); ++i)
    if (image_[i] != static_cast<int>(i)) return false;
  return true;
}

std::string Permutation::text() const {
  std::string out = "[";
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(image_[i]);
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// Setting

Setting::Setting(int k, int n, int m, std::optional<std::vector<LambdaSet>> filter_generators)
    : k_(k), n_(n), m_(m), generators_(std::move(filter_generators)) {
  if (k < 2) throw ConfigError("k must be at least 2 (got " + std::to_string(k) + ")");
  if (m < 0) throw ConfigError("m must be non-negative");
  if (n < k) throw ConfigError("n must be at least k (got n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  if (n > kMaxN) throw GuardrailError("n=" + std::to_string(n) + " exceeds the limit " + std::to_string(kMaxN));
  if (m > kMaxM) throw GuardrailError("m=" + std::to_string(m) + " exceeds the limit " + std::to_string(kMaxM));
  if (k > kMaxK) throw GuardrailError("k=" + std::to_string(k) + " exceeds the limit " + std::to_string(kMaxK));

  if (generators_) {
    for (auto g : *generators_)
      if (!g.subset_of(lambda())) throw ConfigError("filter generator " + g.braced() + " is not a subset of Λ");
    for (auto g : *generators_) core_ = core_ | g;
  } else {
    core_ = lambda();
  }

  k_sets_ = combinations(n, k);
  k1_sets_ = combinations(n, k + 1);
  k_lookup_ = lookup_table(n, k_sets_);
  k1_lookup_ = lookup_table(n, k1_sets_);

  std::vector<std::string> s_labels, h_labels, ks_labels, corr_labels;
  for (std::size_t i = 0; i < s_count(); ++i) s_labels.push_back(s_element(i).braced());
  for (auto v : k_sets_) {
    h_labels.push_back(v.braced());
    for (auto& s : s_labels) ks_labels.push_back(v.braced() + "|" + s);
  }
  for (auto u : k1_sets_)
    for (auto& s : s_labels) corr_labels.push_back(u.braced() + "|" + s);
  s_basis_ = make_basis(std::move(s_labels));
  h_basis_ = make_basis(std::move(h_labels));
  kset_s_basis_ = make_basis(std::move(ks_labels));
  corr_basis_ = make_basis(std::move(corr_labels));
}

std::size_t Setting::s_index(LambdaSet s) const {
  if (!s.subset_of(lambda())) throw PreconditionError(s.braced() + " is not a subset of Λ");
  return s.bits;
}

std::optional<std::size_t> Setting::find_k_index(IndexSet u) const {
  if (!u.subset_of(index_set())) return std::nullopt;
  auto i = k_lookup_[u.bits];
  if (i < 0) return std::nullopt;
  return static_cast<std::size_t>(i);
}

std::optional<std::size_t> Setting::find_k1_index(IndexSet u) const {
  if (!u.subset_of(index_set())) return std::nullopt;
  auto i = k1_lookup_[u.bits];
  if (i < 0) return std::nullopt;
  return static_cast<std::size_t>(i);
}

std::size_t Setting::k_index(IndexSet u) const {
  if (auto i = find_k_index(u)) return *i;
  throw PreconditionError(u.braced() + " is not a k-subset of I");
}

std::size_t Setting::k1_index(IndexSet u) const {
  if (auto i = find_k1_index(u)) return *i;
  throw PreconditionError(u.braced() + " is not a (k+1)-subset of I");
}

std::vector<IndexSet> Setting::sub_k_sets(IndexSet u) const {
  if (u.size() != k_ + 1) throw PreconditionError(u.braced() + " does not have k+1 members");
  std::vector<IndexSet> out;
  out.reserve(static_cast<std::size_t>(k_ + 1));
  for (int a : u.members()) out.push_back(u.without(a));
  return out;
}

std::size_t Setting::g_dimension() const {
  return s_count() - (std::size_t{1} << (m_ - core_.size()));
}

std::string Setting::describe() const {
  return "k=" + std::to_string(k_) + " n=" + std::to_string(n_) + " m=" + std::to_string(m_);
}

SettingPtr make_setting(int k, int n, int m, std::optional<std::vector<LambdaSet>> filter_generators) {
  return std::make_shared<const Setting>(k, n, m, std::move(filter_generators));
}

bool filter_contains(const Setting& setting, const Gf2Vector& family) {
  require_same_basis(family.basis(), setting.s_basis(), "filter_contains");
  for (std::size_t s = 0; s < setting.s_count(); ++s)
    if (setting.in_core_cone(s) && !family.get(s)) return false;
  return true;
}

bool g_membership(const Setting& setting, const Gf2Vector& g) {
  require_same_basis(g.basis(), setting.s_basis(), "g_membership");
  for (std::size_t s = 0; s < setting.s_count(); ++s)
    if (setting.in_core_cone(s) && g.get(s)) return false;
  return true;
}

Gf2Matrix g_basis(const Setting& setting) {
  std::vector<std::string> labels;
  std::vector<Gf2Vector> rows;
  for (std::size_t s = 0; s < setting.s_count(); ++s) {
    if (setting.in_core_cone(s)) continue;
    labels.push_back("g:" + setting.s_element(s).braced());
    rows.push_back(Gf2Vector::unit(setting.s_basis(), s));
  }
  return Gf2Matrix(make_basis(std::move(labels)), setting.s_basis(), std::move(rows));
}

std::vector<Gf2Vector> enumerate_g(const Setting& setting) {
  std::vector<std::size_t> free;
  for (std::size_t s = 0; s < setting.s_count(); ++s)
    if (!setting.in_core_cone(s)) free.push_back(s);
  if (free.size() > 24) throw GuardrailError("G has 2^" + std::to_string(free.size()) + " elements");
  std::vector<Gf2Vector> out;
  out.reserve(std::size_t{1} << free.size());
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << free.size()); ++c) {
    Gf2Vector g(setting.s_basis());
    for (std::size_t j = 0; j < free.size(); ++j)
      if ((c >> j) & 1u) g.set(free[j]);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace zeroless
