#include "zeroless/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "zeroless/error.hpp"
#include "zeroless/extension.hpp"
#include "zeroless/gf2_cache.hpp"
#include "zeroless/noncategoricity.hpp"
#include "zeroless/oracle.hpp"
#include "zeroless/structure.hpp"

namespace zeroless {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError("config key '" + key + "' expects an integer, got '" + value + "'");
  return out;
}

std::optional<std::vector<LambdaSet>> parse_filter(const std::string& text) {
  if (text.empty() || text == "all" || text == "default") return std::nullopt;
  std::vector<LambdaSet> gens;
  std::string_view rest = text;
  while (true) {
    auto semi = rest.find(';');
    gens.push_back(parse_lambda_set(trim(rest.substr(0, semi))));
    if (semi == std::string_view::npos) break;
    rest.remove_prefix(semi + 1);
  }
  return gens;
}

std::string filter_text(const std::optional<std::vector<LambdaSet>>& f) {
  if (!f) return "all";
  std::string out;
  for (const auto& g : *f) out += (out.empty() ? "" : ";") + g.braced();
  return out;
}

void set_key(Config& c, const std::string& key, const std::string& value) {
  if (key == "k") c.k = parse_number<int>(key, value);
  else if (key == "n") c.n = parse_number<int>(key, value);
  else if (key == "m") c.m = parse_number<int>(key, value);
  else if (key == "threads") c.threads = parse_number<int>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "budget") c.budget = parse_number<std::uint64_t>(key, value);
  else if (key == "cache_dir") c.cache_dir = value;
  else if (key == "filter") c.filter = parse_filter(value);
  else if (key == "gauge") c.gauge = GaugeMask::parse(value);
  else throw ConfigError("unknown config key '" + key + "'");
}

std::string json_scalar(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  if (key == "filter" && v.is_array()) {
    std::string out;
    for (const auto& g : v) out += (out.empty() ? "" : ";") + g.get<std::string>();
    return out;
  }
  if (key == "filter" && v.is_null()) return "all";
  throw ConfigError("config key '" + key + "' has an unsupported JSON value");
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

Gf2Vector correction_input(const Setting& st, const std::optional<std::filesystem::path>& file) {
  if (!file) return zero_correction(st);
  return correction_from_json(st, read_text(*file));
}

Config with_size(Config c, int k, int n, int m) {
  c.k = k;
  c.n = n;
  c.m = m;
  return c;
}

constexpr std::uint64_t kVerifyMaterializeCap = 200'000;

bool materializable(const Setting& st) {
  auto size = universe_size(st);
  return size && *size <= kVerifyMaterializeCap;
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration

json Config::to_json() const {
  return json{{"k", k},         {"n", n},         {"m", m},
              {"seed", seed},   {"budget", budget}, {"cache_dir", cache_dir},
              {"threads", threads}, {"filter", filter_text(filter)}, {"gauge", gauge.text()}};
}

SettingPtr Config::setting() const {
  if (m < 0) throw ConfigError("m must be non-negative");
  return make_setting(k, n, m, filter);
}

Config parse_config_text(const std::string& text, Config base) {
  const auto body = trim(text);
  if (!body.empty() && body.front() == '{') {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) set_key(base, key, json_scalar(key, value));
    return base;
  }
  std::istringstream in(body);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    set_key(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

Config load_config_file(const std::filesystem::path& path, Config base) {
  return parse_config_text(read_text(path), std::move(base));
}

void apply_environment(Config& config) {
  if (const char* dir = std::getenv(kCacheDirEnv); dir && *dir) config.cache_dir = dir;
}

// ---------------------------------------------------------------------------
// reports

std::string Table::render() const {
  std::vector<std::size_t> width(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) width[c] = columns[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::string cell = c < cells.size() ? cells[c] : "";
      if (c + 1 < columns.size()) cell.resize(width[c], ' ');
      out += (c ? "  " : "") + cell;
    }
    return trim(out).empty() ? std::string() : out.substr(0, out.find_last_not_of(' ') + 1);
  };
  std::string out;
  if (!heading.empty()) out += heading + "\n";
  out += line(columns) + "\n";
  std::size_t total = 0;
  for (auto w : width) total += w;
  out += std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') + "\n";
  for (const auto& r : rows) out += line(r) + "\n";
  return out;
}

json Report::to_json(const Config& config) const {
  return json{{"version", kVersion}, {"command", name},   {"config", config.to_json()},
              {"caches", caches},   {"success", success}, {"result", data}};
}

std::string Report::human(const Config& config) const {
  std::ostringstream out;
  out << kVersion << "  " << name << "\n";
  out << "config: k=" << config.k << " n=" << config.n << " m=" << config.m << " seed=" << config.seed
      << " filter=" << filter_text(config.filter) << " gauge=" << config.gauge.text() << "\n";
  for (const auto& c : caches)
    out << "cache: " << c["key"].get<std::string>() << " sha256=" << c["sha256"].get<std::string>() << "\n";
  for (const auto& t : tables) out << "\n" << t.render();
  out << "\nstatus: " << (success ? "ok" : "FAILED") << "\n";
  return out.str();
}

void write_report(const Report& report, const Config& config, const std::filesystem::path& dir) {
  write_text(dir / (report.name + ".json"), report.to_json(config).dump(2) + "\n");
  write_text(dir / (report.name + ".txt"), report.human(config));
}

CoboundaryImage image_for(const Config& config, GaugeMask mask, Report& report) {
  auto st = config.setting();
  CacheRecord rec;
  CoboundaryImage image = config.cache_dir.empty()
                              ? coboundary_image(st, mask)
                              : cached_coboundary_image(st, mask, config.cache_dir, &rec);
  if (config.cache_dir.empty()) rec.sha256 = sha256_hex(encode_basis_cache(image.basis_matrix));
  const auto key = image_cache_key(*st, mask);
  for (const auto& c : report.caches)
    if (c["key"] == key) return image;
  report.caches.push_back(json{{"key", key}, {"sha256", rec.sha256}});
  return image;
}

// ---------------------------------------------------------------------------
// build

Report run_build(const Config& config, const BuildOptions& opt) {
  auto st = config.setting();
  Report r;
  r.name = "build";
  Gf2Vector f = zero_correction(*st);
  if (opt.random_f) {
    std::mt19937_64 rng(config.seed);
    f = random_correction(*st, rng);
  } else if (opt.f_file) {
    f = correction_input(*st, opt.f_file);
  }
  auto e = materialize(ModelHandle(st, f));
  const auto text = structure_text(e);
  write_text(opt.output, text);
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());

  std::map<std::string, std::uint64_t> sorts;
  for (const auto& name : e.elements) ++sorts[name.substr(0, name.find(':'))];
  Table t{"sorts", {"sort", "elements"}, {}};
  json jsorts = json::object();
  for (const auto& [sort, count] : sorts) {
    t.rows.push_back({sort, std::to_string(count)});
    jsorts[sort] = count;
  }
  Table s{"symbols", {"symbol", "arity", "facts"}, {}};
  std::uint64_t facts = 0;
  for (const auto& sym : e.symbols) {
    s.rows.push_back({sym.name, std::to_string(sym.arity), std::to_string(sym.tuples.size())});
    facts += sym.tuples.size();
  }
  r.data = json{{"universe", e.size()},
                {"sorts", jsorts},
                {"symbols", e.symbols.size()},
                {"facts", facts},
                {"f", correction_to_json(*st, f)},
                {"structure_sha256", sha256_hex(bytes)}};
  r.tables = {Table{"model", {"quantity", "value"},
                    {{"universe", std::to_string(e.size())},
                     {"symbols", std::to_string(e.symbols.size())},
                     {"facts", std::to_string(facts)},
                     {"f support", std::to_string(f.popcount())}}},
              t, s};
  return r;
}

// ---------------------------------------------------------------------------
// classify

Report run_classify(const Config& config, std::size_t max_representatives) {
  Report r;
  r.name = "classify";
  auto image = image_for(config, config.gauge, r);
  const auto q = image.quotient_dimension();
  const bool symmetric = image_is_symmetric(image);
  r.data = json{{"correction_dimension", image.domain_dimension()},
                {"rank", image.rank()},
                {"quotient_dimension", q},
                {"symmetric", symmetric},
                {"gauge", config.gauge.text()}};
  Table t{"classification", {"quantity", "value"}, {}};
  t.rows.push_back({"correction dimension", std::to_string(image.domain_dimension())});
  t.rows.push_back({"rank of B", std::to_string(image.rank())});
  t.rows.push_back({"quotient dimension", std::to_string(q)});

  std::optional<ClassCount> full;
  if (q < 64) {
    const auto ident = std::uint64_t{1} << q;
    r.data["identity_classes"] = ident;
    t.rows.push_back({"identity-mode classes", std::to_string(ident)});
  } else {
    r.data["identity_classes"] = "2^" + std::to_string(q);
    t.rows.push_back({"identity-mode classes", "2^" + std::to_string(q)});
  }
  if (symmetric && q <= kMaxEnumeratedQuotient) {
    full = count_iso_classes(image, CountMode::Full);
    r.data["full_classes"] = full->count;
    t.rows.push_back({"full-mode classes", std::to_string(full->count)});
  } else {
    r.data["full_classes"] = nullptr;
    t.rows.push_back({"full-mode classes", symmetric ? "not enumerated" : "n/a (B not Sym(I)-stable)"});
  }
  json reps = json::array();
  Table rt{"representatives (bits over correction coordinates)", {"#", "f"}, {}};
  if (full) {
    for (std::size_t i = 0; i < full->representatives.size() && i < max_representatives; ++i) {
      reps.push_back(full->representatives[i].to_bitstring());
      rt.rows.push_back({std::to_string(i), full->representatives[i].to_bitstring()});
    }
  }
  r.data["representatives"] = reps;
  r.tables = {t};
  if (!rt.rows.empty()) r.tables.push_back(rt);
  return r;
}

// ---------------------------------------------------------------------------
// verify

std::vector<std::string> verify_suites() { return {"modset", "labase", "existxyz", "zerosforchoices", "contrapositive"}; }

namespace {

std::vector<Gf2Vector> all_or_sampled(const Setting& st, std::size_t exhaustive_bits, std::size_t samples,
                                      std::mt19937_64& rng, bool& exhaustive) {
  const auto d = st.correction_basis()->size();
  std::vector<Gf2Vector> out;
  exhaustive = d <= exhaustive_bits;
  if (exhaustive) {
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << d); ++w)
      out.push_back(Gf2Vector::from_words(st.correction_basis(), {w}));
  } else {
    for (std::size_t i = 0; i < samples; ++i) out.push_back(random_correction(st, rng));
  }
  return out;
}

// The oracle decides isomorphism of the models themselves, so the criterion
// compared against it is always the full-gauge one. A restricted gauge only
// refines the classes; its criterion is checked for soundness.
Report verify_modset(const Config& config, std::size_t samples) {
  Report r;
  r.name = "verify-modset";
  auto st = config.setting();
  if (!materializable(*st)) throw GuardrailError("modset needs materializable models; " + st->describe() + " is too large");
  auto image = image_for(config, GaugeMask::all(), r);
  std::optional<CoboundaryImage> restricted;
  if (!config.gauge.full()) restricted = image_for(config, config.gauge, r);
  std::mt19937_64 rng(config.seed);
  bool exhaustive = false;
  auto fs = all_or_sampled(*st, 4, samples, rng, exhaustive);
  std::vector<ExplicitStructure> es;
  for (const auto& f : fs) es.push_back(materialize(ModelHandle(st, f)));

  std::uint64_t pairs = 0, agree = 0, unknown = 0, isomorphic = 0, restricted_iso = 0, restricted_unsound = 0;
  json disagreements = json::array();
  auto check = [&](std::size_t i, std::size_t j) {
    ++pairs;
    const bool crit = iso_with_permutation(image, fs[i], fs[j]).has_value();
    auto o = brute_force_iso(es[i], es[j], config.budget);
    if (o.status == OracleStatus::Unknown) {
      ++unknown;
      return;
    }
    const bool found = o.status == OracleStatus::Found;
    isomorphic += found;
    if (found == crit) ++agree;
    else disagreements.push_back(json{{"f1", fs[i].to_bitstring()}, {"f2", fs[j].to_bitstring()}, {"criterion", crit}});
    if (restricted && iso_with_permutation(*restricted, fs[i], fs[j])) {
      ++restricted_iso;
      restricted_unsound += !found;
    }
  };
  if (exhaustive) {
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = 0; j < fs.size(); ++j) check(i, j);
  } else {
    for (std::size_t i = 0; i + 1 < fs.size(); i += 2) check(i, i + 1);
  }
  r.success = unknown == 0 && agree == pairs && restricted_unsound == 0;
  const std::string verdict = r.success ? "agree on all pairs" : "DISAGREE";
  r.data = json{{"pairs", pairs},   {"agreements", agree},         {"unknown", unknown},
                {"isomorphic_pairs", isomorphic}, {"exhaustive", exhaustive}, {"verdict", verdict},
                {"disagreements", disagreements}};
  Table t{"criterion vs brute-force oracle", {"quantity", "value"},
          {{"pairs", std::to_string(pairs)},
           {"exhaustive", yes_no(exhaustive)},
           {"isomorphic pairs", std::to_string(isomorphic)},
           {"agreements", std::to_string(agree)},
           {"oracle unknown", std::to_string(unknown)},
           {"verdict", verdict}}};
  if (restricted) {
    r.data["restricted_gauge"] = json{{"gauge", config.gauge.text()},
                                      {"equivalent_pairs", restricted_iso},
                                      {"unsound_pairs", restricted_unsound}};
    t.rows.push_back({"pairs equivalent under " + config.gauge.text(), std::to_string(restricted_iso)});
    t.rows.push_back({"of those not isomorphic", std::to_string(restricted_unsound)});
  }
  r.tables = {t};
  return r;
}

Report verify_labase(const Config& config, std::size_t samples) {
  Report r;
  r.name = "verify-labase";
  auto st = config.setting();
  auto image = image_for(config, config.gauge, r);
  std::mt19937_64 rng(config.seed);
  const bool explicit_check = materializable(*st);
  std::optional<ExplicitStructure> target;
  if (explicit_check) target = materialize(ModelHandle(st));
  const Gf2Vector zero = zero_correction(*st);

  std::uint64_t built = 0, verified = 0, roundtrips = 0, failures = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    auto g = GaugeTriple::random(*st, rng, config.gauge);
    ModelHandle N(st, coboundary(*st, g));
    auto c = zero_choice_exists(N, image);
    if (!c) {
      ++failures;
      continue;
    }
    try {
      auto iso = build_iso_from_choice(N, *c, zero);
      ++built;
      if (explicit_check) {
        auto source = materialize(N);
        auto map = materialized_map(iso, source, *target);
        if (verify_map(source, *target, map)) ++verified;
        else ++failures;
        bool back = true;
        for (std::size_t e = 0; e < source.size(); e += 7) {
          auto elem = parse_element(*st, source.elements[e]);
          back = back && element_name(iso.invert(iso.apply(elem))) == source.elements[e];
        }
        roundtrips += back;
        failures += !back;
      }
    } catch (const InternalError&) {
      ++failures;
    }
  }
  // A target f other than the choice's correction must be refused.
  bool refused = false;
  {
    auto c = canonical_choice(ModelHandle(st));
    auto wrong = zero;
    wrong.flip(0);
    try {
      build_iso_from_choice(ModelHandle(st), c, wrong);
    } catch (const PreconditionError&) {
      refused = true;
    }
  }
  r.success = failures == 0 && refused;
  r.data = json{{"samples", samples},     {"built", built},           {"materialized_checks", verified},
                {"inverse_roundtrips", roundtrips}, {"failures", failures}, {"wrong_target_refused", refused},
                {"explicit", explicit_check}};
  r.tables = {Table{"isomorphisms from gauge certificates", {"quantity", "value"},
                    {{"samples", std::to_string(samples)},
                     {"Q_s-verified isomorphisms", std::to_string(built)},
                     {"fact-by-fact verified maps", explicit_check ? std::to_string(verified) : "skipped (too large)"},
                     {"inverse round trips", std::to_string(roundtrips)},
                     {"wrong target refused", yes_no(refused)},
                     {"failures", std::to_string(failures)}}}};
  return r;
}

Report verify_existxyz(const Config& config, std::size_t samples) {
  Report r;
  r.name = "verify-existxyz";
  auto st = config.setting();
  auto image = image_for(config, config.gauge, r);
  std::mt19937_64 rng(config.seed);
  std::vector<IndexSet> ws;
  for (int size = 0; size < st->k(); ++size)
    for (const auto& w : combinations(st->n(), size)) ws.push_back(w);
  const std::size_t reps = std::max<std::size_t>(1, samples / ws.size());

  std::map<std::string, std::uint64_t> paths;
  std::uint64_t runs = 0, unsound = 0, mismatched = 0, genuine_failures = 0;
  Table t{"extension runs", {"W", "partial", "path", "criterion"}, {}};
  for (const auto& w : ws) {
    const auto dom = w_avoiding_domain(*st, w);
    for (std::size_t i = 0; i < reps; ++i) {
      for (int source = 0; source < 2; ++source) {
        ModelHandle M(st);
        std::optional<Choice> partial;
        if (source == 0) {
          M = ModelHandle(st, coboundary(*st, GaugeTriple::random(*st, rng, config.gauge)));
          auto global = zero_choice_exists(M, image);
          if (!global) continue;
          partial = restrict(*global, dom);
        } else {
          M = ModelHandle(st, random_correction(*st, rng));
          partial = random_zero_choice(M, dom, rng);
          if (!partial) continue;
        }
        ++runs;
        auto out = extend_choice_w(M, w, *partial);
        const bool criterion = linear_criterion(M, *partial, ChoiceDomain::global(*st));
        ++paths[out.path];
        if (out.ok()) {
          if (!(restrict(*out.choice, dom) == *partial) || !correction_of(M, *out.choice).is_zero()) ++unsound;
        } else {
          ++genuine_failures;
        }
        if (out.ok() != criterion) ++mismatched;
        if (i == 0)
          t.rows.push_back({w.braced(), source == 0 ? "from global" : "random", out.path, yes_no(criterion)});
      }
    }
  }
  bool refused = false;
  {
    ModelHandle M(st);
    const IndexSet w = IndexSet::of({0});
    Choice bad(st, w_avoiding_domain(*st, w));
    const auto eligible = correction_domain(*st, bad.domain());
    for (std::size_t u = 0; u < st->k1_sets().size(); ++u)
      if (eligible[st->correction_index(u, 0)]) {
        auto sub = st->sub_k_sets(st->k1_sets()[u]);
        bad.set_x(st->k_index(sub[0]), 0, true);
        break;
      }
    try {
      if (!correction_of(M, bad).is_zero()) extend_choice_w(M, w, bad);
      else refused = true;  // nothing eligible to violate
    } catch (const PreconditionError&) {
      refused = true;
    }
  }
  r.success = unsound == 0 && mismatched == 0 && refused;
  json jpaths = json::object();
  for (const auto& [p, c] : paths) jpaths[p] = c;
  r.data = json{{"runs", runs},
                {"paths", jpaths},
                {"unsound", unsound},
                {"criterion_mismatches", mismatched},
                {"extension_failures", genuine_failures},
                {"nonzero_partial_refused", refused}};
  Table s{"summary", {"quantity", "value"}, {}};
  s.rows.push_back({"runs", std::to_string(runs)});
  for (const auto& [p, c] : paths) s.rows.push_back({"path " + p, std::to_string(c)});
  s.rows.push_back({"unsound results", std::to_string(unsound)});
  s.rows.push_back({"disagreements with linear criterion", std::to_string(mismatched)});
  s.rows.push_back({"nonzero partial refused", yes_no(refused)});
  r.tables = {s, t};
  return r;
}

Report verify_zeros(const Config& config, std::size_t samples) {
  Report r;
  r.name = "verify-zerosforchoices";
  auto st = config.setting();
  if (!materializable(*st))
    throw GuardrailError("zerosforchoices needs materializable models; " + st->describe() + " is too large");
  auto image = image_for(config, config.gauge, r);
  std::mt19937_64 rng(config.seed);
  std::uint64_t ok = 0, failed = 0;
  {
    ModelHandle M0(st);
    auto rep = zero_correction_implies_canonical(materialize(M0), canonical_choice(M0));
    (rep.success ? ok : failed) += 1;
  }
  for (std::size_t i = 0; i < samples; ++i) {
    ModelHandle M(st, coboundary(*st, GaugeTriple::random(*st, rng, config.gauge)));
    auto c = zero_choice_exists(M, image);
    if (!c) {
      ++failed;
      continue;
    }
    auto rep = zero_correction_implies_canonical(materialize(M), *c);
    (rep.success ? ok : failed) += 1;
  }
  bool refused = false;
  try {
    ModelHandle M0(st);
    zero_correction_implies_canonical(materialize(M0), Choice(st, ChoiceDomain::empty(*st)));
  } catch (const PreconditionError&) {
    refused = true;
  }
  r.success = failed == 0 && refused;
  r.data = json{{"verified", ok}, {"failed", failed}, {"malformed_refused", refused}};
  r.tables = {Table{"zero correction gives the canonical model", {"quantity", "value"},
                    {{"structures checked", std::to_string(ok + failed)},
                     {"verified isomorphisms onto M_I", std::to_string(ok)},
                     {"failures", std::to_string(failed)},
                     {"malformed choice refused", yes_no(refused)}}}};
  return r;
}

Report verify_contrapositive(const Config& config, std::size_t samples) {
  Report r;
  r.name = "verify-contrapositive";
  auto st = config.setting();
  auto image = image_for(config, config.gauge, r);
  std::mt19937_64 rng(config.seed);
  bool exhaustive = false;
  auto fs = all_or_sampled(*st, 12, samples, rng, exhaustive);
  const auto id = Permutation::identity(st->n());
  std::uint64_t in_b = 0, violations = 0;
  for (const auto& f : fs) {
    ModelHandle M(st, f);
    auto c = zero_choice_exists(M, image);
    if (!c) continue;
    ++in_b;
    if (star_condition(*st, f, derive_obstruction_data(M, *c), id)) ++violations;
  }
  r.success = violations == 0;
  r.data = json{{"functions", fs.size()}, {"in_B", in_b}, {"violations", violations}, {"exhaustive", exhaustive}};
  r.tables = {Table{"(*) fails for every f in B", {"quantity", "value"},
                    {{"functions", std::to_string(fs.size())},
                     {"exhaustive", yes_no(exhaustive)},
                     {"in B (choice found)", std::to_string(in_b)},
                     {"(*) witnesses found", std::to_string(violations)}}}};
  return r;
}

}  // namespace

Report run_verify(const Config& config, const std::string& suite, std::size_t samples) {
  if (suite == "modset") return verify_modset(config, samples);
  if (suite == "labase") return verify_labase(config, samples);
  if (suite == "existxyz") return verify_existxyz(config, samples);
  if (suite == "zerosforchoices") return verify_zeros(config, samples);
  if (suite == "contrapositive") return verify_contrapositive(config, samples);
  throw ConfigError("unknown verify suite '" + suite + "'");
}

// ---------------------------------------------------------------------------
// sweep

Report run_sweep(const Config& config, const SweepOptions& opt) {
  Report r;
  r.name = "sweep";
  Table t{"sweep", {"k", "n", "m", "gauge", "dim", "rank", "quotient", "id-classes", "full-classes", "witness"}, {}};
  json records = json::array();
  std::uint64_t witnesses = 0, reverified = 0;
  for (int k : opt.ks)
    for (int n = k + 1; n <= opt.n_max; ++n)
      for (int m = 0; m <= opt.m_max; ++m)
        for (const auto& mask : opt.gauges) {
          const auto c = with_size(config, k, n, m);
          json rec{{"k", k}, {"n", n}, {"m", m}, {"gauge", mask.text()}};
          try {
            auto image = image_for(c, mask, r);
            const auto st = image.setting;
            const auto q = image.quotient_dimension();
            rec["dimension"] = image.domain_dimension();
            rec["rank"] = image.rank();
            rec["quotient_dimension"] = q;
            rec["identity_classes"] = q < 64 ? json(std::uint64_t{1} << q) : json("2^" + std::to_string(q));
            auto w = find_noniso_f(image);
            rec["full_classes"] = nullptr;
            if (q == 0) rec["full_classes"] = 1;
            else if (w && w->full_classes) rec["full_classes"] = *w->full_classes;
            std::string wtext = "none";
            if (w) {
              ++witnesses;
              const bool again = !iso_with_permutation(image, w->f, zero_correction(*st)).has_value();
              reverified += again;
              rec["witness"] = json{{"f", w->f.to_bitstring()}, {"i_function", w->i_function}, {"reverified", again}};
              // Outside the full gauge this separates gauge classes, not models.
              rec["witness"]["separates"] = mask.full() ? "models" : "gauge classes";
              wtext = std::string(mask.full() ? "non-iso model" : "gauge-inequivalent") +
                      (w->i_function ? ", I-function" : "") + (again ? ", re-verified" : ", FAILED");
            } else {
              rec["witness"] = nullptr;
            }
            t.rows.push_back({std::to_string(k), std::to_string(n), std::to_string(m), mask.text(),
                              std::to_string(image.domain_dimension()), std::to_string(image.rank()),
                              std::to_string(q),
                              q < 64 ? rec["identity_classes"].dump() : "2^" + std::to_string(q),
                              rec["full_classes"].is_null() ? "-" : rec["full_classes"].dump(), wtext});
          } catch (const GuardrailError& e) {
            rec["skipped"] = e.what();
            t.rows.push_back({std::to_string(k), std::to_string(n), std::to_string(m), mask.text(), "-", "-", "-", "-",
                              "-", "skipped (guardrail)"});
          }
          records.push_back(rec);
        }
  r.success = witnesses == reverified;
  json gauges = json::array();
  for (const auto& g : opt.gauges) gauges.push_back(g.text());
  json ks = opt.ks;
  r.data = json{{"grid", json{{"k", ks}, {"n_max", opt.n_max}, {"m_max", opt.m_max}, {"gauges", gauges}}},
                {"records", records},
                {"witnesses", witnesses},
                {"witnesses_reverified", reverified}};
  r.tables = {t};
  return r;
}

// ---------------------------------------------------------------------------
// extend

Report run_extend(const Config& config, const ExtendOptions& opt) {
  Report r;
  r.name = "extend";
  auto st = config.setting();
  ModelHandle M(st, correction_input(*st, opt.f_file));
  auto partial = choice_from_json(st, read_text(opt.choice_file));
  ExtensionOutcome out;
  std::string mode;
  if (opt.w) {
    mode = "W=" + opt.w->braced();
    out = extend_choice_w(M, *opt.w, partial);
  } else if (opt.j1 && opt.j2) {
    mode = "J1=" + opt.j1->braced() + " J2=" + opt.j2->braced();
    out = full_extend(M, *opt.j1, *opt.j2, partial);
  } else {
    throw ConfigError("extend needs --w, or both --j1 and --j2");
  }
  if (out.ok() && opt.output) write_text(*opt.output, choice_to_json(*out.choice) + "\n");
  r.success = out.ok();
  r.data = json{{"mode", mode},
                {"extended", out.ok()},
                {"path", out.path},
                {"stuck", out.stuck ? json(*out.stuck) : json(nullptr)},
                {"inconsistency", out.inconsistency},
                {"trace", out.trace.lines}};
  if (out.ok()) r.data["choice"] = json::parse(choice_to_json(*out.choice));
  Table t{"extension", {"quantity", "value"},
          {{"mode", mode}, {"extended", yes_no(out.ok())}, {"path", out.path}}};
  if (out.stuck) t.rows.push_back({"stuck element", std::to_string(*out.stuck)});
  if (!out.inconsistency.empty()) {
    std::string eqs;
    for (const auto& e : out.inconsistency) eqs += (eqs.empty() ? "" : " + ") + e;
    t.rows.push_back({"inconsistent equations", eqs});
  }
  Table tr{"trace", {"line"}, {}};
  for (const auto& l : out.trace.lines) tr.rows.push_back({l});
  r.tables = {t, tr};
  return r;
}

// ---------------------------------------------------------------------------
// oracle

Report run_oracle(const Config& config, const OracleOptions& opt) {
  Report r;
  r.name = "oracle";
  std::ifstream ia(opt.a), ib(opt.b);
  if (!ia) throw ConfigError("cannot read " + opt.a.string());
  if (!ib) throw ConfigError("cannot read " + opt.b.string());
  auto a = read_structure(ia);
  auto b = read_structure(ib);
  auto o = brute_force_iso(a, b, config.budget);
  const std::string status = o.status == OracleStatus::Found  ? "isomorphic"
                             : o.status == OracleStatus::None ? "not isomorphic"
                                                              : "unknown (budget exhausted)";
  if (o.status == OracleStatus::Found && opt.map_output) {
    std::ostringstream ss;
    write_map(ss, a, b, o.map);
    write_text(*opt.map_output, ss.str());
  }
  r.success = o.status != OracleStatus::Unknown;
  r.data = json{{"status", status}, {"nodes", o.nodes}, {"reason", o.reason}, {"elements", a.size()}};
  r.tables = {Table{"brute-force isomorphism", {"quantity", "value"},
                    {{"elements", std::to_string(a.size()) + " / " + std::to_string(b.size())},
                     {"result", status},
                     {"search nodes", std::to_string(o.nodes)},
                     {"reason", o.reason.empty() ? "-" : o.reason}}}};
  return r;
}

// ---------------------------------------------------------------------------
// errors

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const GuardrailError*>(&e)) return 3;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const PreconditionError*>(&e) ||
      dynamic_cast<const MergeConflict*>(&e))
    return 2;
  return 1;
}

json error_record(const std::exception& e) {
  std::string kind = "error";
  if (dynamic_cast<const GuardrailError*>(&e)) kind = "guardrail";
  else if (dynamic_cast<const ConfigError*>(&e)) kind = "config";
  else if (dynamic_cast<const PreconditionError*>(&e)) kind = "precondition";
  else if (dynamic_cast<const MergeConflict*>(&e)) kind = "merge_conflict";
  else if (dynamic_cast<const InternalError*>(&e)) kind = "internal";
  else if (dynamic_cast<const BasisMismatch*>(&e)) kind = "basis_mismatch";
  return json{{"version", kVersion}, {"error", json{{"kind", kind}, {"message", e.what()}, {"exit", exit_code_for(e)}}}};
}

}  // namespace zeroless
