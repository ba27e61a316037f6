#include "dcsvm/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace dcsvm {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.dimension != b.dimension || a.label_set != b.label_set || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.samples[i].label != b.samples[i].label || !(*a.samples[i].x == *b.samples[i].x)) return false;
  }
  return true;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::atomic<std::uint64_t> g_file_reads{0};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

bool parse_number(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty()) return false;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size() && std::isfinite(out);
}

}  // namespace

Dataset parse_sparse(std::string_view text) {
  Dataset ds;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::vector<Feature> entries;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    std::size_t i = 0;
    auto next_token = [&]() -> std::string_view {
      while (i < line.size() && is_space(line[i])) ++i;
      const std::size_t start = i;
      while (i < line.size() && !is_space(line[i])) ++i;
      return line.substr(start, i - start);
    };

    std::string_view label = next_token();
    if (label.empty() || label.front() == '#') continue;
    double numeric;
    if (!parse_number(label, numeric)) {
      throw ParseError(line_no, "non-numeric label '" + std::string(label) + "'");
    }

    entries.clear();
    long long prev = 0;
    for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "expected <index>:<value>, got '" + std::string(tok) + "'");
      }
      unsigned long long idx = 0;
      auto ir = std::from_chars(tok.data(), tok.data() + colon, idx);
      if (ir.ec != std::errc() || ir.ptr != tok.data() + colon || idx == 0 || idx > 0xffffffffULL) {
        throw ParseError(line_no, "bad feature index in '" + std::string(tok) + "'");
      }
      double value;
      if (!parse_number(tok.substr(colon + 1), value)) {
        throw ParseError(line_no, "non-numeric value in '" + std::string(tok) + "'");
      }
      if (static_cast<long long>(idx) <= prev) {
        throw ParseError(line_no, "feature indices must be strictly increasing");
      }
      prev = static_cast<long long>(idx);
      if (value != 0.0) entries.push_back({static_cast<std::uint32_t>(idx - 1), value});
    }

    auto it = std::find(ds.label_set.begin(), ds.label_set.end(), label);
    const std::size_t cls = static_cast<std::size_t>(it - ds.label_set.begin());
    if (it == ds.label_set.end()) ds.label_set.emplace_back(label);
    if (!entries.empty()) ds.dimension = std::max<std::size_t>(ds.dimension, entries.back().index + 1);
    ds.samples.push_back({std::make_shared<const SparseVector>(entries), cls});
  }
  if (ds.samples.empty()) throw ParseError(line_no, "dataset contains no samples");
  return ds;
}

Dataset parse_sparse_file(const std::filesystem::path& path) {
  g_file_reads.fetch_add(1, std::memory_order_relaxed);
  std::string text;
  if (path.extension() == ".gz") {
    gzFile f = gzopen(path.c_str(), "rb");
    if (f == nullptr) throw std::runtime_error("cannot open " + path.string());
    char buf[1 << 16];
    int got;
    while ((got = gzread(f, buf, sizeof(buf))) > 0) text.append(buf, static_cast<std::size_t>(got));
    const bool bad = got < 0;
    gzclose(f);
    if (bad) throw std::runtime_error("corrupt gzip stream in " + path.string());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    text = std::move(ss).str();
  }
  try {
    return parse_sparse(text);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

std::uint64_t file_read_count() { return g_file_reads.load(std::memory_order_relaxed); }

void write_sparse(const Dataset& ds, std::ostream& out) {
  for (const auto& s : ds.samples) {
    out << ds.label_set[s.label];
    for (const auto& f : s.x->entries()) out << ' ' << (f.index + 1) << ':' << format_double(f.value);
    out << '\n';
  }
}

std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r < threshold);
    std::swap(perm[i - 1], perm[r % bound]);
  }
  return perm;
}

Dataset shuffle(const Dataset& ds, std::uint64_t seed) {
  Dataset out;
  out.dimension = ds.dimension;
  out.label_set = ds.label_set;
  out.samples.reserve(ds.size());
  for (std::size_t i : permutation(ds.size(), seed)) out.samples.push_back(ds.samples[i]);
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("split fraction must lie in (0,1)");
  Dataset shuffled = shuffle(ds, seed);
  const auto head = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ds.size())));
  Dataset first, second;
  first.dimension = second.dimension = ds.dimension;
  first.label_set = second.label_set = ds.label_set;
  first.samples.assign(shuffled.samples.begin(), shuffled.samples.begin() + head);
  second.samples.assign(shuffled.samples.begin() + head, shuffled.samples.end());
  return {std::move(first), std::move(second)};
}

ScalingRecord ScalingRecord::fit(const Dataset& ds) {
  const std::size_t d = ds.dimension;
  ScalingRecord r;
  r.lo.assign(d, std::numeric_limits<double>::infinity());
  r.hi.assign(d, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> seen(d, 0);
  for (const auto& s : ds.samples) {
    for (const auto& f : s.x->entries()) {
      r.lo[f.index] = std::min(r.lo[f.index], f.value);
      r.hi[f.index] = std::max(r.hi[f.index], f.value);
      ++seen[f.index];
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (seen[j] < ds.size()) {  // some sample holds an implicit 0
      r.lo[j] = std::min(r.lo[j], 0.0);
      r.hi[j] = std::max(r.hi[j], 0.0);
    }
  }
  return r;
}

SparseVector ScalingRecord::apply(const SparseVector& x) const {
  const auto entries = x.entries();
  std::vector<Feature> out;
  std::size_t e = 0;
  for (std::size_t j = 0; j < lo.size(); ++j) {
    double v = 0.0;
    if (e < entries.size() && entries[e].index == j) v = entries[e++].value;
    const double span = hi[j] - lo[j];
    const double scaled = span > 0.0 ? (v - lo[j]) / span : 0.0;
    if (scaled != 0.0) out.push_back({static_cast<std::uint32_t>(j), scaled});
  }
  for (; e < entries.size(); ++e) out.push_back(entries[e]);
  return SparseVector(std::move(out));
}

Dataset ScalingRecord::apply(const Dataset& ds) const {
  Dataset out;
  out.dimension = ds.dimension;
  out.label_set = ds.label_set;
  out.samples.reserve(ds.size());
  for (const auto& s : ds.samples) {
    out.samples.push_back({std::make_shared<const SparseVector>(apply(*s.x)), s.label});
  }
  return out;
}

std::pair<Dataset, ScalingRecord> scale_features(const Dataset& ds) {
  ScalingRecord r = ScalingRecord::fit(ds);
  return {r.apply(ds), std::move(r)};
}

}  // namespace dcsvm
