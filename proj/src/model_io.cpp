#include "dcsvm/model_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace dcsvm {

namespace {

constexpr const char* kMagic = "dcsvm-model";
constexpr int kVersion = 1;

void write_config(std::ostream& out, const ModelConfig& c, const char* kind) {
  out << kMagic << ' ' << kVersion << ' ' << kind << " kernel=" << to_string(c.kernel.family)
      << " gamma=" << format_double(c.kernel.gamma) << " degree=" << c.kernel.degree
      << " coef0=" << format_double(c.kernel.coef0) << " K=" << c.max_clusters << " n=" << c.budget
      << " C=" << format_double(c.c) << " lvq_rate=" << format_double(c.lvq_rate)
      << " seed=" << c.seed << " dim=" << c.dimension << '\n';
}

void write_set(std::ostream& out, std::size_t cls, const SupportVectorSet& set) {
  out << "set " << cls << ' ' << set.size() << '\n';
  for (const auto& m : set.members()) {
    out << (m.label > 0 ? "+1" : "-1") << ' ' << format_double(m.alpha());
    for (const auto& f : m.vector->entries()) out << ' ' << (f.index + 1) << ':' << format_double(f.value);
    out << '\n';
  }
}

void write_centroid(std::ostream& out, std::span<const double> mu) {
  out << "centroid";
  for (double v : mu) out << ' ' << format_double(v);
  out << '\n';
}

// Line-oriented reader with whitespace tokens and exact number parsing.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void next_line(const char* expect) {
    if (!std::getline(in_, line_)) fail(std::string("unexpected end of file, expected '") + expect + "'");
    ++line_no_;
    pos_ = 0;
    if (expect != nullptr && word() != expect) fail(std::string("expected '") + expect + "'");
  }

  bool at_end() {
    const auto p = line_.find_first_not_of(" \t\r", pos_);
    return p == std::string::npos;
  }

  std::string_view word() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r')) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t' && line_[pos_] != '\r') ++pos_;
    if (start == pos_) fail("missing field");
    return std::string_view(line_).substr(start, pos_ - start);
  }

  template <class T>
  T number(std::string_view tok) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    T v{};
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) fail("bad number '" + std::string(tok) + "'");
    return v;
  }
  template <class T>
  T number() { return number<T>(word()); }

  /// Reads "key=value" and returns value.
  std::string_view keyed(const char* key) {
    std::string_view tok = word();
    const std::string_view k(key);
    if (tok.size() <= k.size() || tok.substr(0, k.size()) != k || tok[k.size()] != '=') {
      fail(std::string("expected '") + key + "='");
    }
    return tok.substr(k.size() + 1);
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_no_, "model file: " + what); }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

SupportVectorSet read_set(Reader& r, const ModelConfig& cfg, std::size_t expected_cls,
                          std::unordered_map<std::uint64_t, std::vector<VectorPtr>>& pool) {
  r.next_line("set");
  if (r.number<std::size_t>() != expected_cls) r.fail("set index out of order");
  const auto count = r.number<std::size_t>();
  SupportVectorSet set(cfg.budget, cfg.c);
  std::vector<Feature> entries;
  for (std::size_t i = 0; i < count; ++i) {
    r.next_line(nullptr);
    const int y = r.number<int>();
    if (y != 1 && y != -1) r.fail("support vector label must be +1 or -1");
    const double alpha = r.number<double>();
    entries.clear();
    while (!r.at_end()) {
      std::string_view tok = r.word();
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) r.fail("expected <index>:<value>");
      const auto idx = r.number<std::uint32_t>(tok.substr(0, colon));
      if (idx == 0) r.fail("feature indices are 1-based");
      entries.push_back({idx - 1, r.number<double>(tok.substr(colon + 1))});
    }
    SparseVector v;
    try {
      v = SparseVector(entries);
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
    VectorPtr ptr;
    auto& bucket = pool[v.hash()];
    for (const auto& p : bucket) {
      if (*p == v) ptr = p;
    }
    if (!ptr) {
      ptr = std::make_shared<const SparseVector>(std::move(v));
      bucket.push_back(ptr);
    }
    try {
      set.add_member(std::move(ptr), y, y * alpha);
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
  }
  return set;
}

}  // namespace

void save_model(const ModelBundle& bundle, std::ostream& out) {
  const bool binary = std::holds_alternative<DCModel>(bundle.model);
  const ModelConfig& cfg = std::visit([](const auto& m) -> const ModelConfig& { return m.config(); }, bundle.model);
  write_config(out, cfg, binary ? "binary" : "ovr");

  out << "labels " << bundle.labels.size();
  for (const auto& l : bundle.labels) out << ' ' << l;
  out << '\n';

  if (bundle.scaling) {
    const auto& s = *bundle.scaling;
    out << "scaling minmax " << s.dimension();
    for (std::size_t j = 0; j < s.dimension(); ++j) out << ' ' << format_double(s.lo[j]) << ':' << format_double(s.hi[j]);
    out << '\n';
  } else {
    out << "scaling none\n";
  }

  if (binary) {
    const auto& m = std::get<DCModel>(bundle.model);
    out << "clusters " << m.cluster_count() << '\n';
    for (std::size_t k = 0; k < m.cluster_count(); ++k) {
      out << "cluster " << k << '\n';
      write_centroid(out, m.centroid(k));
      write_set(out, 0, m.sv_set(k));
    }
  } else {
    const auto& m = std::get<OvRModel>(bundle.model);
    out << "clusters " << m.cluster_count() << '\n';
    for (std::size_t k = 0; k < m.cluster_count(); ++k) {
      out << "cluster " << k << '\n';
      write_centroid(out, m.centroid(k));
      for (std::size_t c = 0; c < m.class_count(); ++c) write_set(out, c, m.sv_set(k, c));
    }
  }
  out << "end\n";
}

std::string save_model_string(const ModelBundle& bundle) {
  std::ostringstream ss;
  save_model(bundle, ss);
  return std::move(ss).str();
}

void save_model_file(const ModelBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  save_model(bundle, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ModelBundle load_model(std::istream& in) {
  Reader r(in);
  r.next_line(kMagic);
  if (r.number<int>() != kVersion) r.fail("unsupported format version");
  const std::string kind(r.word());
  if (kind != "binary" && kind != "ovr") r.fail("unknown model kind '" + kind + "'");

  ModelConfig cfg;
  try {
    cfg.kernel.family = parse_kernel_family(r.keyed("kernel"));
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  cfg.kernel.gamma = r.number<double>(r.keyed("gamma"));
  cfg.kernel.degree = r.number<int>(r.keyed("degree"));
  cfg.kernel.coef0 = r.number<double>(r.keyed("coef0"));
  cfg.max_clusters = r.number<std::size_t>(r.keyed("K"));
  cfg.budget = r.number<std::size_t>(r.keyed("n"));
  cfg.c = r.number<double>(r.keyed("C"));
  cfg.lvq_rate = r.number<double>(r.keyed("lvq_rate"));
  cfg.seed = r.number<std::uint64_t>(r.keyed("seed"));
  cfg.dimension = r.number<std::size_t>(r.keyed("dim"));
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }

  std::vector<std::string> labels;
  r.next_line("labels");
  const auto label_count = r.number<std::size_t>();
  for (std::size_t i = 0; i < label_count; ++i) labels.emplace_back(r.word());
  if (kind == "binary" && labels.size() != 2) r.fail("binary model needs exactly two labels");

  std::optional<ScalingRecord> scaling;
  r.next_line("scaling");
  const std::string mode(r.word());
  if (mode == "minmax") {
    ScalingRecord s;
    const auto dim = r.number<std::size_t>();
    for (std::size_t j = 0; j < dim; ++j) {
      std::string_view tok = r.word();
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) r.fail("expected <lo>:<hi>");
      s.lo.push_back(r.number<double>(tok.substr(0, colon)));
      s.hi.push_back(r.number<double>(tok.substr(colon + 1)));
    }
    scaling = std::move(s);
  } else if (mode != "none") {
    r.fail("unknown scaling '" + mode + "'");
  }

  r.next_line("clusters");
  const auto clusters = r.number<std::size_t>();
  if (clusters > cfg.max_clusters) r.fail("more clusters than K");

  auto read_centroid = [&](std::size_t k) {
    r.next_line("cluster");
    if (r.number<std::size_t>() != k) r.fail("cluster index out of order");
    r.next_line("centroid");
    std::vector<double> mu(cfg.dimension);
    for (auto& v : mu) v = r.number<double>();
    return mu;
  };

  ModelBundle bundle{DCModel(cfg), labels, std::move(scaling)};
  if (kind == "binary") {
    auto& model = std::get<DCModel>(bundle.model);
    for (std::size_t k = 0; k < clusters; ++k) {
      auto mu = read_centroid(k);
      std::unordered_map<std::uint64_t, std::vector<VectorPtr>> pool;
      model.restore_cluster(mu, read_set(r, cfg, 0, pool));
    }
  } else {
    OvRModel model(cfg, labels);
    for (std::size_t k = 0; k < clusters; ++k) {
      auto mu = read_centroid(k);
      std::unordered_map<std::uint64_t, std::vector<VectorPtr>> pool;
      std::vector<SupportVectorSet> sets;
      for (std::size_t c = 0; c < labels.size(); ++c) sets.push_back(read_set(r, cfg, c, pool));
      model.restore_cluster(mu, std::move(sets));
    }
    bundle.model = std::move(model);
  }
  r.next_line("end");
  return bundle;
}

ModelBundle load_model_string(const std::string& text) {
  std::istringstream ss(text);
  return load_model(ss);
}

ModelBundle load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_model(in);
}

}  // namespace dcsvm
