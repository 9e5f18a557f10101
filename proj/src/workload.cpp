#include "opcsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace opcsim {

const char* to_string(TrafficClass c) {
  switch (c) {
    case TrafficClass::Web: return "web";
    case TrafficClass::P2p: return "p2p";
    case TrafficClass::Video: return "video";
    default: return "other";
  }
}

TrafficClass traffic_class_from_string(const std::string& name) {
  if (name == "web") return TrafficClass::Web;
  if (name == "p2p") return TrafficClass::P2p;
  if (name == "video") return TrafficClass::Video;
  if (name == "other") return TrafficClass::Other;
  throw std::invalid_argument("unknown traffic class: " + name);
}

std::vector<TrafficClassParams> table_defaults(double scale) {
  if (scale < 1.0) throw std::invalid_argument("scale must be at least 1");

  struct Row {
    TrafficClass cls;
    double objects;
    SizeDistribution size;
    PopularityParams pop;
  };
  // Full-scale mix: web dominates the request volume, p2p is one huge
  // object, video is few large objects, other is many tiny unpopular ones.
  const Row rows[] = {
      {TrafficClass::Web, 195386, {6, 19929, 56.6}, {10984, 658686, 53.8, 0.8}},
      {TrafficClass::P2p, 1, {687168, 687168, 0}, {2, 2, 0, 0.0}},
      {TrafficClass::Video, 176, {8133, 16977, 5261.2}, {17, 326, 2.33, 0.1}},
      {TrafficClass::Other, 10485, {4, 5120, 0}, {1106, 22352, 15.3, 0.8}},
  };

  std::vector<TrafficClassParams> out;
  for (const Row& r : rows) {
    TrafficClassParams p;
    p.cls = r.cls;
    p.popularity = r.pop;
    const double raw = r.objects / scale;
    p.object_count = static_cast<std::uint64_t>(std::max(1.0, std::llround(raw) * 1.0));
    p.size = r.size;
    if (raw < 1.0) {
      // Keep the class's chunk volume proportional when it collapses to a
      // single object.
      p.size.median_chunks = std::max(1.0, r.size.median_chunks * raw);
      p.size.max_chunks = std::max(p.size.median_chunks, r.size.max_chunks * raw);
      p.size.std_dev_chunks = r.size.std_dev_chunks * raw;
    }
    p.size.median_chunks = std::min(p.size.median_chunks, static_cast<double>(kMaxChunkRank));
    p.size.max_chunks = std::min(p.size.max_chunks, static_cast<double>(kMaxChunkRank));
    out.push_back(p);
  }
  return out;
}

void Catalog::add(CatalogObject obj) {
  if (obj.id.name.empty()) throw std::invalid_argument("catalog object needs a name");
  if (obj.size_chunks == 0 || obj.size_chunks > kMaxChunkRank)
    throw std::invalid_argument("catalog object size out of range: " + obj.id.name);
  if (by_name_.count(obj.id.name)) throw std::invalid_argument("duplicate catalog object: " + obj.id.name);
  by_name_.emplace(obj.id.name, static_cast<std::uint32_t>(objects_.size()));
  total_chunks_ += obj.size_chunks;
  objects_.push_back(std::move(obj));
}

std::uint32_t Catalog::index_of(const ObjectId& id) const {
  auto it = by_name_.find(id.name);
  if (it == by_name_.end()) throw std::out_of_range("object not in catalog: " + id.name);
  return it->second;
}

bool Catalog::has(const ObjectId& id) const { return by_name_.count(id.name) != 0; }

namespace {

/// Log-normal with a given median m and standard deviation s:
/// mu = ln m, and with v = s^2 / m^2 the variance identity
/// e^(2 sigma^2) - e^(sigma^2) = v gives sigma^2 = ln((1 + sqrt(1 + 4v)) / 2).
double lognormal_sigma(double median, double std_dev) {
  const double v = (std_dev * std_dev) / (median * median);
  return std::sqrt(std::log((1.0 + std::sqrt(1.0 + 4.0 * v)) / 2.0));
}

std::uint32_t sample_size(const SizeDistribution& d, Rng& rng) {
  double value;
  if (d.std_dev_chunks <= 0.0) {
    value = d.median_chunks;
  } else {
    const double mu = std::log(d.median_chunks);
    const double sigma = lognormal_sigma(d.median_chunks, d.std_dev_chunks);
    value = std::exp(mu + sigma * normal01(rng));
  }
  const double clamped = std::min(std::max(std::floor(value + 0.5), 1.0), d.max_chunks);
  return static_cast<std::uint32_t>(clamped);
}

std::string object_name(TrafficClass cls, std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s/%06llu", to_string(cls),
                static_cast<unsigned long long>(index));
  return buf;
}

}  // namespace

Catalog generate_catalog(const std::vector<TrafficClassParams>& classes, std::uint64_t seed) {
  if (classes.empty()) throw std::invalid_argument("catalog needs at least one traffic class");
  for (const TrafficClassParams& p : classes) {
    if (p.object_count == 0) throw std::invalid_argument("class with zero objects");
    if (p.size.median_chunks < 1 || p.size.max_chunks < 1)
      throw std::invalid_argument("object sizes must be at least one chunk");
    if (p.size.median_chunks > p.size.max_chunks)
      throw std::invalid_argument("infeasible size distribution: median above max");
    if (p.size.max_chunks > static_cast<double>(kMaxChunkRank))
      throw std::invalid_argument("object size cap exceeds the chunk rank range");
  }

  Rng rng(seed);
  Catalog catalog;
  for (const TrafficClassParams& p : classes) {
    for (std::uint64_t i = 1; i <= p.object_count; ++i) {
      CatalogObject obj;
      obj.id = make_object_id(object_name(p.cls, i));
      obj.cls = p.cls;
      obj.size_chunks = sample_size(p.size, rng);
      catalog.add(std::move(obj));
    }
  }
  return catalog;
}

ZipfSampler::ZipfSampler(std::uint64_t n, double alpha) : n_(n), alpha_(alpha) {
  if (n == 0) throw std::invalid_argument("zipf support must be non-empty");
  if (alpha < 0) throw std::invalid_argument("zipf exponent must be non-negative");
  cdf_.resize(n);
  double acc = 0.0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    acc += std::pow(static_cast<double>(k), -alpha);
    cdf_[k - 1] = acc;
  }
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

std::uint64_t ZipfSampler::sample(Rng& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::uint64_t>(it - cdf_.begin()) + 1;
}

double ZipfSampler::probability(std::uint64_t rank) const {
  if (rank == 0 || rank > n_) return 0.0;
  const double below = rank >= 2 ? cdf_[rank - 2] : 0.0;
  return cdf_[rank - 1] - below;
}

Trace generate_requests(const Catalog& catalog, const std::vector<TrafficClassParams>& classes,
                        std::uint32_t receiver_count, std::uint32_t requests_per_receiver,
                        std::uint64_t seed) {
  if (receiver_count == 0) throw std::invalid_argument("trace needs at least one receiver");

  std::vector<std::vector<std::uint32_t>> class_objects(classes.size());
  for (std::uint32_t i = 0; i < catalog.size(); ++i) {
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if (catalog.at(i).cls == classes[c].cls) {
        class_objects[c].push_back(i);
        break;
      }
    }
  }

  const std::uint64_t total = static_cast<std::uint64_t>(receiver_count) * requests_per_receiver;

  // Class shares: objects * mean requests per object, rounded by largest
  // remainder so the counts sum exactly to the total.
  double weight_sum = 0.0;
  std::vector<double> weights(classes.size(), 0.0);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    weights[c] = static_cast<double>(class_objects[c].size()) * classes[c].popularity.mean_requests;
    weight_sum += weights[c];
  }
  if (weight_sum <= 0.0) throw std::invalid_argument("no requestable objects for any class");

  std::vector<std::uint64_t> counts(classes.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const double exact = static_cast<double>(total) * weights[c] / weight_sum;
    counts[c] = static_cast<std::uint64_t>(std::floor(exact));
    assigned += counts[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) counts[remainders[i % remainders.size()].second] += 1;

  Rng rng(seed);
  std::vector<std::uint32_t> pool;
  pool.reserve(total);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (counts[c] == 0) continue;
    if (class_objects[c].empty())
      throw std::invalid_argument(std::string("requests allocated to class '") +
                                  to_string(classes[c].cls) + "' but the catalog has none");
    // Popularity rank permutation: rank 1 is the class's hottest object.
    std::vector<std::uint32_t> by_rank = class_objects[c];
    shuffle_vec(by_rank, rng);
    ZipfSampler zipf(by_rank.size(), classes[c].popularity.zipf_alpha);
    for (std::uint64_t i = 0; i < counts[c]; ++i)
      pool.push_back(by_rank[zipf.sample(rng) - 1]);
  }

  shuffle_vec(pool, rng);

  Trace trace;
  trace.seed = seed;
  trace.per_receiver.resize(receiver_count);
  for (std::uint32_t r = 0; r < receiver_count; ++r) {
    const std::uint64_t begin = static_cast<std::uint64_t>(r) * requests_per_receiver;
    trace.per_receiver[r].assign(pool.begin() + begin, pool.begin() + begin + requests_per_receiver);
  }
  return trace;
}

void save_catalog(const Catalog& catalog, std::ostream& out) {
  out << "object_id,class,size_chunks\n";
  for (const CatalogObject& obj : catalog.objects())
    out << obj.id.name << ',' << to_string(obj.cls) << ',' << obj.size_chunks << '\n';
}

void save_catalog_file(const Catalog& catalog, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write catalog file: " + path);
  save_catalog(catalog, out);
}

Catalog load_catalog(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("catalog: empty input");
  if (line != "object_id,class,size_chunks")
    throw std::runtime_error("catalog: unexpected header: " + line);

  Catalog catalog;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t c2 = line.rfind(',');
    const std::size_t c1 = c2 == std::string::npos ? std::string::npos : line.rfind(',', c2 - 1);
    if (c1 == std::string::npos || c1 == 0)
      throw std::runtime_error("catalog: malformed line " + std::to_string(line_no));
    CatalogObject obj;
    obj.id = make_object_id(line.substr(0, c1));
    obj.cls = traffic_class_from_string(line.substr(c1 + 1, c2 - c1 - 1));
    obj.size_chunks = static_cast<std::uint32_t>(std::stoul(line.substr(c2 + 1)));
    catalog.add(std::move(obj));
  }
  return catalog;
}

Catalog load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog file: " + path);
  return load_catalog(in);
}

void save_trace(const Trace& trace, const Catalog& catalog, std::ostream& out) {
  out << "receiver_id,seq_no,object_id\n";
  for (std::uint32_t r = 0; r < trace.per_receiver.size(); ++r) {
    const auto& reqs = trace.per_receiver[r];
    for (std::uint32_t s = 0; s < reqs.size(); ++s)
      out << r << ',' << s << ',' << catalog.at(reqs[s]).id.name << '\n';
  }
}

void save_trace_file(const Trace& trace, const Catalog& catalog, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  save_trace(trace, catalog, out);
}

Trace load_trace(std::istream& in, const Catalog& catalog) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: empty input");
  if (line != "receiver_id,seq_no,object_id") throw std::runtime_error("trace: unexpected header: " + line);

  Trace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw std::runtime_error("trace: malformed line " + std::to_string(line_no));
    const std::uint64_t receiver = std::stoull(line.substr(0, c1));
    const std::uint64_t seq = std::stoull(line.substr(c1 + 1, c2 - c1 - 1));
    const std::string name = line.substr(c2 + 1);
    if (!catalog.has(ObjectId{name}))
      throw std::runtime_error("trace references unknown object '" + name + "' at line " +
                               std::to_string(line_no));
    if (receiver >= trace.per_receiver.size()) trace.per_receiver.resize(receiver + 1);
    auto& stream = trace.per_receiver[receiver];
    if (seq != stream.size())
      throw std::runtime_error("trace: receiver " + std::to_string(receiver) +
                               " sequence gap at line " + std::to_string(line_no));
    stream.push_back(catalog.index_of(ObjectId{name}));
  }
  return trace;
}

Trace load_trace_file(const std::string& path, const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  return load_trace(in, catalog);
}

}  // namespace opcsim
