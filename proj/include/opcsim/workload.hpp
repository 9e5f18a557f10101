#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "opcsim/chunk.hpp"
#include "opcsim/rng.hpp"

namespace opcsim {

enum class TrafficClass : std::uint8_t { Web, P2p, Video, Other };

const char* to_string(TrafficClass c);
TrafficClass traffic_class_from_string(const std::string& name);

/// Log-normal over object sizes in chunks, parameterized by median and
/// standard deviation and truncated to [1, max]. std_dev == 0 degenerates to
/// a point mass at the median.
struct SizeDistribution {
  double median_chunks = 1;
  double max_chunks = 1;
  double std_dev_chunks = 0;
};

/// Zipf popularity over the objects of one class; mean/max/std describe the
/// per-object request counts they model and feed class weighting.
struct PopularityParams {
  double mean_requests = 1;
  double max_requests = 1;
  double std_dev_requests = 0;
  double zipf_alpha = 0;
};

struct TrafficClassParams {
  TrafficClass cls = TrafficClass::Web;
  std::uint64_t object_count = 0;
  SizeDistribution size;
  PopularityParams popularity;
};

/// The four-class mix at full scale divided by `scale`: object counts shrink
/// as count/scale (at least 1); a class squeezed below one object keeps one
/// object with its size parameters scaled by the same factor, preserving the
/// class's volume share.
std::vector<TrafficClassParams> table_defaults(double scale);

struct CatalogObject {
  ObjectId id;
  TrafficClass cls = TrafficClass::Web;
  std::uint32_t size_chunks = 1;
};

/// The population of requestable objects. Order is generation order and is
/// part of the catalog's identity (traces reference objects by index).
class Catalog {
 public:
  void add(CatalogObject obj);
  const CatalogObject& at(std::uint32_t index) const { return objects_.at(index); }
  std::uint32_t index_of(const ObjectId& id) const;  // throws if unknown
  bool has(const ObjectId& id) const;
  std::uint32_t size() const { return static_cast<std::uint32_t>(objects_.size()); }
  std::uint64_t total_chunks() const { return total_chunks_; }
  const std::vector<CatalogObject>& objects() const { return objects_; }

 private:
  std::vector<CatalogObject> objects_;
  std::unordered_map<std::string, std::uint32_t> by_name_;
  std::uint64_t total_chunks_ = 0;
};

/// Draws object sizes per class. Errors on infeasible parameters
/// (median > max, zero objects). Object names are "<class>/<6-digit index>".
Catalog generate_catalog(const std::vector<TrafficClassParams>& classes, std::uint64_t seed);

/// Inverse-CDF Zipf sampler: P(rank k) proportional to k^-alpha, k in 1..n.
class ZipfSampler {
 public:
  ZipfSampler(std::uint64_t n, double alpha);
  std::uint64_t sample(Rng& rng) const;  // 1-based rank
  double probability(std::uint64_t rank) const;
  std::uint64_t support() const { return n_; }

 private:
  std::uint64_t n_;
  double alpha_;
  std::vector<double> cdf_;
};

/// Request streams per receiver; entries index into the catalog.
struct Trace {
  std::vector<std::vector<std::uint32_t>> per_receiver;
  std::uint64_t seed = 0;

  std::uint64_t request_count() const {
    std::uint64_t n = 0;
    for (const auto& r : per_receiver) n += r.size();
    return n;
  }
};

/// Builds receiver request streams: class shares weighted by object count
/// times mean request rate (largest-remainder rounding makes them exact),
/// object choice within a class is Zipf over a seeded popularity permutation,
/// and the pooled requests are shuffled and dealt evenly to receivers.
Trace generate_requests(const Catalog& catalog, const std::vector<TrafficClassParams>& classes,
                        std::uint32_t receiver_count, std::uint32_t requests_per_receiver,
                        std::uint64_t seed);

/// CSV with header "object_id,class,size_chunks".
void save_catalog(const Catalog& catalog, std::ostream& out);
void save_catalog_file(const Catalog& catalog, const std::string& path);
Catalog load_catalog(std::istream& in);
Catalog load_catalog_file(const std::string& path);

/// CSV with header "receiver_id,seq_no,object_id". Loading requires every
/// referenced object to exist in the catalog.
void save_trace(const Trace& trace, const Catalog& catalog, std::ostream& out);
void save_trace_file(const Trace& trace, const Catalog& catalog, const std::string& path);
Trace load_trace(std::istream& in, const Catalog& catalog);
Trace load_trace_file(const std::string& path, const Catalog& catalog);

}  // namespace opcsim
