#include "resofact/codebook.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace resofact {

static_assert(std::endian::native == std::endian::little,
              "codebook file I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'R', 'E', 'S', 'O', 'F', 'C', 'B', '1'};
constexpr std::uint32_t kFileVersion = 1;

// Blocked dot product over one cached row: sum_j c[j]*re[j] + s[j]*im[j].
// Fixed-width lanes keep the reduction order deterministic while letting the
// compiler vectorize each lane independently.
float dot2_cached(const float* c, const float* s, const float* re,
                  const float* im, std::size_t n) {
  constexpr std::size_t W = 8;
  float acc_c[W] = {0}, acc_s[W] = {0};
  std::size_t j = 0;
  for (; j + W <= n; j += W) {
    for (std::size_t l = 0; l < W; ++l) {
      acc_c[l] += c[j + l] * re[j + l];
      acc_s[l] += s[j + l] * im[j + l];
    }
  }
  float tail = 0.0f;
  for (; j < n; ++j) tail += c[j] * re[j] + s[j] * im[j];
  float total = tail;
  for (std::size_t l = 0; l < W; ++l) total += acc_c[l] + acc_s[l];
  return total;
}

double dot2_exact(const double* phases, const double* re, const double* im,
                  std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += std::cos(phases[j]) * re[j] + std::sin(phases[j]) * im[j];
  }
  return acc;
}

void read_exact(std::ifstream& in, void* dst, std::size_t bytes,
                const char* what) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(bytes));
  if (!in) {
    throw std::runtime_error(std::string("Codebook::load: truncated ") + what);
  }
}

}  // namespace

Codebook::Codebook(std::vector<std::uint64_t> labels,
                   std::vector<double> phases, FpeEncoder encoder,
                   std::uint64_t seed, bool includes_identity, bool trig_cache,
                   std::size_t chunk_rows)
    : labels_(std::move(labels)),
      phases_(std::move(phases)),
      encoder_(std::move(encoder)),
      seed_(seed),
      n_(encoder_.dim()),
      includes_identity_(includes_identity),
      chunk_rows_(chunk_rows == 0 ? 256 : chunk_rows) {
  if (labels_.empty()) {
    throw std::invalid_argument("Codebook: empty label list");
  }
  if (phases_.size() != labels_.size() * n_) {
    throw std::invalid_argument("Codebook: phase matrix shape mismatch");
  }
  if (trig_cache) build_trig_cache();
}

void Codebook::build_trig_cache() {
  cos_.resize(phases_.size());
  sin_.resize(phases_.size());
  const std::size_t rows = size();
  for (std::size_t i0 = 0; i0 < rows; i0 += chunk_rows_) {
    const std::size_t i1 = std::min(rows, i0 + chunk_rows_);
    for (std::size_t idx = i0 * n_; idx < i1 * n_; ++idx) {
      cos_[idx] = static_cast<float>(std::cos(phases_[idx]));
      sin_[idx] = static_cast<float>(std::sin(phases_[idx]));
    }
  }
}

PhasorVector Codebook::row(std::size_t i) const {
  const auto ph = row_phases(i);
  return PhasorVector(std::vector<double>(ph.begin(), ph.end()));
}

std::vector<double> Codebook::coefficients_impl(const double* re,
                                                const double* im,
                                                const float* fre,
                                                const float* fim) const {
  const std::size_t rows = size();
  std::vector<double> c(rows);
  if (has_trig_cache()) {
    for (std::size_t i = 0; i < rows; ++i) {
      c[i] = static_cast<double>(dot2_cached(
          cos_.data() + i * n_, sin_.data() + i * n_, fre, fim, n_));
    }
  } else {
    for (std::size_t i = 0; i < rows; ++i) {
      c[i] = dot2_exact(phases_.data() + i * n_, re, im, n_);
    }
  }
  return c;
}

namespace {

struct QueryBuffers {
  std::vector<double> re, im;
  std::vector<float> fre, fim;
};

QueryBuffers materialize(const PhasorVector& v, bool want_float) {
  QueryBuffers q;
  const auto ph = v.phases();
  q.re.resize(ph.size());
  q.im.resize(ph.size());
  for (std::size_t j = 0; j < ph.size(); ++j) {
    q.re[j] = std::cos(ph[j]);
    q.im[j] = std::sin(ph[j]);
  }
  if (want_float) {
    q.fre.assign(q.re.begin(), q.re.end());
    q.fim.assign(q.im.begin(), q.im.end());
  }
  return q;
}

QueryBuffers materialize(const SuperposedVector& v, bool want_float) {
  QueryBuffers q;
  const auto comps = v.components();
  q.re.resize(comps.size());
  q.im.resize(comps.size());
  for (std::size_t j = 0; j < comps.size(); ++j) {
    q.re[j] = comps[j].real();
    q.im[j] = comps[j].imag();
  }
  if (want_float) {
    q.fre.assign(q.re.begin(), q.re.end());
    q.fim.assign(q.im.begin(), q.im.end());
  }
  return q;
}

}  // namespace

std::vector<double> Codebook::coefficients(const PhasorVector& v) const {
  if (v.dim() != n_) {
    throw std::invalid_argument("Codebook::coefficients: dimension mismatch");
  }
  const auto q = materialize(v, has_trig_cache());
  return coefficients_impl(q.re.data(), q.im.data(), q.fre.data(),
                           q.fim.data());
}

std::vector<double> Codebook::coefficients(const SuperposedVector& v) const {
  if (v.dim() != n_) {
    throw std::invalid_argument("Codebook::coefficients: dimension mismatch");
  }
  const auto q = materialize(v, has_trig_cache());
  return coefficients_impl(q.re.data(), q.im.data(), q.fre.data(),
                           q.fim.data());
}

namespace {

CleanupResult argmax_similarity(std::span<const double> c, std::size_t n) {
  std::size_t best = 0;
  double best_value = c[0];
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i] > best_value) {  // strict: ties keep the lowest index
      best_value = c[i];
      best = i;
    }
  }
  return {best, best_value / static_cast<double>(n)};
}

}  // namespace

CleanupResult Codebook::cleanup(const PhasorVector& v) const {
  return argmax_similarity(coefficients(v), n_);
}

CleanupResult Codebook::cleanup(const SuperposedVector& v) const {
  return argmax_similarity(coefficients(v), n_);
}

namespace {

SuperposedVector pack_complex(const std::vector<double>& re,
                              const std::vector<double>& im) {
  std::vector<std::complex<double>> out(re.size());
  for (std::size_t j = 0; j < re.size(); ++j) out[j] = {re[j], im[j]};
  return SuperposedVector(std::move(out));
}

}  // namespace

SuperposedVector Codebook::synthesize(const std::vector<double>& c) const {
  std::vector<double> out_re(n_, 0.0), out_im(n_, 0.0);
  if (has_trig_cache()) {
    // Row-major axpy over the cache, accumulated in double.
    for (std::size_t i = 0; i < size(); ++i) {
      const double ci = c[i];
      const float* cr = cos_.data() + i * n_;
      const float* sr = sin_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) {
        out_re[j] += ci * static_cast<double>(cr[j]);
        out_im[j] += ci * static_cast<double>(sr[j]);
      }
    }
  } else {
    for (std::size_t i = 0; i < size(); ++i) {
      const double ci = c[i];
      const double* ph = phases_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) {
        out_re[j] += ci * std::cos(ph[j]);
        out_im[j] += ci * std::sin(ph[j]);
      }
    }
  }
  return pack_complex(out_re, out_im);
}

SuperposedVector Codebook::project(const PhasorVector& v) const {
  return synthesize(coefficients(v));
}

SuperposedVector Codebook::project(const SuperposedVector& v) const {
  return synthesize(coefficients(v));
}

SuperposedVector Codebook::superpose_rows() const {
  std::vector<double> out_re(n_, 0.0), out_im(n_, 0.0);
  if (has_trig_cache()) {
    for (std::size_t i = 0; i < size(); ++i) {
      const float* cr = cos_.data() + i * n_;
      const float* sr = sin_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) {
        out_re[j] += static_cast<double>(cr[j]);
        out_im[j] += static_cast<double>(sr[j]);
      }
    }
  } else {
    for (std::size_t i = 0; i < size(); ++i) {
      const double* ph = phases_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) {
        out_re[j] += std::cos(ph[j]);
        out_im[j] += std::sin(ph[j]);
      }
    }
  }
  return pack_complex(out_re, out_im);
}

std::size_t Codebook::estimated_bytes(std::size_t count, std::size_t n,
                                      bool trig_cache) {
  const std::size_t entries = count * n;
  return entries * sizeof(double) +
         (trig_cache ? entries * 2 * sizeof(float) : 0);
}

void Codebook::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("Codebook::save: cannot open " + path.string());
  }
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kFileVersion;
  const std::uint32_t reserved = 0;
  const std::uint64_t n64 = n_;
  const std::uint64_t count = size();
  const double beta = encoder_.beta();
  const std::uint8_t identity = includes_identity_ ? 1 : 0;
  const std::uint8_t pad[7] = {0};
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(&reserved), sizeof(reserved));
  out.write(reinterpret_cast<const char*>(&n64), sizeof(n64));
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  out.write(reinterpret_cast<const char*>(&beta), sizeof(beta));
  out.write(reinterpret_cast<const char*>(&seed_), sizeof(seed_));
  out.write(reinterpret_cast<const char*>(&identity), sizeof(identity));
  out.write(reinterpret_cast<const char*>(pad), sizeof(pad));
  out.write(reinterpret_cast<const char*>(labels_.data()),
            static_cast<std::streamsize>(labels_.size() * sizeof(std::uint64_t)));
  const auto base = encoder_.base().phases();
  out.write(reinterpret_cast<const char*>(base.data()),
            static_cast<std::streamsize>(base.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(phases_.data()),
            static_cast<std::streamsize>(phases_.size() * sizeof(double)));
  if (!out) {
    throw std::runtime_error("Codebook::save: write failed for " +
                             path.string());
  }
}

Codebook Codebook::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("Codebook::load: cannot open " + path.string());
  }
  char magic[8];
  read_exact(in, magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("Codebook::load: bad magic in " + path.string());
  }
  std::uint32_t version = 0, reserved = 0;
  read_exact(in, &version, sizeof(version), "version");
  read_exact(in, &reserved, sizeof(reserved), "reserved");
  if (version != kFileVersion) {
    throw std::runtime_error("Codebook::load: unsupported version");
  }
  std::uint64_t n64 = 0, count = 0, seed = 0;
  double beta = 0.0;
  std::uint8_t identity = 0;
  std::uint8_t pad[7];
  read_exact(in, &n64, sizeof(n64), "dimension");
  read_exact(in, &count, sizeof(count), "count");
  read_exact(in, &beta, sizeof(beta), "beta");
  read_exact(in, &seed, sizeof(seed), "seed");
  read_exact(in, &identity, sizeof(identity), "identity flag");
  read_exact(in, pad, sizeof(pad), "padding");
  if (n64 == 0 || count == 0) {
    throw std::runtime_error("Codebook::load: empty codebook");
  }
  std::vector<std::uint64_t> labels(count);
  read_exact(in, labels.data(), count * sizeof(std::uint64_t), "labels");
  std::vector<double> base_phases(n64);
  read_exact(in, base_phases.data(), n64 * sizeof(double), "base vector");
  std::vector<double> phases(count * n64);
  read_exact(in, phases.data(), phases.size() * sizeof(double), "rows");
  FpeEncoder encoder(PhasorVector(std::move(base_phases)), beta);
  return Codebook(std::move(labels), std::move(phases), std::move(encoder),
                  seed, identity != 0, /*trig_cache=*/true, 256);
}

Codebook build_codebook(const PrimeSet& primes, std::size_t n,
                        std::uint64_t seed, const CodebookOptions& options) {
  if (primes.empty()) {
    throw std::invalid_argument("build_codebook: empty prime list");
  }
  if (n == 0) {
    throw std::invalid_argument("build_codebook: dimension must be positive");
  }
  std::uint64_t previous = 0;
  for (std::uint64_t p : primes.primes) {
    if (p <= previous) {
      throw std::invalid_argument("build_codebook: labels must be ascending");
    }
    if (!is_prime(p)) {
      throw std::invalid_argument("build_codebook: label " +
                                  std::to_string(p) + " is not prime");
    }
    previous = p;
  }

  Rng rng(seed);
  PhasorVector base = random_phasor(n, rng);
  const double beta = primes.size() >= 2
                          ? select_beta(primes.primes, options.beta_scale)
                          : options.beta_scale;
  FpeEncoder encoder(std::move(base), beta);

  std::vector<std::uint64_t> labels;
  labels.reserve(primes.size() + (options.include_identity ? 1 : 0));
  if (options.include_identity) labels.push_back(1);
  labels.insert(labels.end(), primes.primes.begin(), primes.primes.end());

  const std::size_t rows = labels.size();
  const std::size_t chunk = options.chunk_rows == 0 ? 256 : options.chunk_rows;
  std::vector<double> phases(rows * n);
  for (std::size_t i0 = 0; i0 < rows; i0 += chunk) {
    const std::size_t i1 = std::min(rows, i0 + chunk);
    for (std::size_t i = i0; i < i1; ++i) {
      if (labels[i] == 1) continue;  // identity row: all phases zero
      const PhasorVector rowv = encoder.encode_log(labels[i]);
      const auto ph = rowv.phases();
      std::copy(ph.begin(), ph.end(), phases.begin() + i * n);
    }
  }
  return Codebook(std::move(labels), std::move(phases), std::move(encoder),
                  seed, options.include_identity, options.trig_cache, chunk);
}

}  // namespace resofact
