#pragma once

#include <cstdint>
#include <random>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "steercert/assemblage.hpp"
#include "steercert/certify.hpp"

namespace steercert {

/// Deterministic random stream: stream seeds are derived from the master
/// seed with SplitMix64 and drive an mt19937_64; uniform doubles come from
/// the top 53 bits. Poisson variates use inversion by sequential search for
/// mean <= 1000 and a rounded Box-Muller gaussian above, so datasets are
/// reproducible bit-for-bit across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed);
  Rng(uint64_t master_seed, uint64_t stream);  // independent substream

  double uniform();        // [0, 1)
  double gaussian();       // standard normal (Box-Muller)
  long long poisson(double mean);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Per-setting coincidence counts for joint projective Pauli measurements on
/// every party. Counts are integers for measured or Poisson-sampled data;
/// the noiseless flag marks expected values kept at full precision.
struct CountsDataset {
  int n_parties = 0;
  std::vector<std::vector<Pauli>> joint_settings;  // lexicographic X,Y,Z order
  std::vector<std::vector<double>> counts;         // counts[setting][outcome bits]

  struct Metadata {
    std::string source;
    double integration_time = 0.0;
    uint64_t seed = 0;
    bool noiseless = false;
  } metadata;

  int outcomes_per_setting() const { return 1 << n_parties; }
  void validate() const;
};

/// Poissonian synthetic experiment: for every joint Pauli setting the
/// outcome counts are independent Poisson with mean N * p(outcomes|settings).
/// With noiseless set, expected values N * p are stored directly.
CountsDataset synth_counts(const HermitianMatrix& rho, int n_parties, double total_per_setting,
                           uint64_t seed, bool noiseless = false);

/// Drop one party from a dataset by summing its outcomes and averaging over
/// its settings (each reduced setting keeps its per-slice totals).
CountsDataset marginalize_party(const CountsDataset& ds, int party);

/// Linear-inversion tomography of the trusted side: conditional Pauli
/// expectation values reconstruct each unnormalized member. The result is
/// flagged unvalidated; finite statistics generally leave it signalling and
/// slightly non-positive.
Assemblage counts_to_assemblage(const CountsDataset& ds, const std::vector<int>& trusted_parties);

/// Least-squares projection onto the physical set (PSD members, unit
/// normalization, non-signalling): minimizes the summed squared Frobenius
/// distance through a conic epigraph program. Physical inputs are fixed
/// points.
Assemblage project_nonsignalling(const Assemblage& a, const sdp::SolverOptions& opts = {});

struct MonteCarloSummary {
  std::string task;
  double mean = 0.0;
  double std_dev = 0.0;
  int rounds = 0;
  int failures = 0;
  std::vector<double> values;  // successful rounds, in order
};

/// Poissonian Monte Carlo error propagation: every round resamples each
/// count c as Poisson(c) and reruns `pipeline` on the resampled dataset.
/// Failed rounds are excluded from the statistics and counted.
MonteCarloSummary monte_carlo(const CountsDataset& ds,
                              const std::function<double(const CountsDataset&)>& pipeline,
                              int rounds, uint64_t seed, const std::string& task_tag = "");

/// Standard three-step pipeline for experimental data: reconstruct the raw
/// assemblage, derive the witness from its non-signalling projection, apply
/// that witness to the raw (unprojected) assemblage.
double certification_pipeline(const CountsDataset& ds, CertTask task,
                              const std::vector<int>& trusted_parties,
                              const CertOptions& opts = {});

// --- serialization (JSON schemas shared by the CLI and python bindings) ---

std::string assemblage_to_json(const Assemblage& a);
Assemblage assemblage_from_json(const std::string& text);

std::string counts_to_json(const CountsDataset& ds);
CountsDataset counts_from_json(const std::string& text);
/// CSV shim: header-free rows `bases,outcomes,count`, e.g. `XYZ,010,1234`.
CountsDataset counts_from_csv(std::istream& is);

std::string witness_to_json(const Witness& w, double achieved);
std::string montecarlo_to_json(const MonteCarloSummary& s);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace steercert
