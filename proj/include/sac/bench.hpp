#ifndef SAC_BENCH_HPP_
#define SAC_BENCH_HPP_

// Side-by-side measurement of plain arithmetic coding and semantic
// arithmetic coding over block sequences, per file and per corpus.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sac/edgemap.hpp"
#include "sac/model.hpp"
#include "sac/synonymy.hpp"

namespace sac {

struct CompressionReport {
  std::string file;
  std::uint64_t m = 0;              // blocks
  std::uint64_t ac_bits = 0;        // syntactic payload bits
  std::uint64_t sac_bits = 0;       // semantic payload sebits
  std::uint64_t header_bytes = 0;
  double entropy = 0.0;             // H of the table, bit/pb
  double semantic_entropy = 0.0;    // H_s of the table, sebit/pb
  double avg_ac = 0.0;              // ac_bits / m
  double avg_sac = 0.0;             // sac_bits / m
  double saving = 0.0;              // (ac - sac) / ac, a fraction
  double gap = 0.0;                 // avg_sac - semantic_entropy
  double eps_quant = 0.0;           // H_s(empirical of u) - H_s(table)
  std::string error;                // empty on success
};

// Encodes `symbols` in both modes with the same table and partition, checks
// that both containers decode (exactly for syntactic, set-exact for
// semantic) and fills every report field.
CompressionReport compare(std::span<const Symbol> symbols,
                          const SynonymousPartition& partition,
                          const ProbabilityTable& table, std::string file = {});

enum class ModelSource { kPooled, kPerFile };

struct CorpusInput {
  std::string name;
  BlockSequence blocks;
  std::string error;  // a load failure; the row is reported, not coded
};

// Unweighted means over the files without errors, plus blocks-weighted
// averages.
struct CorpusSummary {
  std::size_t files = 0;
  double m = 0, ac_bits = 0, sac_bits = 0, header_bytes = 0;
  double entropy = 0, semantic_entropy = 0, avg_ac = 0, avg_sac = 0;
  double saving = 0, gap = 0, eps_quant = 0;

  double weighted_avg_ac = 0, weighted_avg_sac = 0;
  double weighted_saving = 0, weighted_gap = 0;
};

struct BatchResult {
  std::vector<CompressionReport> rows;  // input order
  CorpusSummary summary;
  std::optional<ProbabilityTable> pooled_model;
};

// Rows come back in input order whatever order the workers finish in.
// `threads` == 0 picks the hardware concurrency.
BatchResult batch(std::span<const CorpusInput> inputs, const SynonymousPartition& partition,
                  ModelSource source, unsigned threads = 0);

// Loads PBM files (load errors land in the row's error column) then runs
// batch().
BatchResult batch_files(std::span<const std::filesystem::path> files,
                        const SynonymousPartition& partition, ModelSource source,
                        unsigned threads = 0);

// Header, one row per file, then a `mean` row.
std::string to_csv(const BatchResult& result);

}  // namespace sac

#endif  // SAC_BENCH_HPP_
