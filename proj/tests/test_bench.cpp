#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sac/bench.hpp"
#include "sac/coder_stream.hpp"
#include "sac/edgemap.hpp"
#include "support.hpp"

namespace sac {
namespace {

using testing::Rng;

std::vector<CorpusInput> small_corpus(std::size_t files, std::size_t w, std::size_t h) {
  std::vector<CorpusInput> out(files);
  for (std::size_t i = 0; i < files; ++i) {
    out[i].name = "map" + std::to_string(i);
    out[i].blocks = tokenize_blocks(generate_synthetic(w, h, 500 + i));
  }
  return out;
}

std::vector<std::string> csv_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

TEST(Compare, SingletonPartitionSavesNothing) {
  Rng rng(81);
  const ProbabilityTable t({9, 3, 2, 2}, 16);
  const auto u = testing::random_sequence(rng, t, 3000);
  const auto r = compare(u, SynonymousPartition::singletons(4), t, "x");
  EXPECT_EQ(r.ac_bits, r.sac_bits);
  EXPECT_EQ(r.saving, 0.0);
  EXPECT_EQ(r.entropy, r.semantic_entropy);
  EXPECT_EQ(r.file, "x");
  EXPECT_EQ(r.m, 3000u);
}

TEST(Compare, WholeSetCostsOnlyFlush) {
  Rng rng(82);
  const ProbabilityTable t({9, 3, 2, 2}, 16);
  const auto u = testing::random_sequence(rng, t, 3000);
  const auto r = compare(u, SynonymousPartition::whole(4), t);
  EXPECT_LE(r.sac_bits, 48u);
  EXPECT_EQ(r.semantic_entropy, 0.0);
  EXPECT_GT(r.saving, 0.9);
}

TEST(Compare, FieldsAreConsistent) {
  Rng rng(83);
  const ProbabilityTable t({9, 3, 2, 2}, 16);
  const SynonymousPartition p({{0}, {1, 2}, {3}});
  const auto u = testing::random_sequence(rng, t, 5000);
  const auto r = compare(u, p, t);
  const auto c = encode_stream(u, p, t, CodingMode::kSemantic);
  EXPECT_EQ(r.sac_bits, measure_code_length(c));
  EXPECT_EQ(r.header_bytes, header_bytes(c));
  EXPECT_DOUBLE_EQ(r.avg_sac, r.sac_bits / 5000.0);
  EXPECT_DOUBLE_EQ(r.avg_ac, r.ac_bits / 5000.0);
  EXPECT_DOUBLE_EQ(r.gap, r.avg_sac - r.semantic_entropy);
  EXPECT_DOUBLE_EQ(r.saving, (double(r.ac_bits) - double(r.sac_bits)) / double(r.ac_bits));
  EXPECT_NEAR(r.semantic_entropy, semantic_entropy(p, t), 0);
  EXPECT_LT(r.saving, 1.0);
}

TEST(Compare, GapLowerBoundOnOwnStatistics) {
  // With the model equal to the sequence's own statistics the code cannot beat
  // the model's entropy by more than the quantization slack plus the few bits
  // an implicit zero tail can save.
  Rng rng(84);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = rng.uniform(2, 16);
    const auto gen = testing::random_table(rng, n, 100, false);
    auto u = testing::random_sequence(rng, gen, 20000);
    std::vector<std::uint64_t> freq(n, 0);
    for (auto s : u) ++freq[s];
    const auto t = build_from_frequencies(freq);
    const auto p = testing::random_partition(rng, n);
    const auto r = compare(u, p, t);
    EXPECT_GE(r.gap, -std::fabs(r.eps_quant) - 64.0 / 20000) << "trial " << trial;
    EXPECT_LE(r.sac_bits, r.ac_bits + 48);
  }
}

TEST(Batch, ShapeOrderAndAggregate) {
  const auto inputs = small_corpus(7, 128, 64);
  const auto p = edge2x2_partition();
  const auto serial = batch(inputs, p, ModelSource::kPerFile, 1);
  const auto threaded = batch(inputs, p, ModelSource::kPerFile, 4);
  ASSERT_EQ(serial.rows.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(serial.rows[i].file, inputs[i].name);
    EXPECT_EQ(threaded.rows[i].file, inputs[i].name);
    EXPECT_EQ(serial.rows[i].sac_bits, threaded.rows[i].sac_bits);
    EXPECT_TRUE(serial.rows[i].error.empty());
  }
  EXPECT_EQ(to_csv(serial), to_csv(threaded));
  double saving = 0, gap = 0;
  for (const auto& r : serial.rows) {
    saving += r.saving;
    gap += r.gap;
  }
  EXPECT_NEAR(serial.summary.saving, saving / 7, 1e-12);
  EXPECT_NEAR(serial.summary.gap, gap / 7, 1e-12);
  EXPECT_EQ(serial.summary.files, 7u);
  const auto lines = csv_lines(to_csv(serial));
  ASSERT_EQ(lines.size(), 1u + 7 + 1);
  EXPECT_EQ(lines[0],
            "file,m,L_AC_sebits,L_SAC_sebits,header_bytes,H_bits_pb,Hs_sebits_pb,avg_AC,"
            "avg_SAC,saving_pct,gap_sebits_pb,eps_quant,error");
  EXPECT_EQ(lines.back().rfind("mean,", 0), 0u);
}

TEST(Batch, PooledModelIsShared) {
  const auto inputs = small_corpus(5, 128, 64);
  const auto r = batch(inputs, edge2x2_partition(), ModelSource::kPooled, 2);
  ASSERT_TRUE(r.pooled_model.has_value());
  std::vector<BlockSequence> all;
  for (const auto& in : inputs) all.push_back(in.blocks);
  EXPECT_EQ(*r.pooled_model, estimate_model(all));
  for (const auto& row : r.rows) {
    EXPECT_DOUBLE_EQ(row.semantic_entropy, r.rows[0].semantic_entropy);
  }
  double l_ac = 0, l_sac = 0;
  for (const auto& row : r.rows) {
    l_ac += row.ac_bits;
    l_sac += row.sac_bits;
  }
  EXPECT_NEAR(r.summary.weighted_saving, (l_ac - l_sac) / l_ac, 1e-12);
}

TEST(Batch, ErrorsAreRecordedAndSkipped) {
  auto inputs = small_corpus(3, 64, 32);
  inputs[1].error = "Malformed: broken";
  CorpusInput blank;
  blank.name = "blank";
  inputs.push_back(blank);
  const auto r = batch(inputs, edge2x2_partition(), ModelSource::kPerFile, 2);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(r.rows[1].error, "Malformed: broken");
  EXPECT_FALSE(r.rows[3].error.empty());
  EXPECT_EQ(r.summary.files, 2u);
  const auto lines = csv_lines(to_csv(r));
  EXPECT_NE(lines[2].find("Malformed: broken"), std::string::npos);
}

TEST(Batch, FilesFromDisk) {
  const auto dir = std::filesystem::temp_directory_path() / "sac_bench_test";
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  for (int i = 0; i < 3; ++i) {
    files.push_back(dir / ("m" + std::to_string(i) + ".pbm"));
    const auto raw = serialize_pbm_raw(generate_synthetic(96, 64, 40 + i));
    std::ofstream(files.back(), std::ios::binary)
        .write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  }
  files.push_back(dir / "missing.pbm");
  {
    std::ofstream(dir / "odd.pbm") << "P1\n3 2\n000000\n";
    files.push_back(dir / "odd.pbm");
  }
  const auto r = batch_files(files, edge2x2_partition(), ModelSource::kPooled, 2);
  ASSERT_EQ(r.rows.size(), 5u);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(r.rows[i].error.empty()) << r.rows[i].error;
  EXPECT_NE(r.rows[3].error.find("Io"), std::string::npos) << r.rows[3].error;
  EXPECT_NE(r.rows[4].error.find("OddDimensions"), std::string::npos) << r.rows[4].error;
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace sac
