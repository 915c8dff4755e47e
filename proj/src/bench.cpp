#include "sac/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <thread>

#include "sac/coder_stream.hpp"
#include "sac/error.hpp"

namespace sac {

namespace {

// Entropy of the set distribution induced by the symbol frequencies in u.
double empirical_semantic_entropy(std::span<const Symbol> symbols,
                                  const SynonymousPartition& partition) {
  if (symbols.empty()) return 0.0;
  std::vector<std::uint64_t> per_set(partition.set_count(), 0);
  for (const Symbol s : symbols) ++per_set[set_index_of(partition, s)];
  const double n = static_cast<double>(symbols.size());
  double h = 0.0;
  for (const auto c : per_set) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

CorpusSummary summarize(const std::vector<CompressionReport>& rows) {
  CorpusSummary s;
  double total_m = 0, total_ac = 0, total_sac = 0, total_hs = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    ++s.files;
    s.m += static_cast<double>(r.m);
    s.ac_bits += static_cast<double>(r.ac_bits);
    s.sac_bits += static_cast<double>(r.sac_bits);
    s.header_bytes += static_cast<double>(r.header_bytes);
    s.entropy += r.entropy;
    s.semantic_entropy += r.semantic_entropy;
    s.avg_ac += r.avg_ac;
    s.avg_sac += r.avg_sac;
    s.saving += r.saving;
    s.gap += r.gap;
    s.eps_quant += r.eps_quant;
    total_m += static_cast<double>(r.m);
    total_ac += static_cast<double>(r.ac_bits);
    total_sac += static_cast<double>(r.sac_bits);
    total_hs += static_cast<double>(r.m) * r.semantic_entropy;
  }
  if (s.files == 0) return s;
  const double n = static_cast<double>(s.files);
  for (double* f : {&s.m, &s.ac_bits, &s.sac_bits, &s.header_bytes, &s.entropy,
                    &s.semantic_entropy, &s.avg_ac, &s.avg_sac, &s.saving, &s.gap,
                    &s.eps_quant}) {
    *f /= n;
  }
  if (total_m > 0) {
    s.weighted_avg_ac = total_ac / total_m;
    s.weighted_avg_sac = total_sac / total_m;
    s.weighted_gap = (total_sac - total_hs) / total_m;
  }
  if (total_ac > 0) s.weighted_saving = (total_ac - total_sac) / total_ac;
  return s;
}

}  // namespace

CompressionReport compare(std::span<const Symbol> symbols, const SynonymousPartition& partition,
                          const ProbabilityTable& table, std::string file) {
  CompressionReport r;
  r.file = std::move(file);
  r.m = symbols.size();

  const Container ac = encode_stream(symbols, partition, table, CodingMode::kSyntactic);
  const Container sac = encode_stream(symbols, partition, table, CodingMode::kSemantic);

  const DecodedSequence ac_back = decode_stream(ac);
  if (!std::equal(ac_back.symbols.begin(), ac_back.symbols.end(), symbols.begin(),
                  symbols.end())) {
    throw Error(ErrorCode::kDesync, "syntactic round trip differs");
  }
  const DecodedSequence sac_back = decode_stream(sac);
  if (sac_back.sets != to_set_sequence(symbols, partition)) {
    throw Error(ErrorCode::kDesync, "semantic round trip differs");
  }

  r.ac_bits = measure_code_length(ac);
  r.sac_bits = measure_code_length(sac);
  r.header_bytes = header_bytes(sac);
  r.entropy = shannon_entropy(table);
  r.semantic_entropy = semantic_entropy(partition, table);
  if (r.m > 0) {
    const double m = static_cast<double>(r.m);
    r.avg_ac = static_cast<double>(r.ac_bits) / m;
    r.avg_sac = static_cast<double>(r.sac_bits) / m;
  }
  if (r.ac_bits > 0) {
    r.saving = (static_cast<double>(r.ac_bits) - static_cast<double>(r.sac_bits)) /
               static_cast<double>(r.ac_bits);
  }
  r.gap = r.avg_sac - r.semantic_entropy;
  r.eps_quant = empirical_semantic_entropy(symbols, partition) - r.semantic_entropy;
  return r;
}

BatchResult batch(std::span<const CorpusInput> inputs, const SynonymousPartition& partition,
                  ModelSource source, unsigned threads) {
  BatchResult result;
  result.rows.resize(inputs.size());

  if (source == ModelSource::kPooled) {
    std::vector<BlockSequence> loaded;
    for (const auto& in : inputs) {
      if (in.error.empty()) loaded.push_back(in.blocks);
    }
    try {
      result.pooled_model = estimate_model(loaded);
    } catch (const Error& e) {
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        result.rows[i].file = inputs[i].name;
        result.rows[i].error = inputs[i].error.empty() ? e.what() : inputs[i].error;
      }
      result.summary = summarize(result.rows);
      return result;
    }
  }

  auto run_one = [&](std::size_t i) {
    const CorpusInput& in = inputs[i];
    CompressionReport& row = result.rows[i];
    if (!in.error.empty()) {
      row.file = in.name;
      row.error = in.error;
      return;
    }
    try {
      const ProbabilityTable table = source == ModelSource::kPooled
                                         ? *result.pooled_model
                                         : estimate_model(std::span(&in.blocks, 1));
      row = compare(in.blocks.symbols, partition, table, in.name);
    } catch (const std::exception& e) {
      row = CompressionReport{};
      row.file = in.name;
      row.m = in.blocks.symbols.size();
      row.error = e.what();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, inputs.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < inputs.size(); i = next++) run_one(i);
      });
    }
  }

  result.summary = summarize(result.rows);
  return result;
}

BatchResult batch_files(std::span<const std::filesystem::path> files,
                        const SynonymousPartition& partition, ModelSource source,
                        unsigned threads) {
  std::vector<CorpusInput> inputs(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    inputs[i].name = files[i].string();
    try {
      std::ifstream f(files[i], std::ios::binary);
      if (!f) throw Error(ErrorCode::kIo, "cannot open " + files[i].string());
      const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(f), {}};
      inputs[i].blocks = tokenize_blocks(parse_pbm(bytes));
    } catch (const std::exception& e) {
      inputs[i].error = e.what();
    }
  }
  return batch(inputs, partition, source, threads);
}

std::string to_csv(const BatchResult& result) {
  std::string out =
      "file,m,L_AC_sebits,L_SAC_sebits,header_bytes,H_bits_pb,Hs_sebits_pb,avg_AC,avg_SAC,"
      "saving_pct,gap_sebits_pb,eps_quant,error\n";
  for (const auto& r : result.rows) {
    if (!r.error.empty()) {
      out += csv_field(r.file) + "," + std::to_string(r.m) + ",,,,,,,,,,," +
             csv_field(r.error) + "\n";
      continue;
    }
    out += csv_field(r.file) + "," + std::to_string(r.m) + "," + std::to_string(r.ac_bits) +
           "," + std::to_string(r.sac_bits) + "," + std::to_string(r.header_bytes) + "," +
           format_double(r.entropy) + "," + format_double(r.semantic_entropy) + "," +
           format_double(r.avg_ac) + "," + format_double(r.avg_sac) + "," +
           format_double(100.0 * r.saving) + "," + format_double(r.gap) + "," +
           format_double(r.eps_quant) + ",\n";
  }
  const CorpusSummary& s = result.summary;
  out += "mean," + format_double(s.m) + "," + format_double(s.ac_bits) + "," +
         format_double(s.sac_bits) + "," + format_double(s.header_bytes) + "," +
         format_double(s.entropy) + "," + format_double(s.semantic_entropy) + "," +
         format_double(s.avg_ac) + "," + format_double(s.avg_sac) + "," +
         format_double(100.0 * s.saving) + "," + format_double(s.gap) + "," +
         format_double(s.eps_quant) + ",\n";
  return out;
}

}  // namespace sac
