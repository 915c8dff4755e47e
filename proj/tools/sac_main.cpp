// sac: command-line front end for semantic arithmetic coding of edge maps.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sac/bench.hpp"
#include "sac/coder_exact.hpp"
#include "sac/coder_stream.hpp"
#include "sac/edgemap.hpp"
#include "sac/error.hpp"
#include "sac/model.hpp"
#include "sac/reconstruct.hpp"
#include "sac/synonymy.hpp"

namespace fs = std::filesystem;
using namespace sac;

namespace {

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string read_text(const std::string& path) {
  const auto bytes = read_bytes(path);
  return {bytes.begin(), bytes.end()};
}

void write_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path);
}

void write_text(const std::string& path, const std::string& text) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

SynonymousPartition load_partition(const std::string& path) {
  if (path.empty()) return edge2x2_partition();
  return parse_partition_file(read_text(path), Alphabet(kBlockAlphabetSize));
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// verify: exhaustive code-length bound sweep plus random stream-vs-exact checks.
struct VerifyOptions {
  std::uint64_t max_m = 8;
  std::size_t alphabet = 4;
  std::uint64_t trials = 500;
  std::uint64_t seed = 1;
};

std::pair<ProbabilityTable, SynonymousPartition> verify_model(std::size_t n, std::uint64_t seed) {
  if (n == 4) return {ProbabilityTable({7, 3, 3, 3}, 16), SynonymousPartition({{0}, {1, 2}, {3}})};
  // Deterministic stand-in for other alphabet sizes: counts in [1, 8] and
  // adjacent symbols paired into sets.
  std::vector<std::uint32_t> counts(n);
  for (std::size_t i = 0; i < n; ++i) counts[i] = 1 + SplitMix64::at(seed, i) % 8;
  std::vector<std::vector<Symbol>> sets;
  for (Symbol s = 0; s < n; s += 2) {
    sets.push_back(s + 1 < n ? std::vector<Symbol>{s, s + 1} : std::vector<Symbol>{s});
  }
  return {ProbabilityTable::from_counts(std::move(counts)), SynonymousPartition(std::move(sets))};
}

std::string join(std::span<const Symbol> u) {
  std::string out = "[";
  for (std::size_t i = 0; i < u.size(); ++i) out += (i ? "," : "") + std::to_string(u[i]);
  return out + "]";
}

int run_verify(const VerifyOptions& opt) {
  const auto [table, partition] = verify_model(opt.alphabet, opt.seed);
  const auto seq = PartitionSequence::unified(partition);
  std::uint64_t checked = 0;
  std::vector<Symbol> u;
  for (std::uint64_t m = 0; m <= opt.max_m; ++m) {
    u.assign(m, 0);
    for (;;) {
      const auto b = code_length_bound(u, seq, table);
      ++checked;
      if (!b.holds) {
        std::cout << "counterexample: u=" << join(u) << " code_length=" << b.code_length
                  << " bound=" << fixed(b.bound) << "\n";
        return 1;
      }
      std::size_t i = 0;
      while (i < m && ++u[i] == opt.alphabet) u[i++] = 0;
      if (i == m) break;
    }
  }
  std::cout << "bound: " << checked << " sequences with m <= " << opt.max_m << " hold\n";

  SplitMix64 rng(opt.seed);
  for (std::uint64_t trial = 0; trial < opt.trials; ++trial) {
    const std::size_t n = 1 + rng.next() % 16;
    std::vector<std::uint32_t> counts(n);
    for (auto& c : counts) c = static_cast<std::uint32_t>(rng.next() % 4096);
    counts[rng.next() % n] += 1;
    const auto t = ProbabilityTable::from_counts(counts);
    const std::size_t k = 1 + rng.next() % n;
    std::vector<std::vector<Symbol>> sets(k);
    for (Symbol s = 0; s < n; ++s) sets[s < k ? s : rng.next() % k].push_back(s);
    const SynonymousPartition p(std::move(sets));
    std::vector<Symbol> msg(rng.next() % 65);
    for (auto& s : msg) {
      std::uint64_t target = rng.next() % t.total();
      Symbol v = 0;
      while (target >= t.count(v)) target -= t.count(v++);
      s = v;
    }
    const auto stream = encode_stream(msg, p, t, CodingMode::kSemantic);
    const auto exact = encode_exact_detailed(msg, PartitionSequence::unified(p), t);
    const auto from_stream = decode_stream(stream).sets;
    const auto from_exact =
        decode_exact(exact.code, msg.size(), PartitionSequence::unified(p), t).sets;
    const auto limit = static_cast<std::uint64_t>(ceil_neg_log2(exact.interval.length)) + 48;
    if (from_stream != from_exact || measure_code_length(stream) > limit) {
      std::cout << "counterexample: trial " << trial << " u=" << join(msg)
                << " stream_bits=" << measure_code_length(stream) << " limit=" << limit << "\n";
      return 1;
    }
  }
  std::cout << "oracle: " << opt.trials << " stream-vs-exact trials agree\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic arithmetic coding for binary edge maps"};
  app.require_subcommand(1);
  std::function<int()> action;

  // encode
  std::string enc_input, enc_partition, enc_model, enc_output, enc_mode = "semantic";
  bool enc_estimate = false;
  auto* enc = app.add_subcommand("encode", "Compress a PBM edge map into a container");
  enc->add_option("--input,-i", enc_input, "PBM file (P1 or P4)")->required();
  enc->add_option("--partition,-p", enc_partition, "Partition file (default: built-in 11-set)");
  auto* model_opt = enc->add_option("--model", enc_model, "Model sidecar file");
  enc->add_flag("--estimate", enc_estimate, "Estimate the model from the input (default)")
      ->excludes(model_opt);
  enc->add_option("--mode", enc_mode, "semantic or syntactic")
      ->check(CLI::IsMember({"semantic", "syntactic"}));
  enc->add_option("--output,-o", enc_output, "Container file")->required();
  enc->callback([&] {
    action = [&] {
      const auto partition = load_partition(enc_partition);
      const auto blocks = tokenize_blocks(parse_pbm(read_bytes(enc_input)));
      const ProbabilityTable table = enc_model.empty()
                                         ? estimate_model(std::span(&blocks, 1))
                                         : parse_model(read_text(enc_model));
      const auto mode = enc_mode == "semantic" ? CodingMode::kSemantic : CodingMode::kSyntactic;
      const auto container = encode_stream(blocks.symbols, partition, table, mode);
      write_bytes(enc_output, serialize_container(container));
      std::cout << "m " << container.length << "\n"
                << "mode " << to_string(mode) << "\n"
                << "payload_sebits " << measure_code_length(container) << "\n"
                << "header_bytes " << header_bytes(container) << "\n";
      return 0;
    };
  });

  // decode
  std::string dec_input, dec_partition, dec_model, dec_output, dec_policy = "canonical",
                                                               dec_format = "plain";
  std::uint64_t dec_seed = 0;
  std::size_t dec_width = 0;
  auto* dec = app.add_subcommand("decode", "Reconstruct a PBM edge map from a container");
  dec->add_option("--input,-i", dec_input, "Container file")->required();
  dec->add_option("--partition,-p", dec_partition,
                  "Partition file; must match the container's");
  dec->add_option("--model", dec_model, "Model sidecar file; must match the container's");
  dec->add_option("--export-policy", dec_policy, "canonical, argmax or random")
      ->check(CLI::IsMember({"canonical", "argmax", "random", "weighted-random"}));
  dec->add_option("--seed", dec_seed, "Seed for the random export policy");
  dec->add_option("--width", dec_width,
                  "Map width in pixels (default: one block row of width 2m)");
  dec->add_option("--format", dec_format, "plain (P1) or raw (P4)")
      ->check(CLI::IsMember({"plain", "raw"}));
  dec->add_option("--output,-o", dec_output, "PBM file")->required();
  dec->callback([&] {
    action = [&] {
      const auto container = parse_container(read_bytes(dec_input));
      const auto partition =
          dec_partition.empty() ? container.partition : load_partition(dec_partition);
      const auto table = dec_model.empty() ? container.table : parse_model(read_text(dec_model));
      const ExportPolicy policy{*parse_export_kind(dec_policy), dec_seed};
      const auto decoded = decode_stream(container, partition, table, policy);
      BlockSequence blocks;
      blocks.symbols = decoded.symbols;
      const std::uint64_t m = container.length;
      if (dec_width == 0) {
        blocks.blocks_wide = m;
        blocks.blocks_high = m > 0 ? 1 : 0;
      } else {
        if (dec_width % 2 != 0) {
          throw Error(ErrorCode::kOddDimensions, "width " + std::to_string(dec_width));
        }
        blocks.blocks_wide = dec_width / 2;
        if (m % blocks.blocks_wide != 0) {
          throw Error(ErrorCode::kLengthMismatch, std::to_string(m) + " blocks do not fill rows of " +
                                                      std::to_string(blocks.blocks_wide));
        }
        blocks.blocks_high = m / blocks.blocks_wide;
      }
      const auto map = detokenize(blocks);
      if (dec_format == "raw") {
        write_bytes(dec_output, serialize_pbm_raw(map));
      } else {
        write_text(dec_output, serialize_pbm_plain(map));
      }
      std::cout << "m " << m << "\n"
                << "size " << map.width << "x" << map.height << "\n";
      return 0;
    };
  });

  // analyze
  std::string an_input, an_partition, an_model;
  auto* an = app.add_subcommand("analyze", "Report Shannon and semantic entropy");
  an->add_option("--input,-i", an_input, "PBM file to estimate the model from");
  an->add_option("--model", an_model, "Model sidecar file (takes precedence over --input)");
  an->add_option("--partition,-p", an_partition, "Partition file (default: built-in 11-set)");
  an->callback([&] {
    action = [&] {
      if (an_input.empty() && an_model.empty()) {
        throw CLI::RequiredError("--input or --model");
      }
      std::optional<BlockSequence> blocks;
      if (!an_input.empty()) blocks = tokenize_blocks(parse_pbm(read_bytes(an_input)));
      const ProbabilityTable table = !an_model.empty() ? parse_model(read_text(an_model))
                                                       : estimate_model(std::span(&*blocks, 1));
      const Alphabet alphabet(table.size());
      require_valid(table, alphabet);
      const SynonymousPartition partition =
          an_partition.empty() ? edge2x2_partition()
                               : parse_partition_file(read_text(an_partition), alphabet);
      const double h = shannon_entropy(table);
      const double hs = semantic_entropy(partition, table);
      if (blocks) std::cout << "m " << blocks->symbols.size() << "\n";
      std::cout << "sets " << partition.set_count() << "\n"
                << "H_bits_pb " << fixed(h) << "\n"
                << "Hs_sebits_pb " << fixed(hs) << "\n"
                << "ideal_saving_pct " << fixed(h > 0 ? 100.0 * (h - hs) / h : 0.0, 4) << "\n";
      if (blocks) {
        const auto sets = to_set_sequence(blocks->symbols, partition);
        std::uint64_t digest = 0xcbf29ce484222325ull;
        for (const auto k : sets) digest = (digest ^ k) * 0x100000001b3ull;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
        std::cout << "set_sequence_digest " << buf << "\n";
      }
      return 0;
    };
  });

  // bench
  std::vector<std::string> bench_inputs;
  std::string bench_partition, bench_model = "pooled", bench_csv;
  unsigned bench_threads = 0;
  auto* bench = app.add_subcommand("bench", "Compare plain and semantic coding over a corpus");
  bench->add_option("inputs", bench_inputs, "PBM files or directories")->required();
  bench->add_option("--partition,-p", bench_partition, "Partition file (default: built-in 11-set)");
  bench->add_option("--model", bench_model, "pooled or per-file")
      ->check(CLI::IsMember({"pooled", "per-file"}));
  bench->add_option("--csv", bench_csv, "Write the CSV report here (default: stdout)");
  bench->add_option("--threads", bench_threads, "Worker threads (0 = all cores)");
  bench->callback([&] {
    action = [&] {
      const auto partition = load_partition(bench_partition);
      std::vector<fs::path> files;
      for (const auto& in : bench_inputs) {
        if (fs::is_directory(in)) {
          std::vector<fs::path> found;
          for (const auto& e : fs::directory_iterator(in)) {
            if (e.is_regular_file() && e.path().extension() == ".pbm") found.push_back(e.path());
          }
          std::sort(found.begin(), found.end());
          files.insert(files.end(), found.begin(), found.end());
        } else {
          files.emplace_back(in);
        }
      }
      if (files.empty()) throw Error(ErrorCode::kIo, "no input files");
      const auto source = bench_model == "pooled" ? ModelSource::kPooled : ModelSource::kPerFile;
      const auto result = batch_files(files, partition, source, bench_threads);
      const auto csv = to_csv(result);
      std::ostream& summary = bench_csv.empty() ? std::cerr : std::cout;
      if (bench_csv.empty()) {
        std::cout << csv;
      } else {
        write_text(bench_csv, csv);
      }
      const auto& s = result.summary;
      std::size_t failed = 0;
      for (const auto& r : result.rows) failed += !r.error.empty();
      summary << "files " << result.rows.size() << " ok " << s.files << " failed " << failed
              << "\n"
              << "mean_H_bits_pb " << fixed(s.entropy) << "\n"
              << "mean_Hs_sebits_pb " << fixed(s.semantic_entropy) << "\n"
              << "mean_avg_AC " << fixed(s.avg_ac) << "\n"
              << "mean_avg_SAC " << fixed(s.avg_sac) << "\n"
              << "mean_saving_pct " << fixed(100.0 * s.saving, 4) << "\n"
              << "mean_gap_sebits_pb " << fixed(s.gap, 8) << "\n"
              << "weighted_avg_AC " << fixed(s.weighted_avg_ac) << "\n"
              << "weighted_avg_SAC " << fixed(s.weighted_avg_sac) << "\n"
              << "weighted_saving_pct " << fixed(100.0 * s.weighted_saving, 4) << "\n"
              << "weighted_gap_sebits_pb " << fixed(s.weighted_gap, 8) << "\n";
      return failed == 0 ? 0 : 1;
    };
  });

  // gen
  std::uint64_t gen_count = 1, gen_seed = 1;
  std::size_t gen_width = 1280, gen_height = 720;
  std::string gen_dir = ".", gen_format = "raw";
  auto* gen = app.add_subcommand("gen", "Write synthetic polygon edge maps");
  gen->add_option("--count,-n", gen_count, "Number of maps");
  gen->add_option("--width", gen_width, "Width in pixels (even)");
  gen->add_option("--height", gen_height, "Height in pixels (even)");
  gen->add_option("--seed", gen_seed, "Corpus seed");
  gen->add_option("--out-dir,-o", gen_dir, "Output directory");
  gen->add_option("--format", gen_format, "plain (P1) or raw (P4)")
      ->check(CLI::IsMember({"plain", "raw"}));
  gen->callback([&] {
    action = [&] {
      fs::create_directories(gen_dir);
      for (std::uint64_t i = 0; i < gen_count; ++i) {
        const auto map = generate_synthetic(gen_width, gen_height, SplitMix64::at(gen_seed, i));
        char name[64];
        std::snprintf(name, sizeof name, "synthetic-%04llu.pbm", static_cast<unsigned long long>(i));
        const std::string path = (fs::path(gen_dir) / name).string();
        if (gen_format == "raw") {
          write_bytes(path, serialize_pbm_raw(map));
        } else {
          write_text(path, serialize_pbm_plain(map));
        }
        std::cout << path << "\n";
      }
      return 0;
    };
  });

  // verify
  VerifyOptions vopt;
  auto* ver = app.add_subcommand("verify", "Check the code-length bound and oracle agreement");
  ver->add_option("--max-m", vopt.max_m, "Longest sequence in the exhaustive sweep");
  ver->add_option("--alphabet", vopt.alphabet, "Alphabet size of the sweep")
      ->check(CLI::Range(1, 16));
  ver->add_option("--trials", vopt.trials, "Random stream-vs-exact instances");
  ver->add_option("--seed", vopt.seed, "Seed for the random instances");
  ver->callback([&] { action = [&] { return run_verify(vopt); }; });

  // validate
  std::string val_partition, val_model, val_container;
  std::size_t val_alphabet = 0;
  auto* val = app.add_subcommand("validate", "Check partition, model or container files");
  val->add_option("--partition,-p", val_partition, "Partition file");
  val->add_option("--model", val_model, "Model sidecar file");
  val->add_option("--container", val_container, "Container file");
  val->add_option("--alphabet", val_alphabet, "Alphabet size (default: model size or 16)");
  val->callback([&] {
    action = [&] {
      if (val_partition.empty() && val_model.empty() && val_container.empty()) {
        throw CLI::RequiredError("--partition, --model or --container");
      }
      int status = 0;
      std::optional<ProbabilityTable> table;
      if (!val_model.empty()) {
        try {
          table = parse_model(read_text(val_model));
          std::cout << "model ok: " << table->size() << " symbols, total " << table->total()
                    << "\n";
        } catch (const Error& e) {
          std::cout << "model invalid: " << e.what() << "\n";
          status = 1;
        }
      }
      if (!val_partition.empty()) {
        const std::size_t n =
            val_alphabet ? val_alphabet : table ? table->size() : kBlockAlphabetSize;
        try {
          const auto p = parse_partition_file(read_text(val_partition), Alphabet(n));
          std::cout << "partition ok: " << p.set_count() << " sets over " << n << " symbols\n";
        } catch (const PartitionError& e) {
          std::cout << "partition invalid:";
          for (const auto& issue : e.issues()) std::cout << " " << describe(issue);
          std::cout << "\n";
          status = 1;
        } catch (const Error& e) {
          std::cout << "partition invalid: " << e.what() << "\n";
          status = 1;
        }
      }
      if (!val_container.empty()) {
        try {
          const auto c = parse_container(read_bytes(val_container));
          decode_stream(c);
          std::cout << "container ok: " << to_string(c.mode) << ", m " << c.length << ", "
                    << c.payload_bits << " payload bits\n";
        } catch (const Error& e) {
          std::cout << "container invalid: " << e.what() << "\n";
          status = 1;
        }
      }
      return status;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return action();
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
