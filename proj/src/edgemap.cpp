#include "sac/edgemap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sac/error.hpp"
#include "sac/reconstruct.hpp"

namespace sac {

namespace {

class PbmScanner {
 public:
  PbmScanner(std::span<const std::uint8_t> bytes, std::size_t start)
      : bytes_(bytes), pos_(start) {}

  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }
  std::uint8_t peek() const { return bytes_[pos_]; }
  std::uint8_t take() { return bytes_[pos_++]; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  void skip_space_and_comments() {
    while (!at_end()) {
      const auto c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::size_t read_dimension() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (!at_end() && peek() >= '0' && peek() <= '9') {
      value = value * 10 + (take() - '0');
      if (value > (std::size_t{1} << 20)) {
        throw Error(ErrorCode::kMalformed, "image dimension too large", start);
      }
    }
    if (pos_ == start) throw Error(ErrorCode::kMalformed, "expected a dimension", start);
    return value;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

bool is_pbm_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

void draw_line(EdgeMap& map, long x0, long y0, long x1, long y1) {
  const long dx = std::labs(x1 - x0);
  const long dy = -std::labs(y1 - y0);
  const long sx = x0 < x1 ? 1 : -1;
  const long sy = y0 < y1 ? 1 : -1;
  long err = dx + dy;
  const auto w = static_cast<long>(map.width);
  const auto h = static_cast<long>(map.height);
  for (;;) {
    if (x0 >= 0 && x0 < w && y0 >= 0 && y0 < h) {
      map.at(static_cast<std::size_t>(y0), static_cast<std::size_t>(x0)) = 1;
    }
    if (x0 == x1 && y0 == y1) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

// Uniform double in [0, 1) from the top 53 bits.
double unit_interval(SplitMix64& rng) {
  return static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
}

}  // namespace

EdgeMap parse_pbm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '1' && bytes[1] != '4')) {
    throw Error(ErrorCode::kMalformed, "not a P1 or P4 bitmap", 0);
  }
  const bool raw = bytes[1] == '4';
  PbmScanner in(bytes, 2);
  EdgeMap map;
  map.width = in.read_dimension();
  map.height = in.read_dimension();
  if (map.width % 2 != 0 || map.height % 2 != 0) {
    throw Error(ErrorCode::kOddDimensions,
                std::to_string(map.width) + "x" + std::to_string(map.height));
  }
  map.bits.assign(map.width * map.height, 0);

  if (raw) {
    if (in.at_end() || !is_pbm_space(in.take())) {
      throw Error(ErrorCode::kMalformed, "expected whitespace before raster", in.offset());
    }
    const std::size_t row_bytes = (map.width + 7) / 8;
    if (in.remaining() < row_bytes * map.height) {
      throw Error(ErrorCode::kMalformed, "raster is truncated", in.offset());
    }
    for (std::size_t r = 0; r < map.height; ++r) {
      for (std::size_t b = 0; b < row_bytes; ++b) {
        const std::uint8_t byte = in.take();
        for (std::size_t bit = 0; bit < 8; ++bit) {
          const std::size_t c = b * 8 + bit;
          if (c < map.width) map.at(r, c) = (byte >> (7 - bit)) & 1;
        }
      }
    }
    return map;
  }

  for (auto& pixel : map.bits) {
    in.skip_space_and_comments();
    if (in.at_end()) throw Error(ErrorCode::kMalformed, "raster is truncated", in.offset());
    const auto c = in.take();
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::kMalformed, "plain raster holds only 0 and 1", in.offset() - 1);
    }
    pixel = c == '1';
  }
  return map;
}

std::string serialize_pbm_plain(const EdgeMap& map) {
  std::string out = "P1\n" + std::to_string(map.width) + " " + std::to_string(map.height) + "\n";
  out.reserve(out.size() + map.bits.size() + map.bits.size() / 70 + map.height + 1);
  for (std::size_t r = 0; r < map.height; ++r) {
    for (std::size_t c = 0; c < map.width; ++c) {
      if (c > 0 && c % 70 == 0) out.push_back('\n');
      out.push_back(map.at(r, c) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<std::uint8_t> serialize_pbm_raw(const EdgeMap& map) {
  const std::string header =
      "P4\n" + std::to_string(map.width) + " " + std::to_string(map.height) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const std::size_t row_bytes = (map.width + 7) / 8;
  for (std::size_t r = 0; r < map.height; ++r) {
    for (std::size_t b = 0; b < row_bytes; ++b) {
      std::uint8_t byte = 0;
      for (std::size_t bit = 0; bit < 8; ++bit) {
        const std::size_t c = b * 8 + bit;
        if (c < map.width && map.at(r, c)) byte |= static_cast<std::uint8_t>(0x80u >> bit);
      }
      out.push_back(byte);
    }
  }
  return out;
}

BlockSequence tokenize_blocks(const EdgeMap& map) {
  if (map.width % 2 != 0 || map.height % 2 != 0) {
    throw Error(ErrorCode::kOddDimensions,
                std::to_string(map.width) + "x" + std::to_string(map.height));
  }
  BlockSequence out;
  out.blocks_wide = map.width / 2;
  out.blocks_high = map.height / 2;
  out.symbols.reserve(out.blocks_wide * out.blocks_high);
  for (std::size_t r = 0; r < map.height; r += 2) {
    for (std::size_t c = 0; c < map.width; c += 2) {
      out.symbols.push_back(static_cast<Symbol>(8 * map.at(r, c) + 4 * map.at(r, c + 1) +
                                                2 * map.at(r + 1, c) + map.at(r + 1, c + 1)));
    }
  }
  return out;
}

EdgeMap detokenize(const BlockSequence& blocks) {
  if (blocks.symbols.size() != blocks.blocks_wide * blocks.blocks_high) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(blocks.symbols.size()) + " blocks for a " +
                    std::to_string(blocks.blocks_wide) + "x" +
                    std::to_string(blocks.blocks_high) + " grid");
  }
  EdgeMap map;
  map.width = blocks.blocks_wide * 2;
  map.height = blocks.blocks_high * 2;
  map.bits.assign(map.width * map.height, 0);
  for (std::size_t i = 0; i < blocks.symbols.size(); ++i) {
    const Symbol s = blocks.symbols[i];
    if (s >= kBlockAlphabetSize) {
      throw Error(ErrorCode::kOutOfRange, "block symbol " + std::to_string(s), i);
    }
    const std::size_t r = (i / blocks.blocks_wide) * 2;
    const std::size_t c = (i % blocks.blocks_wide) * 2;
    map.at(r, c) = (s >> 3) & 1;
    map.at(r, c + 1) = (s >> 2) & 1;
    map.at(r + 1, c) = (s >> 1) & 1;
    map.at(r + 1, c + 1) = s & 1;
  }
  return map;
}

std::vector<std::uint64_t> block_histogram(std::span<const BlockSequence> sequences) {
  std::vector<std::uint64_t> freq(kBlockAlphabetSize, 0);
  for (const auto& seq : sequences) {
    for (std::size_t i = 0; i < seq.symbols.size(); ++i) {
      const Symbol s = seq.symbols[i];
      if (s >= kBlockAlphabetSize) {
        throw Error(ErrorCode::kOutOfRange, "block symbol " + std::to_string(s), i);
      }
      ++freq[s];
    }
  }
  return freq;
}

ProbabilityTable estimate_model(std::span<const BlockSequence> sequences) {
  const auto freq = block_histogram(sequences);
  std::uint64_t sum = 0;
  std::size_t observed = 0;
  for (auto f : freq) {
    sum += f;
    observed += f > 0;
  }
  if (sum == 0) throw Error(ErrorCode::kAllZero, "no blocks observed");
  if (observed == 1) {
    std::vector<std::uint32_t> counts(kBlockAlphabetSize, 0);
    for (std::size_t n = 0; n < freq.size(); ++n) counts[n] = freq[n] > 0;
    return ProbabilityTable(std::move(counts), 1);
  }
  std::vector<double> probs(freq.size());
  for (std::size_t n = 0; n < freq.size(); ++n) {
    probs[n] = static_cast<double>(static_cast<long double>(freq[n]) / sum);
  }
  return quantize(probs, kMaxTableTotal);
}

EdgeMap generate_synthetic(std::size_t width, std::size_t height, std::uint64_t seed) {
  if (width % 2 != 0 || height % 2 != 0) {
    throw Error(ErrorCode::kOddDimensions,
                std::to_string(width) + "x" + std::to_string(height));
  }
  EdgeMap map;
  map.width = width;
  map.height = height;
  map.bits.assign(width * height, 0);
  if (width == 0 || height == 0) return map;

  SplitMix64 rng(seed);
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  const double scale = std::min(w, h);
  const int polygons = 6 + static_cast<int>(rng.next() % 19);
  for (int p = 0; p < polygons; ++p) {
    const double cx = unit_interval(rng) * w;
    const double cy = unit_interval(rng) * h;
    const double radius = scale * (0.03 + 0.22 * unit_interval(rng));
    const int vertices = 3 + static_cast<int>(rng.next() % 8);
    std::vector<double> angles(static_cast<std::size_t>(vertices));
    for (auto& a : angles) a = unit_interval(rng) * 2.0 * std::numbers::pi;
    std::sort(angles.begin(), angles.end());
    std::vector<std::pair<long, long>> pts;
    for (double a : angles) {
      const double r = radius * (0.5 + 0.5 * unit_interval(rng));
      pts.emplace_back(std::lround(cx + r * std::cos(a)), std::lround(cy + r * std::sin(a)));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& [x0, y0] = pts[i];
      const auto& [x1, y1] = pts[(i + 1) % pts.size()];
      draw_line(map, x0, y0, x1, y1);
    }
  }
  return map;
}

std::string edge2x2_partition_text() {
  return "# Synonymous sets for 2x2 edge-map blocks.\n"
         "# Block symbol = 8*top_left + 4*top_right + 2*bottom_left + 1*bottom_right.\n"
         "# Set order is the coding order; keep it stable for existing containers.\n"
         "set empty: 0\n"
         "set full: 15\n"
         "set horizontal: 3 12\n"
         "set vertical: 5 10\n"
         "set diagonal: 9\n"
         "set antidiagonal: 6\n"
         "set corner_br: 1\n"
         "set corner_bl: 2\n"
         "set corner_tr: 4\n"
         "set corner_tl: 8\n"
         "set notched: 7 11 13 14\n";
}

SynonymousPartition edge2x2_partition() {
  return parse_partition_file(edge2x2_partition_text(), Alphabet(kBlockAlphabetSize));
}

}  // namespace sac
