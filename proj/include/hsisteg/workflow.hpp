#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hsisteg/engine.hpp"
#include "hsisteg/imageio.hpp"
#include "hsisteg/metrics.hpp"

namespace hsisteg {

/// Deterministic pseudo-random payload: successive mt19937_64 outputs, each
/// split into 8 bytes least significant first. A shorter payload is a prefix
/// of a longer one drawn with the same seed.
inline Payload random_payload(std::size_t size, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  Payload out(size);
  for (std::size_t k = 0; k < size; k += 8) {
    const std::uint64_t word = engine();
    for (std::size_t j = 0; j < 8 && k + j < size; ++j) out[k + j] = static_cast<std::uint8_t>(word >> (8 * j));
  }
  return out;
}

/// Nearest-neighbour resampling: target (x, y) reads source
/// (floor(x * src_w / dst_w), floor(y * src_h / dst_h)).
inline RgbImage resize_nearest(const RgbImage& src, std::size_t width, std::size_t height) {
  if (src.empty() && width * height != 0)
    throw StegoError(ErrorKind::invalid_argument, "cannot resize an empty image");
  RgbImage out(width, height);
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x)
      out.at(x, y) = src.at(x * src.width() / width, y * src.height() / height);
  return out;
}

/// Key file contents: text made only of '0'/'1' (whitespace ignored) is read
/// as literal bits; anything else is taken as raw bytes, MSB first.
inline StegoKey parse_key(std::span<const std::uint8_t> contents) {
  std::vector<bool> bits;
  bool literal = true;
  for (std::uint8_t c : contents) {
    if (std::isspace(c)) continue;
    if (c != '0' && c != '1') {
      literal = false;
      break;
    }
    bits.push_back(c == '1');
  }
  if (literal && !bits.empty()) return StegoKey(std::move(bits));
  if (contents.empty()) throw StegoError(ErrorKind::invalid_argument, "empty key");
  return StegoKey::from_bytes(contents);
}

inline StegoKey load_key(const std::filesystem::path& path) { return parse_key(detail::read_file(path)); }

inline std::optional<HsiGrid> parse_grid(std::string_view name) {
  if (name == "tenth") return kTenthGrid;
  if (name == "unit") return kUnitGrid;
  return std::nullopt;
}

inline std::string grid_name(const HsiGrid& grid) {
  if (grid == kTenthGrid) return "tenth";
  if (grid == kUnitGrid) return "unit";
  return std::to_string(grid.hue_steps_per_degree) + "/" + std::to_string(grid.saturation_steps_per_percent);
}

/// embed() with the HSI grid chosen at run time.
inline EmbedResult embed_on_grid(const HsiGrid& grid, Method method, const RgbImage& cover,
                                 std::span<const std::uint8_t> payload, const std::optional<StegoKey>& key) {
  if (grid == kTenthGrid) return embed<kTenthGrid>(method, cover, payload, key);
  if (grid == kUnitGrid) return embed<kUnitGrid>(method, cover, payload, key);
  throw StegoError(ErrorKind::invalid_argument, "unsupported HSI grid " + grid_name(grid));
}

struct Dimensions {
  std::size_t width = 0;
  std::size_t height = 0;
};

/// One comparison experiment. Rows are produced for every
/// cover x size x payload x method combination, in that nesting order.
///
///  - fixed payload, many covers:      covers = {...}, one payload
///  - payload sweep on one cover:      one cover, payload_sizes = {...}
///  - fixed payload, resized covers:   one cover, resize = {...}
struct CompareRun {
  std::vector<std::filesystem::path> covers;
  std::optional<std::filesystem::path> payload_file;
  std::vector<std::size_t> payload_sizes;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  std::optional<StegoKey> key;
  std::vector<Dimensions> resize;  // empty: covers at native size
  std::uint64_t seed = 20140101;
  PeakMode peak = PeakMode::observed;
  HsiGrid grid = kDefaultGrid;
  unsigned jobs = 0;  // 0: hardware concurrency
};

enum class RowStatus { ok, insufficient_capacity, extraction_mismatch, error };

constexpr std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::insufficient_capacity: return "insufficient_capacity";
    case RowStatus::extraction_mismatch: return "extraction_mismatch";
    case RowStatus::error: return "error";
  }
  return "?";
}

struct CompareRow {
  std::string image;
  Method method = Method::hsi;
  std::size_t payload_bytes = 0;
  RowStatus status = RowStatus::error;
  std::optional<QualityReport> report;  // set only when status == ok
};

struct CompareReport {
  std::string preamble;
  std::vector<CompareRow> rows;

  bool any_mismatch() const {
    return std::any_of(rows.begin(), rows.end(),
                       [](const CompareRow& r) { return r.status == RowStatus::extraction_mismatch; });
  }
};

inline constexpr std::string_view kCompareCsvHeader = "image,method,payload_bytes,mse,psnr_db,c_max,status";

inline void validate(const CompareRun& run) {
  if (std::find(run.methods.begin(), run.methods.end(), Method::karim) != run.methods.end() && !run.key)
    throw StegoError(ErrorKind::invalid_argument, "method karim requires --key");
  if (run.methods.empty()) throw StegoError(ErrorKind::invalid_argument, "no methods selected");
  if (!run.payload_file && run.payload_sizes.empty())
    throw StegoError(ErrorKind::invalid_argument, "either a payload file or a payload size is required");
  for (const Dimensions& d : run.resize)
    if (d.width == 0 || d.height == 0) throw StegoError(ErrorKind::invalid_argument, "resize to zero size");
}

/// Embeds, verifies extraction against the input payload, and only then
/// measures quality. A row never carries a PSNR for an unverified embed.
inline CompareRow evaluate(const std::string& label, const RgbImage& cover, const Payload& payload, Method method,
                           const CompareRun& run) {
  CompareRow row{label, method, payload.size(), RowStatus::error, std::nullopt};
  try {
    const EmbedResult embedded = embed_on_grid(run.grid, method, cover, payload, run.key);
    bool recovered = false;
    try {
      recovered = extract(method, embedded.stego, run.key) == payload;
    } catch (const StegoError& e) {
      if (e.kind() != ErrorKind::truncated_stream) throw;
    }
    if (!recovered) {
      row.status = RowStatus::extraction_mismatch;
      return row;
    }
    row.report = psnr(cover, embedded.stego, run.peak);
    row.status = RowStatus::ok;
  } catch (const StegoError& e) {
    row.status = e.kind() == ErrorKind::insufficient_capacity ? RowStatus::insufficient_capacity : RowStatus::error;
  }
  return row;
}

inline CompareReport run_compare(const CompareRun& run) {
  validate(run);

  struct Carrier {
    std::string label;
    RgbImage image;
  };
  std::vector<Carrier> carriers;
  for (const auto& path : run.covers) {
    RgbImage cover = load(path);
    const std::string name = path.filename().string();
    if (run.resize.empty()) {
      carriers.push_back({name, std::move(cover)});
      continue;
    }
    for (const Dimensions& d : run.resize)
      carriers.push_back({name + "@" + std::to_string(d.width) + "x" + std::to_string(d.height),
                          resize_nearest(cover, d.width, d.height)});
  }

  std::vector<Payload> payloads;
  if (run.payload_file)
    payloads.push_back(detail::read_file(*run.payload_file));
  else
    for (std::size_t size : run.payload_sizes) payloads.push_back(random_payload(size, run.seed));

  struct Task {
    const Carrier* carrier;
    const Payload* payload;
    Method method;
  };
  std::vector<Task> tasks;
  for (const Carrier& c : carriers)
    for (const Payload& p : payloads)
      for (Method m : run.methods) tasks.push_back({&c, &p, m});

  CompareReport report;
  report.preamble = "# hsisteg compare seed=" + std::to_string(run.seed) + " payload=" +
                    (run.payload_file ? "file:" + run.payload_file->filename().string() : "mt19937_64") +
                    " resize=" + (run.resize.empty() ? "none" : "nearest-neighbor") +
                    " cmax=" + (run.peak == PeakMode::observed ? "observed" : "255") +
                    " hsi_grid=" + grid_name(run.grid);
  report.rows.resize(tasks.size());

  // Rows are independent; each worker writes only its own slot so output
  // order is the task order regardless of scheduling.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<std::size_t>(run.jobs ? run.jobs : hw, std::max<std::size_t>(tasks.size(), 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++)
      report.rows[t] = evaluate(tasks[t].carrier->label, tasks[t].carrier->image, *tasks[t].payload,
                                tasks[t].method, run);
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  return report;
}

inline std::string to_csv(const CompareReport& report) {
  std::string out = report.preamble + "\n";
  out.append(kCompareCsvHeader).append("\n");
  for (const CompareRow& row : report.rows) {
    if (row.report) {
      out.append(quality_csv_row(row.image, to_string(row.method), std::to_string(row.payload_bytes), *row.report));
    } else {
      out.append(row.image).append(",").append(to_string(row.method)).append(",");
      out.append(std::to_string(row.payload_bytes)).append(",,,");
    }
    out.append(",").append(to_string(row.status)).append("\n");
  }
  return out;
}

struct AnalyzeOptions {
  PeakMode peak = PeakMode::observed;
  std::optional<Method> method;  // when set, payload_bytes is filled from an extraction attempt
  std::optional<StegoKey> key;
};

/// Writes cover_{R,G,B}.csv, stego_{R,G,B}.csv and quality.csv into out_dir.
/// Returns the quality report.
inline QualityReport analyze(const std::filesystem::path& cover_path, const std::filesystem::path& stego_path,
                             const std::filesystem::path& out_dir, const AnalyzeOptions& options = {}) {
  const RgbImage cover = load(cover_path);
  const RgbImage stego = load(stego_path);
  const QualityReport report = psnr(cover, stego, options.peak);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw StegoError(ErrorKind::io_failure, "cannot create " + out_dir.string());

  auto write_text = [&](const std::string& name, const std::string& text) {
    detail::write_file(out_dir / name, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  };
  for (Channel c : {Channel::r, Channel::g, Channel::b}) {
    write_text("cover_" + std::string(channel_name(c)) + ".csv", histogram_csv(histogram(cover, c)));
    write_text("stego_" + std::string(channel_name(c)) + ".csv", histogram_csv(histogram(stego, c)));
  }

  std::string payload_bytes;
  if (options.method) {
    try {
      payload_bytes = std::to_string(extract(*options.method, stego, options.key).size());
    } catch (const StegoError& e) {
      if (e.kind() != ErrorKind::truncated_stream) throw;
    }
  }
  const std::string method = options.method ? std::string(to_string(*options.method)) : "-";
  write_text("quality.csv", std::string(kQualityCsvHeader) + "\n" +
                                quality_csv_row(stego_path.filename().string(), method, payload_bytes, report) + "\n");
  return report;
}

}  // namespace hsisteg
