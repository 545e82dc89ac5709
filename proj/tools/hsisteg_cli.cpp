// hsisteg: embed, extract and evaluate payloads hidden in RGB images.
//
// Exit codes: 0 success, 1 usage, 2 capacity, 3 image format / file,
// 4 extraction mismatch.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hsisteg/hsisteg.hpp"

namespace {

using namespace hsisteg;

enum ExitCode : int { kOk = 0, kUsage = 1, kCapacity = 2, kFormat = 3, kMismatch = 4 };

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::insufficient_capacity:
    case ErrorKind::payload_too_large: return kCapacity;
    case ErrorKind::unsupported_format:
    case ErrorKind::alpha_not_supported:
    case ErrorKind::corrupt_file:
    case ErrorKind::io_failure: return kFormat;
    case ErrorKind::truncated_stream: return kMismatch;
    case ErrorKind::dimension_mismatch:
    case ErrorKind::invalid_argument: return kUsage;
  }
  return kUsage;
}

struct Options {
  std::string cover, stego, image, payload, key, out, method = "hsi", format = "png", cmax = "observed",
                                                      grid = "tenth";
  std::vector<std::string> covers, methods, resize;
  std::vector<std::size_t> payload_sizes;
  std::uint64_t seed = 20140101;
  unsigned jobs = 0;
};

Method method_or_throw(const std::string& name) {
  if (auto m = parse_method(name)) return *m;
  throw StegoError(ErrorKind::invalid_argument, "unknown method '" + name + "'");
}

std::optional<StegoKey> key_if_given(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_key(path);
}

PeakMode peak_or_throw(const std::string& name) {
  if (name == "observed") return PeakMode::observed;
  if (name == "255") return PeakMode::fixed255;
  throw StegoError(ErrorKind::invalid_argument, "--cmax must be 'observed' or '255'");
}

HsiGrid grid_or_throw(const std::string& name) {
  if (auto g = parse_grid(name)) return *g;
  throw StegoError(ErrorKind::invalid_argument, "--hsi-grid must be 'tenth' or 'unit'");
}

Dimensions dimensions_or_throw(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x != std::string::npos) {
      std::size_t used_w = 0, used_h = 0;
      const auto w = std::stoul(text.substr(0, x), &used_w);
      const auto h = std::stoul(text.substr(x + 1), &used_h);
      if (used_w == x && used_h == text.size() - x - 1) return {w, h};
    }
  } catch (const std::logic_error&) {
  }
  throw StegoError(ErrorKind::invalid_argument, "--resize expects WIDTHxHEIGHT, got '" + text + "'");
}

void write_bytes(const std::string& path, std::span<const std::uint8_t> data) { detail::write_file(path, data); }

int cmd_embed(const Options& o) {
  const Method method = method_or_throw(o.method);
  const auto key = key_if_given(o.key);
  if (method == Method::karim && !key) throw StegoError(ErrorKind::invalid_argument, "method karim requires --key");
  const auto format = parse_image_format(o.format);
  if (!format) throw StegoError(ErrorKind::invalid_argument, "--format must be 'png' or 'bmp'");

  const RgbImage cover = load(o.cover);
  const Bytes payload = detail::read_file(o.payload);
  const EmbedResult result = embed_on_grid(grid_or_throw(o.grid), method, cover, payload, key);
  save(result.stego, o.out, *format);

  const std::size_t capacity = capacity_bytes(method, cover.width(), cover.height());
  const double used = capacity ? 100.0 * double(payload.size()) / double(capacity) : 100.0;
  std::printf("bits_embedded: %zu\npixels_adjusted: %zu\ncapacity_used: %.2f%% (%zu of %zu bytes)\n",
              result.bits_embedded, result.pixels_adjusted, used, payload.size(), capacity);
  return kOk;
}

int cmd_extract(const Options& o) {
  const Method method = method_or_throw(o.method);
  const auto key = key_if_given(o.key);
  if (method == Method::karim && !key) throw StegoError(ErrorKind::invalid_argument, "method karim requires --key");
  const Payload payload = extract(method, load(o.stego), key);
  write_bytes(o.out, payload);
  std::printf("payload_bytes: %zu\n", payload.size());
  return kOk;
}

int cmd_capacity(const Options& o) {
  const RgbImage img = load(o.image);
  std::printf("dimensions: %zux%zu\n", img.width(), img.height());
  for (Method m : kAllMethods)
    std::printf("%s: %zu\n", std::string(to_string(m)).c_str(), capacity_bytes(m, img.width(), img.height()));
  return kOk;
}

int cmd_compare(const Options& o) {
  CompareRun run;
  run.covers.assign(o.covers.begin(), o.covers.end());
  if (!o.payload.empty()) run.payload_file = o.payload;
  run.payload_sizes = o.payload_sizes;
  if (!o.methods.empty()) {
    run.methods.clear();
    for (const auto& name : o.methods) run.methods.push_back(method_or_throw(name));
  }
  run.key = key_if_given(o.key);
  for (const auto& r : o.resize) run.resize.push_back(dimensions_or_throw(r));
  run.seed = o.seed;
  run.peak = peak_or_throw(o.cmax);
  run.grid = grid_or_throw(o.grid);
  run.jobs = o.jobs;

  const CompareReport report = run_compare(run);
  const std::string csv = to_csv(report);
  if (o.out.empty())
    std::fwrite(csv.data(), 1, csv.size(), stdout);
  else
    write_bytes(o.out, std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));

  if (report.any_mismatch()) {
    std::fprintf(stderr, "error: extraction mismatch in at least one row\n");
    return kMismatch;
  }
  return kOk;
}

int cmd_analyze(const Options& o) {
  AnalyzeOptions options;
  options.peak = peak_or_throw(o.cmax);
  if (!o.methods.empty()) options.method = method_or_throw(o.methods.front());
  options.key = key_if_given(o.key);
  const QualityReport report = analyze(o.cover, o.stego, o.out, options);
  std::printf("mse: %s\npsnr_db: %s\nc_max: %d\n", format_real(report.mse).c_str(),
              format_real(report.psnr_db).c_str(), report.c_max);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hide and recover byte payloads in the intensity plane of RGB images"};
  app.require_subcommand(1);
  Options o;

  auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", o.method, "hsi, lsb or karim")->check(CLI::IsMember({"hsi", "lsb", "karim"}));
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--hsi-grid", o.grid, "hue/saturation storage grid: tenth (0.1 deg, 0.1%) or unit");
  };

  auto* embed_cmd = app.add_subcommand("embed", "Hide a payload file in a cover image");
  embed_cmd->add_option("cover", o.cover, "Cover image (PNG or BMP)")->required();
  embed_cmd->add_option("--payload", o.payload, "Payload file")->required();
  add_method(embed_cmd);
  embed_cmd->add_option("--key", o.key, "Key file (karim)");
  embed_cmd->add_option("--out", o.out, "Stego image path")->required();
  embed_cmd->add_option("--format", o.format, "png or bmp");
  add_grid(embed_cmd);

  auto* extract_cmd = app.add_subcommand("extract", "Recover a payload from a stego image");
  extract_cmd->add_option("stego", o.stego, "Stego image")->required();
  add_method(extract_cmd);
  extract_cmd->add_option("--key", o.key, "Key file (karim)");
  extract_cmd->add_option("--out", o.out, "Recovered payload path")->required();

  auto* capacity_cmd = app.add_subcommand("capacity", "Print payload capacity per method");
  capacity_cmd->add_option("image", o.image, "Image")->required();

  auto* compare_cmd = app.add_subcommand("compare", "Embed, verify and measure over covers, payloads and methods");
  compare_cmd->add_option("covers", o.covers, "Cover images");
  compare_cmd->add_option("--method", o.methods, "Method (repeatable; default all)")
      ->check(CLI::IsMember({"hsi", "lsb", "karim"}));
  compare_cmd->add_option("--payload", o.payload, "Payload file");
  compare_cmd->add_option("--payload-size", o.payload_sizes, "Random payload size in bytes (repeatable)");
  compare_cmd->add_option("--key", o.key, "Key file (required when karim is selected)");
  compare_cmd->add_option("--seed", o.seed, "Payload generator seed");
  compare_cmd->add_option("--resize", o.resize, "Nearest-neighbour resize WIDTHxHEIGHT (repeatable)");
  compare_cmd->add_option("--cmax", o.cmax, "PSNR peak: observed or 255");
  compare_cmd->add_option("--out", o.out, "CSV output path (default stdout)");
  compare_cmd->add_option("--jobs", o.jobs, "Worker threads (0: all cores)");
  add_grid(compare_cmd);

  auto* analyze_cmd = app.add_subcommand("analyze", "Write histograms and quality metrics for a cover/stego pair");
  analyze_cmd->add_option("cover", o.cover, "Cover image")->required();
  analyze_cmd->add_option("stego", o.stego, "Stego image")->required();
  analyze_cmd->add_option("--out", o.out, "Output directory")->required();
  analyze_cmd->add_option("--cmax", o.cmax, "PSNR peak: observed or 255");
  analyze_cmd->add_option("--method", o.methods, "Method used, to report the payload size")
      ->check(CLI::IsMember({"hsi", "lsb", "karim"}));
  analyze_cmd->add_option("--key", o.key, "Key file (karim)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*embed_cmd) return cmd_embed(o);
    if (*extract_cmd) return cmd_extract(o);
    if (*capacity_cmd) return cmd_capacity(o);
    if (*compare_cmd) return cmd_compare(o);
    if (*analyze_cmd) return cmd_analyze(o);
  } catch (const StegoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
