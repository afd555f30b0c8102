#include "mrsvpr/mrsvpr.h"

#include <charconv>
#include <chrono>
#include <cstring>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrsvpr/bench.hpp"
#include "mrsvpr/descriptor.hpp"
#include "mrsvpr/error.hpp"
#include "mrsvpr/pipeline.hpp"
#include "mrsvpr/report.hpp"
#include "mrsvpr/synth.hpp"
#include "mrsvpr/types.hpp"

namespace {

thread_local std::string g_last_error;

// Everything the C surface can tune, with library defaults.
struct ApiConfig {
  mrsvpr::DescriptorParams descriptor;
  mrsvpr::PipelineConfig pipeline;
  mrsvpr::SyntheticSpec synth;
  int bench_trials = 20;
  std::int64_t bench_tolerance = 3;
  std::vector<double> bench_warps = {1.0};
  bool bench_run_baseline = true;
  bool baseline_enhance = false;
  std::int64_t baseline_enhance_radius = 10;
};

std::int64_t parse_int(const std::string& value, const std::string& key) {
  std::int64_t out = 0;
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw mrsvpr::ConfigError("config: key '" + key +
                              "' expects an integer, got '" + value + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& value, const std::string& key) {
  std::uint64_t out = 0;
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw mrsvpr::ConfigError("config: key '" + key +
                              "' expects an unsigned integer, got '" + value +
                              "'");
  }
  return out;
}

double parse_real(const std::string& value, const std::string& key) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw mrsvpr::ConfigError("config: key '" + key +
                              "' expects a number, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw mrsvpr::ConfigError("config: key '" + key +
                            "' expects a boolean, got '" + value + "'");
}

std::vector<double> parse_real_list(const std::string& value,
                                    const std::string& key) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    if (comma == std::string::npos) {
      comma = value.size();
    }
    out.push_back(parse_real(value.substr(start, comma - start), key));
    start = comma + 1;
  }
  if (out.empty()) {
    throw mrsvpr::ConfigError("config: key '" + key +
                              "' expects a comma-separated list of numbers");
  }
  return out;
}

std::string join_reals(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != 0) {
      out += ',';
    }
    out += mrsvpr::format_double(values[i]);
  }
  return out;
}

void config_set_impl(ApiConfig& c, const std::string& key,
                     const std::string& value) {
  using mrsvpr::ConfigError;
  if (key == "descriptor.grid_width") {
    c.descriptor.grid_width = parse_int(value, key);
  } else if (key == "descriptor.grid_height") {
    c.descriptor.grid_height = parse_int(value, key);
  } else if (key == "descriptor.patch") {
    c.descriptor.patch = parse_int(value, key);
  } else if (key == "pipeline.depth") {
    const std::int64_t depth = parse_int(value, key);
    if (depth < 1 || depth > 30) {
      throw ConfigError("config: pipeline.depth must be in [1, 30]");
    }
    c.pipeline.depth = static_cast<int>(depth);
  } else if (key == "pipeline.tau") {
    const double tau = parse_real(value, key);
    if (!(tau > 0.0) || tau > 16.0) {
      throw ConfigError("config: pipeline.tau must be in (0, 16]");
    }
    c.pipeline.tau = tau;
  } else if (key == "pipeline.id_shift") {
    if (value == "auto") {
      c.pipeline.id_shift_policy = mrsvpr::IdShiftPolicy::kAuto;
    } else if (value == "half") {
      c.pipeline.id_shift_policy = mrsvpr::IdShiftPolicy::kHalf;
    } else {
      const std::int64_t shift = parse_int(value, key);
      if (shift < 0) {
        throw ConfigError("config: pipeline.id_shift must be >= 0");
      }
      c.pipeline.id_shift_policy = mrsvpr::IdShiftPolicy::kFixed;
      c.pipeline.id_shift_fixed = shift;
    }
  } else if (key == "pipeline.jitter") {
    if (value == "auto") {
      c.pipeline.jitter_policy = mrsvpr::JitterPolicy::kAuto;
    } else if (value == "quarter") {
      c.pipeline.jitter_policy = mrsvpr::JitterPolicy::kQuarter;
    } else {
      const double sigma = parse_real(value, key);
      if (!(sigma >= 0.0)) {
        throw ConfigError("config: pipeline.jitter must be >= 0");
      }
      c.pipeline.jitter_policy = mrsvpr::JitterPolicy::kFixed;
      c.pipeline.jitter_fixed = sigma;
    }
  } else if (key == "pipeline.thres_particle_frac") {
    const double f = parse_real(value, key);
    if (!(f > 0.0) || f > 1.0) {
      throw ConfigError(
          "config: pipeline.thres_particle_frac must be in (0, 1]");
    }
    c.pipeline.thres_particle_frac = f;
  } else if (key == "pipeline.coverage_threshold") {
    const double f = parse_real(value, key);
    if (!(f > 0.0) || f > 1.0) {
      throw ConfigError(
          "config: pipeline.coverage_threshold must be in (0, 1]");
    }
    c.pipeline.coverage_threshold = f;
  } else if (key == "pipeline.iteration_cap") {
    const std::int64_t cap = parse_int(value, key);
    if (cap < 1 || cap > 1000) {
      throw ConfigError("config: pipeline.iteration_cap must be in [1, 1000]");
    }
    c.pipeline.iteration_cap = static_cast<int>(cap);
  } else if (key == "pipeline.min_coarse_test_len") {
    const std::int64_t len = parse_int(value, key);
    if (len < 1) {
      throw ConfigError(
          "config: pipeline.min_coarse_test_len must be >= 1");
    }
    c.pipeline.min_coarse_test_len = len;
  } else if (key == "pipeline.coverage_valid") {
    if (value == "all") {
      c.pipeline.coverage_valid = mrsvpr::CoverageValid::kAll;
    } else if (value == "above_median") {
      c.pipeline.coverage_valid = mrsvpr::CoverageValid::kAboveMedian;
    } else {
      throw ConfigError(
          "config: pipeline.coverage_valid must be 'all' or 'above_median'");
    }
  } else if (key == "pipeline.velocities") {
    const std::vector<double> v = parse_real_list(value, key);
    for (double x : v) {
      if (!(x > 0.0)) {
        throw ConfigError("config: pipeline.velocities must be positive");
      }
    }
    c.pipeline.velocities = v;
  } else if (key == "pipeline.workers") {
    const std::int64_t w = parse_int(value, key);
    if (w < 1 || w > 256) {
      throw ConfigError("config: pipeline.workers must be in [1, 256]");
    }
    c.pipeline.workers = static_cast<int>(w);
  } else if (key == "pipeline.seed") {
    c.pipeline.seed = parse_uint(value, key);
  } else if (key == "synth.ref_len") {
    c.synth.ref_len = parse_int(value, key);
  } else if (key == "synth.test_len") {
    c.synth.test_len = parse_int(value, key);
  } else if (key == "synth.dim") {
    c.synth.dim = parse_int(value, key);
  } else if (key == "synth.warp") {
    c.synth.warp = parse_real(value, key);
  } else if (key == "synth.noise") {
    c.synth.noise = parse_real(value, key);
  } else if (key == "synth.viewpoint_jitter") {
    c.synth.viewpoint_jitter = parse_real(value, key);
  } else if (key == "synth.walk_velocity") {
    c.synth.walk_velocity = parse_real(value, key);
  } else if (key == "synth.embed_end") {
    const std::int64_t e = parse_int(value, key);
    if (e < 0) {
      throw ConfigError("config: synth.embed_end must be >= 0 (0 = random)");
    }
    if (e == 0) {
      c.synth.embed_end.reset();
    } else {
      c.synth.embed_end = e;
    }
  } else if (key == "bench.trials") {
    const std::int64_t t = parse_int(value, key);
    if (t < 1 || t > 100000) {
      throw ConfigError("config: bench.trials must be in [1, 100000]");
    }
    c.bench_trials = static_cast<int>(t);
  } else if (key == "bench.tolerance_frames") {
    const std::int64_t t = parse_int(value, key);
    if (t < 0) {
      throw ConfigError("config: bench.tolerance_frames must be >= 0");
    }
    c.bench_tolerance = t;
  } else if (key == "bench.warps") {
    const std::vector<double> w = parse_real_list(value, key);
    for (double x : w) {
      if (!(x > 0.0)) {
        throw ConfigError("config: bench.warps must be positive");
      }
    }
    c.bench_warps = w;
  } else if (key == "bench.run_baseline") {
    c.bench_run_baseline = parse_bool(value, key);
  } else if (key == "baseline.enhance") {
    c.baseline_enhance = parse_bool(value, key);
  } else if (key == "baseline.enhance_radius") {
    const std::int64_t r = parse_int(value, key);
    if (r < 1) {
      throw ConfigError("config: baseline.enhance_radius must be >= 1");
    }
    c.baseline_enhance_radius = r;
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

std::string config_get_impl(const ApiConfig& c, const std::string& key) {
  using mrsvpr::format_double;
  if (key == "descriptor.grid_width") {
    return std::to_string(c.descriptor.grid_width);
  }
  if (key == "descriptor.grid_height") {
    return std::to_string(c.descriptor.grid_height);
  }
  if (key == "descriptor.patch") {
    return std::to_string(c.descriptor.patch);
  }
  if (key == "pipeline.depth") {
    return std::to_string(c.pipeline.depth);
  }
  if (key == "pipeline.tau") {
    return format_double(c.pipeline.tau);
  }
  if (key == "pipeline.id_shift") {
    switch (c.pipeline.id_shift_policy) {
      case mrsvpr::IdShiftPolicy::kHalf:
        return "half";
      case mrsvpr::IdShiftPolicy::kFixed:
        return std::to_string(c.pipeline.id_shift_fixed);
      default:
        return "auto";
    }
  }
  if (key == "pipeline.jitter") {
    switch (c.pipeline.jitter_policy) {
      case mrsvpr::JitterPolicy::kQuarter:
        return "quarter";
      case mrsvpr::JitterPolicy::kFixed:
        return format_double(c.pipeline.jitter_fixed);
      default:
        return "auto";
    }
  }
  if (key == "pipeline.thres_particle_frac") {
    return format_double(c.pipeline.thres_particle_frac);
  }
  if (key == "pipeline.coverage_threshold") {
    return format_double(c.pipeline.coverage_threshold);
  }
  if (key == "pipeline.iteration_cap") {
    return std::to_string(c.pipeline.iteration_cap);
  }
  if (key == "pipeline.min_coarse_test_len") {
    return std::to_string(c.pipeline.min_coarse_test_len);
  }
  if (key == "pipeline.coverage_valid") {
    return c.pipeline.coverage_valid == mrsvpr::CoverageValid::kAboveMedian
               ? "above_median"
               : "all";
  }
  if (key == "pipeline.velocities") {
    return join_reals(c.pipeline.velocities);
  }
  if (key == "pipeline.workers") {
    return std::to_string(c.pipeline.workers);
  }
  if (key == "pipeline.seed") {
    return c.pipeline.seed.has_value() ? std::to_string(*c.pipeline.seed) : "";
  }
  if (key == "synth.ref_len") {
    return std::to_string(c.synth.ref_len);
  }
  if (key == "synth.test_len") {
    return std::to_string(c.synth.test_len);
  }
  if (key == "synth.dim") {
    return std::to_string(c.synth.dim);
  }
  if (key == "synth.warp") {
    return format_double(c.synth.warp);
  }
  if (key == "synth.noise") {
    return format_double(c.synth.noise);
  }
  if (key == "synth.viewpoint_jitter") {
    return format_double(c.synth.viewpoint_jitter);
  }
  if (key == "synth.walk_velocity") {
    return format_double(c.synth.walk_velocity);
  }
  if (key == "synth.embed_end") {
    return c.synth.embed_end.has_value() ? std::to_string(*c.synth.embed_end)
                                         : "0";
  }
  if (key == "bench.trials") {
    return std::to_string(c.bench_trials);
  }
  if (key == "bench.tolerance_frames") {
    return std::to_string(c.bench_tolerance);
  }
  if (key == "bench.warps") {
    return join_reals(c.bench_warps);
  }
  if (key == "bench.run_baseline") {
    return c.bench_run_baseline ? "true" : "false";
  }
  if (key == "baseline.enhance") {
    return c.baseline_enhance ? "true" : "false";
  }
  if (key == "baseline.enhance_radius") {
    return std::to_string(c.baseline_enhance_radius);
  }
  throw mrsvpr::ConfigError("config: unknown key '" + key + "'");
}

mrsvpr_status status_of(const std::exception& e) {
  if (dynamic_cast<const mrsvpr::InputError*>(&e) != nullptr) {
    return MRSVPR_ERR_INVALID_ARGUMENT;
  }
  if (dynamic_cast<const mrsvpr::ConfigError*>(&e) != nullptr) {
    return MRSVPR_ERR_CONFIG;
  }
  if (dynamic_cast<const mrsvpr::InfeasibleError*>(&e) != nullptr) {
    return MRSVPR_ERR_INFEASIBLE;
  }
  if (dynamic_cast<const mrsvpr::IoError*>(&e) != nullptr) {
    return MRSVPR_ERR_IO;
  }
  if (dynamic_cast<const mrsvpr::DegenerateError*>(&e) != nullptr) {
    return MRSVPR_ERR_DEGENERATE;
  }
  return MRSVPR_ERR_INTERNAL;
}

template <typename Fn>
mrsvpr_status wrap(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return MRSVPR_OK;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (...) {
    g_last_error = "unknown failure";
    return MRSVPR_ERR_INTERNAL;
  }
}

mrsvpr_status fill_buffer(const std::string& text, char* buf, size_t buf_len,
                          size_t* needed) {
  if (needed != nullptr) {
    *needed = text.size() + 1;
  }
  if (buf == nullptr) {
    return MRSVPR_OK;
  }
  if (buf_len < text.size() + 1) {
    g_last_error = "buffer too small (" + std::to_string(buf_len) +
                   " < " + std::to_string(text.size() + 1) + ")";
    return MRSVPR_ERR_INVALID_ARGUMENT;
  }
  std::memcpy(buf, text.data(), text.size() + 1);
  return MRSVPR_OK;
}

}  // namespace

struct mrsvpr_config {
  ApiConfig impl;
};

struct mrsvpr_sequence {
  mrsvpr::FrameSequence impl;
};

struct mrsvpr_result {
  enum class Kind { kMatch, kBaseline, kBench } kind = Kind::kMatch;

  // match
  mrsvpr::MatchResult match;
  mrsvpr::PipelineConfig match_config;
  std::int64_t ref_len = 0;
  std::int64_t test_len = 0;
  std::int64_t dim = 0;

  // baseline
  mrsvpr::BaselineResult baseline;
  bool enhance = false;
  std::int64_t enhance_radius = 10;
  double wall_ms = 0.0;

  // bench
  mrsvpr::BenchReport bench;
};

namespace {

mrsvpr_status sequence_from_frames(const double* pixels, int64_t count,
                                   int64_t width, int64_t height,
                                   const mrsvpr_config* config,
                                   mrsvpr_sequence** out, bool rgb) {
  return wrap([&]() {
    if (pixels == nullptr || out == nullptr || config == nullptr) {
      throw mrsvpr::InputError("sequence_from_frames: null argument");
    }
    if (count <= 0 || width <= 0 || height <= 0) {
      throw mrsvpr::InputError(
          "sequence_from_frames: count/width/height must be positive");
    }
    const mrsvpr::DescriptorParams& params = config->impl.descriptor;
    const std::int64_t stride = width * height * (rgb ? 3 : 1);
    std::vector<double> rows;
    rows.reserve(static_cast<std::size_t>(count * params.dim()));
    for (std::int64_t i = 0; i < count; ++i) {
      mrsvpr::RawFrame frame;
      if (rgb) {
        frame = mrsvpr::rgb_to_gray(
            std::span<const double>(pixels + i * stride,
                                    static_cast<std::size_t>(stride)),
            width, height);
      } else {
        frame.width = width;
        frame.height = height;
        frame.pixels.assign(pixels + i * stride, pixels + (i + 1) * stride);
      }
      const mrsvpr::Descriptor d = mrsvpr::preprocess(frame, params);
      rows.insert(rows.end(), d.begin(), d.end());
    }
    auto seq = std::make_unique<mrsvpr_sequence>();
    seq->impl = mrsvpr::FrameSequence::from_descriptors(std::move(rows), count,
                                                        params.dim());
    *out = seq.release();
  });
}

}  // namespace

extern "C" {

const char* mrsvpr_last_error(void) { return g_last_error.c_str(); }

const char* mrsvpr_status_name(mrsvpr_status status) {
  switch (status) {
    case MRSVPR_OK:
      return "ok";
    case MRSVPR_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case MRSVPR_ERR_CONFIG:
      return "config";
    case MRSVPR_ERR_INFEASIBLE:
      return "infeasible";
    case MRSVPR_ERR_IO:
      return "io";
    case MRSVPR_ERR_DEGENERATE:
      return "degenerate";
    case MRSVPR_ERR_INTERNAL:
    default:
      return "internal";
  }
}

mrsvpr_config* mrsvpr_config_create(void) {
  return new (std::nothrow) mrsvpr_config();
}

void mrsvpr_config_destroy(mrsvpr_config* config) { delete config; }

mrsvpr_status mrsvpr_config_set(mrsvpr_config* config, const char* key,
                                const char* value) {
  return wrap([&]() {
    if (config == nullptr || key == nullptr || value == nullptr) {
      throw mrsvpr::InputError("config_set: null argument");
    }
    config_set_impl(config->impl, key, value);
  });
}

mrsvpr_status mrsvpr_config_get(const mrsvpr_config* config, const char* key,
                                char* buf, size_t buf_len, size_t* needed) {
  std::string text;
  const mrsvpr_status st = wrap([&]() {
    if (config == nullptr || key == nullptr) {
      throw mrsvpr::InputError("config_get: null argument");
    }
    text = config_get_impl(config->impl, key);
  });
  if (st != MRSVPR_OK) {
    return st;
  }
  return fill_buffer(text, buf, buf_len, needed);
}

mrsvpr_status mrsvpr_sequence_from_descriptors(const double* values,
                                               int64_t count, int64_t dim,
                                               mrsvpr_sequence** out) {
  return wrap([&]() {
    if (values == nullptr || out == nullptr) {
      throw mrsvpr::InputError("sequence_from_descriptors: null argument");
    }
    if (count < 0 || dim <= 0) {
      throw mrsvpr::InputError(
          "sequence_from_descriptors: count must be >= 0 and dim >= 1");
    }
    std::vector<double> data(values, values + count * dim);
    auto seq = std::make_unique<mrsvpr_sequence>();
    seq->impl =
        mrsvpr::FrameSequence::from_descriptors(std::move(data), count, dim);
    *out = seq.release();
  });
}

mrsvpr_status mrsvpr_sequence_from_gray_frames(const double* pixels,
                                               int64_t count, int64_t width,
                                               int64_t height,
                                               const mrsvpr_config* config,
                                               mrsvpr_sequence** out) {
  return sequence_from_frames(pixels, count, width, height, config, out,
                              false);
}

mrsvpr_status mrsvpr_sequence_from_rgb_frames(const double* pixels,
                                              int64_t count, int64_t width,
                                              int64_t height,
                                              const mrsvpr_config* config,
                                              mrsvpr_sequence** out) {
  return sequence_from_frames(pixels, count, width, height, config, out, true);
}

int64_t mrsvpr_sequence_size(const mrsvpr_sequence* seq) {
  return seq == nullptr ? -1 : seq->impl.size();
}

int64_t mrsvpr_sequence_dim(const mrsvpr_sequence* seq) {
  return seq == nullptr ? -1 : seq->impl.dim();
}

mrsvpr_status mrsvpr_sequence_copy_frame(const mrsvpr_sequence* seq,
                                         int64_t index, double* buf,
                                         size_t buf_len) {
  return wrap([&]() {
    if (seq == nullptr || buf == nullptr) {
      throw mrsvpr::InputError("sequence_copy_frame: null argument");
    }
    const std::span<const double> frame = seq->impl.frame(index);
    if (buf_len < frame.size()) {
      throw mrsvpr::InputError("sequence_copy_frame: buffer too small");
    }
    std::memcpy(buf, frame.data(), frame.size() * sizeof(double));
  });
}

void mrsvpr_sequence_destroy(mrsvpr_sequence* seq) { delete seq; }

mrsvpr_status mrsvpr_synth_generate(const mrsvpr_config* config, uint64_t seed,
                                    mrsvpr_sequence** ref_out,
                                    mrsvpr_sequence** test_out,
                                    int64_t* truth_end) {
  return wrap([&]() {
    if (config == nullptr || ref_out == nullptr || test_out == nullptr) {
      throw mrsvpr::InputError("synth_generate: null argument");
    }
    mrsvpr::SyntheticResult data =
        mrsvpr::make_synthetic(config->impl.synth, seed);
    auto ref = std::make_unique<mrsvpr_sequence>();
    auto test = std::make_unique<mrsvpr_sequence>();
    ref->impl = std::move(data.reference);
    test->impl = std::move(data.test);
    if (truth_end != nullptr) {
      *truth_end = data.truth_end;
    }
    *ref_out = ref.release();
    *test_out = test.release();
  });
}

mrsvpr_status mrsvpr_match(const mrsvpr_sequence* reference,
                           const mrsvpr_sequence* test,
                           const mrsvpr_config* config, mrsvpr_result** out) {
  return wrap([&]() {
    if (reference == nullptr || test == nullptr || config == nullptr ||
        out == nullptr) {
      throw mrsvpr::InputError("match: null argument");
    }
    auto result = std::make_unique<mrsvpr_result>();
    result->kind = mrsvpr_result::Kind::kMatch;
    result->match_config = config->impl.pipeline;
    result->ref_len = reference->impl.size();
    result->test_len = test->impl.size();
    result->dim = reference->impl.dim();
    result->match =
        mrsvpr::run_mrs(reference->impl, test->impl, config->impl.pipeline);
    *out = result.release();
  });
}

mrsvpr_status mrsvpr_baseline(const mrsvpr_sequence* reference,
                              const mrsvpr_sequence* test,
                              const mrsvpr_config* config,
                              mrsvpr_result** out) {
  return wrap([&]() {
    if (reference == nullptr || test == nullptr || config == nullptr ||
        out == nullptr) {
      throw mrsvpr::InputError("baseline: null argument");
    }
    auto result = std::make_unique<mrsvpr_result>();
    result->kind = mrsvpr_result::Kind::kBaseline;
    result->ref_len = reference->impl.size();
    result->test_len = test->impl.size();
    result->dim = reference->impl.dim();
    result->enhance = config->impl.baseline_enhance;
    result->enhance_radius = config->impl.baseline_enhance_radius;
    const auto started = std::chrono::steady_clock::now();
    result->baseline = mrsvpr::seqslam_baseline(
        reference->impl, test->impl, config->impl.pipeline.velocities,
        config->impl.baseline_enhance, config->impl.baseline_enhance_radius);
    result->wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - started)
                          .count();
    *out = result.release();
  });
}

mrsvpr_status mrsvpr_bench_run(const mrsvpr_config* config,
                               mrsvpr_result** out) {
  return wrap([&]() {
    if (config == nullptr || out == nullptr) {
      throw mrsvpr::InputError("bench_run: null argument");
    }
    mrsvpr::BenchConfig bench;
    bench.synth = config->impl.synth;
    bench.warps = config->impl.bench_warps;
    bench.trials = config->impl.bench_trials;
    bench.tolerance_frames = config->impl.bench_tolerance;
    bench.pipeline = config->impl.pipeline;
    bench.run_baseline = config->impl.bench_run_baseline;
    bench.baseline_enhance = config->impl.baseline_enhance;
    bench.baseline_enhance_radius = config->impl.baseline_enhance_radius;
    auto result = std::make_unique<mrsvpr_result>();
    result->kind = mrsvpr_result::Kind::kBench;
    result->bench = mrsvpr::run_bench(bench);
    *out = result.release();
  });
}

int64_t mrsvpr_result_best_index(const mrsvpr_result* result) {
  if (result == nullptr) {
    return -1;
  }
  switch (result->kind) {
    case mrsvpr_result::Kind::kMatch:
      return result->match.best_index;
    case mrsvpr_result::Kind::kBaseline:
      return result->baseline.best_index;
    case mrsvpr_result::Kind::kBench:
    default:
      return -1;
  }
}

double mrsvpr_result_best_score(const mrsvpr_result* result) {
  if (result == nullptr) {
    return 0.0;
  }
  switch (result->kind) {
    case mrsvpr_result::Kind::kMatch:
      return result->match.best_score;
    case mrsvpr_result::Kind::kBaseline:
      return result->baseline.best_score;
    case mrsvpr_result::Kind::kBench:
    default:
      return 0.0;
  }
}

mrsvpr_status mrsvpr_result_json(const mrsvpr_result* result,
                                 int include_timing, char* buf, size_t buf_len,
                                 size_t* needed) {
  std::string text;
  const mrsvpr_status st = wrap([&]() {
    if (result == nullptr) {
      throw mrsvpr::InputError("result_json: null result");
    }
    switch (result->kind) {
      case mrsvpr_result::Kind::kMatch:
        text = mrsvpr::match_report_json(result->match, result->match_config,
                                         result->ref_len, result->test_len,
                                         result->dim, include_timing != 0);
        break;
      case mrsvpr_result::Kind::kBaseline:
        text = mrsvpr::baseline_report_json(
            result->baseline, result->ref_len, result->test_len, result->dim,
            result->enhance, result->enhance_radius, include_timing != 0,
            result->wall_ms);
        break;
      case mrsvpr_result::Kind::kBench:
        text = mrsvpr::bench_report_json(result->bench, include_timing != 0);
        break;
    }
  });
  if (st != MRSVPR_OK) {
    return st;
  }
  return fill_buffer(text, buf, buf_len, needed);
}

mrsvpr_status mrsvpr_result_csv(const mrsvpr_result* result, const char* table,
                                char* buf, size_t buf_len, size_t* needed) {
  std::string text;
  const mrsvpr_status st = wrap([&]() {
    if (result == nullptr || table == nullptr) {
      throw mrsvpr::InputError("result_csv: null argument");
    }
    const std::string name = table;
    if (result->kind == mrsvpr_result::Kind::kMatch && name == "levels") {
      text = mrsvpr::match_levels_csv(result->match);
    } else if (result->kind == mrsvpr_result::Kind::kBench &&
               name == "trials") {
      text = mrsvpr::bench_trials_csv(result->bench);
    } else if (result->kind == mrsvpr_result::Kind::kBench &&
               name == "pr_curve") {
      text = mrsvpr::bench_pr_csv(result->bench);
    } else {
      throw mrsvpr::InputError("result_csv: no table '" + name +
                               "' for this result type");
    }
  });
  if (st != MRSVPR_OK) {
    return st;
  }
  return fill_buffer(text, buf, buf_len, needed);
}

void mrsvpr_result_destroy(mrsvpr_result* result) { delete result; }

}  // extern "C"
