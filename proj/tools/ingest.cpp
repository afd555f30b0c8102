#include "ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace fs = std::filesystem;

namespace cli {
namespace {

bool is_digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

bool has_image_extension(const std::string& name) {
  static const char* kExtensions[] = {".png", ".jpg",  ".jpeg", ".bmp",
                                      ".pgm", ".ppm",  ".pbm",  ".tif",
                                      ".tiff", ".webp"};
  std::string ext = fs::path(name).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  for (const char* candidate : kExtensions) {
    if (ext == candidate) {
      return true;
    }
  }
  return false;
}

}  // namespace

void check(mrsvpr_status status) {
  if (status != MRSVPR_OK) {
    throw CliError(status == MRSVPR_ERR_CONFIG ? 2 : 1, mrsvpr_last_error());
  }
}

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end &&
         std::isspace(static_cast<unsigned char>(text[begin])) != 0) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(text[end - 1])) != 0) {
    --end;
  }
  return std::string(text.substr(begin, end - begin));
}

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t ei = i;
      while (ei < a.size() && is_digit(a[ei])) ++ei;
      std::size_t ej = j;
      while (ej < b.size() && is_digit(b[ej])) ++ej;
      std::size_t si = i;
      while (si + 1 < ei && a[si] == '0') ++si;
      std::size_t sj = j;
      while (sj + 1 < ej && b[sj] == '0') ++sj;
      // Compare numerically: by significant length, then digit by digit.
      if (ei - si != ej - sj) {
        return ei - si < ej - sj;
      }
      const int cmp = a.compare(si, ei - si, b, sj, ej - sj);
      if (cmp != 0) {
        return cmp < 0;
      }
      // Equal value: fewer leading zeros first, for a total order.
      if (ei - i != ej - j) {
        return ei - i < ej - j;
      }
      i = ei;
      j = ej;
    } else {
      if (a[i] != b[j]) {
        return a[i] < b[j];
      }
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

mrsvpr_sequence* load_sequence(const std::string& path,
                               const mrsvpr_config* config) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    return load_image_dir(path, config);
  }
  if (fs::is_regular_file(path, ec)) {
    return load_csv(path);
  }
  throw CliError(1, "ingest: no such file or directory '" + path + "'");
}

mrsvpr_sequence* load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw CliError(1, "ingest: cannot open '" + path + "'");
  }
  std::vector<double> values;
  std::int64_t dim = -1;
  std::int64_t rows = 0;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    std::int64_t cols = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string cell =
          trim(comma == std::string::npos
                   ? std::string_view(line).substr(start)
                   : std::string_view(line).substr(start, comma - start));
      double value = 0.0;
      const char* cell_end = cell.data() + cell.size();
      const auto res = std::from_chars(cell.data(), cell_end, value);
      if (res.ec != std::errc{} || res.ptr != cell_end) {
        throw CliError(1, "ingest: csv row " + std::to_string(line_no) +
                              ", column " + std::to_string(cols + 1) +
                              ": not a number '" + cell + "' (" + path + ")");
      }
      values.push_back(value);
      ++cols;
      if (comma == std::string::npos) {
        break;
      }
      start = comma + 1;
    }
    if (dim < 0) {
      dim = cols;
    } else if (cols != dim) {
      throw CliError(1, "ingest: csv row " + std::to_string(line_no) +
                            " has " + std::to_string(cols) +
                            " values, expected " + std::to_string(dim) + " (" +
                            path + ")");
    }
    ++rows;
  }
  if (rows == 0) {
    throw CliError(1, "ingest: no descriptor rows in '" + path + "'");
  }
  mrsvpr_sequence* seq = nullptr;
  check(mrsvpr_sequence_from_descriptors(values.data(), rows, dim, &seq));
  std::cerr << "loaded " << rows << " descriptors (dim " << dim << ") from "
            << path << "\n";
  return seq;
}

mrsvpr_sequence* load_image_dir(const std::string& path,
                                const mrsvpr_config* config) {
  std::error_code ec;
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(path, ec)) {
    if (!entry.is_regular_file()) {
      continue;
    }
    const std::string name = entry.path().filename().string();
    if (has_image_extension(name)) {
      names.push_back(name);
    } else {
      std::cerr << "skipping non-image file '" << name << "'\n";
    }
  }
  if (ec) {
    throw CliError(1, "ingest: cannot list directory '" + path + "'");
  }
  if (names.empty()) {
    throw CliError(1, "ingest: no images found in '" + path + "'");
  }
  std::sort(names.begin(), names.end(), natural_less);

  std::cerr << "frame order:";
  for (const std::string& name : names) {
    std::cerr << ' ' << name;
  }
  std::cerr << "\n";

  std::vector<double> pixels;
  std::int64_t width = -1;
  std::int64_t height = -1;
  std::string first_name;
  for (const std::string& name : names) {
    const std::string full = (fs::path(path) / name).string();
    const cv::Mat img = cv::imread(full, cv::IMREAD_COLOR);
    if (img.empty()) {
      throw CliError(1, "ingest: cannot decode image '" + full + "'");
    }
    if (width < 0) {
      width = img.cols;
      height = img.rows;
      first_name = name;
      pixels.reserve(static_cast<std::size_t>(names.size()) *
                     static_cast<std::size_t>(width * height * 3));
    } else if (img.cols != width || img.rows != height) {
      throw CliError(1, "ingest: image '" + name + "' is " +
                            std::to_string(img.cols) + "x" +
                            std::to_string(img.rows) + ", expected " +
                            std::to_string(width) + "x" +
                            std::to_string(height) + " like '" + first_name +
                            "'");
    }
    for (int y = 0; y < img.rows; ++y) {
      const cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
      for (int x = 0; x < img.cols; ++x) {
        // OpenCV decodes BGR; the engine expects interleaved RGB in [0, 1].
        pixels.push_back(row[x][2] / 255.0);
        pixels.push_back(row[x][1] / 255.0);
        pixels.push_back(row[x][0] / 255.0);
      }
    }
  }
  mrsvpr_sequence* seq = nullptr;
  check(mrsvpr_sequence_from_rgb_frames(
      pixels.data(), static_cast<std::int64_t>(names.size()), width, height,
      config, &seq));
  std::cerr << "loaded " << names.size() << " frames (" << width << "x"
            << height << ") from " << path << "\n";
  return seq;
}

void write_sequence_csv(const std::string& path, const mrsvpr_sequence* seq) {
  std::ofstream out(path);
  if (!out) {
    throw CliError(1, "output: cannot write '" + path + "'");
  }
  const std::int64_t count = mrsvpr_sequence_size(seq);
  const std::int64_t dim = mrsvpr_sequence_dim(seq);
  std::vector<double> frame(static_cast<std::size_t>(dim));
  for (std::int64_t i = 0; i < count; ++i) {
    check(mrsvpr_sequence_copy_frame(seq, i, frame.data(), frame.size()));
    for (std::int64_t k = 0; k < dim; ++k) {
      if (k > 0) {
        out << ',';
      }
      out << format_double(frame[static_cast<std::size_t>(k)]);
    }
    out << '\n';
  }
  out.flush();
  if (!out) {
    throw CliError(1, "output: failed writing '" + path + "'");
  }
}

std::string format_double(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace cli
