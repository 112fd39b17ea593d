#include "graphla/grid.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <system_error>
#include <vector>

#include "graphla/errors.hpp"

namespace graphla {

static_assert(std::endian::native == std::endian::little,
              "grid binary format is little-endian; add byte swaps for this target");

Normalized normalize(const Mat& grid) {
  if (!all_finite(grid)) throw NonFinite("normalize: input has NaN/Inf");
  const double n = static_cast<double>(grid.size());
  const double mean = grid.sum() / n;
  const double var = (grid.array() - mean).square().sum() / n;
  const double std = std::sqrt(var);
  if (std == 0.0) throw ZeroVariance("normalize: constant grid");
  Normalized out;
  out.values = (grid.array() - mean) / std;
  out.mean = mean;
  out.std = std;
  return out;
}

namespace {

constexpr std::array<char, 4> kMagic = {'G', 'R', 'D', '1'};

Mat load_binary(std::ifstream& in, const std::filesystem::path& path) {
  std::uint64_t rows = 0, cols = 0;
  if (!in.read(reinterpret_cast<char*>(&rows), 8) ||
      !in.read(reinterpret_cast<char*>(&cols), 8))
    throw MalformedHeader("truncated header: " + path.string());
  if (rows == 0 || cols == 0 || rows > (1ull << 32) || cols > (1ull << 32) ||
      rows * cols > (1ull << 34))
    throw MalformedHeader("implausible dimensions in " + path.string());
  Mat grid(static_cast<Index>(rows), static_cast<Index>(cols));
  std::vector<double> row(cols);
  for (std::uint64_t i = 0; i < rows; ++i) {
    if (!in.read(reinterpret_cast<char*>(row.data()),
                 static_cast<std::streamsize>(8 * cols)))
      throw MalformedHeader("truncated payload: " + path.string());
    for (std::uint64_t j = 0; j < cols; ++j)
      grid(static_cast<Index>(i), static_cast<Index>(j)) = row[j];
  }
  return grid;
}

double parse_double(const std::string& tok, const std::filesystem::path& path) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r'))
    --last;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw MalformedHeader("bad CSV value '" + tok + "' in " + path.string());
  return v;
}

Mat load_csv(std::ifstream& in, const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      row.push_back(parse_double(line.substr(start, comma - start), path));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DimensionMismatch("ragged CSV rows in " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw MalformedHeader("empty grid file: " + path.string());
  Mat grid(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (Index i = 0; i < grid.rows(); ++i)
    for (Index j = 0; j < grid.cols(); ++j)
      grid(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return grid;
}

// Shortest representation that parses back to the same double.
void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, ptr);
}

}  // namespace

Mat load_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::array<char, 4> head{};
  in.read(head.data(), 4);
  const auto got = in.gcount();
  if (got == 4 && head == kMagic) return load_binary(in, path);
  // Not the binary magic: reparse the whole stream as CSV.
  in.clear();
  in.seekg(0);
  return load_csv(in, path);
}

void save_grid(const Mat& grid, const std::filesystem::path& path) {
  if (grid.size() == 0) throw DimensionMismatch("refusing to save empty grid");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open for writing: " + path.string());
  if (path.extension() == ".csv") {
    std::string text;
    text.reserve(static_cast<size_t>(grid.size()) * 12);
    for (Index i = 0; i < grid.rows(); ++i) {
      for (Index j = 0; j < grid.cols(); ++j) {
        if (j) text.push_back(',');
        append_double(text, grid(i, j));
      }
      text.push_back('\n');
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
  } else {
    out.write(kMagic.data(), 4);
    const std::uint64_t rows = static_cast<std::uint64_t>(grid.rows());
    const std::uint64_t cols = static_cast<std::uint64_t>(grid.cols());
    out.write(reinterpret_cast<const char*>(&rows), 8);
    out.write(reinterpret_cast<const char*>(&cols), 8);
    std::vector<double> row(static_cast<size_t>(grid.cols()));
    for (Index i = 0; i < grid.rows(); ++i) {
      for (Index j = 0; j < grid.cols(); ++j) row[static_cast<size_t>(j)] = grid(i, j);
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(8 * row.size()));
    }
  }
  if (!out) throw IoFailure("write failed: " + path.string());
}

}  // namespace graphla
