#include "bankucb/results_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace bankucb {

namespace fs = std::filesystem;

std::string format_double(double v) { return fmt::format("{}", v); }

void write_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string trace_csv(const RegretTrace& trace, int dim) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "run,t,batch");
  for (int i = 0; i < dim; ++i) fmt::format_to(std::back_inserter(buf), ",c{}", i);
  fmt::format_to(std::back_inserter(buf), ",chosen_arm,optimal_arm,reward,inst_regret,cum_regret\n");
  for (const auto& s : trace.steps) {
    fmt::format_to(std::back_inserter(buf), "{},{},{}", trace.run, s.t, s.batch);
    for (double c : s.context) fmt::format_to(std::back_inserter(buf), ",{}", c);
    fmt::format_to(std::back_inserter(buf), ",{},{},{},{},{}\n", s.chosen, s.optimal, s.reward,
                   s.inst_regret, s.cum_regret);
  }
  return fmt::to_string(buf);
}

namespace {

template <typename T>
T parse_cell(const std::string& cell, std::size_t line_no) {
  T v{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw IoError("trace line " + std::to_string(line_no) + ": bad value '" + cell + "'");
  }
  return v;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  return cells;
}

}  // namespace

RegretTrace parse_trace_csv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("trace: missing header");
  const auto header = split_commas(line);
  if (header.size() < 8 || header[0] != "run" || header[1] != "t" || header[2] != "batch") {
    throw IoError("trace: unexpected header '" + line + "'");
  }
  const std::size_t dim = header.size() - 8;
  RegretTrace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw IoError("trace line " + std::to_string(line_no) + ": wrong number of cells");
    }
    trace.run = parse_cell<int>(cells[0], line_no);
    TraceStep s;
    s.t = parse_cell<Round>(cells[1], line_no);
    s.batch = parse_cell<int>(cells[2], line_no);
    for (std::size_t i = 0; i < dim; ++i) s.context.push_back(parse_cell<double>(cells[3 + i], line_no));
    s.chosen = parse_cell<int>(cells[3 + dim], line_no);
    s.optimal = parse_cell<int>(cells[4 + dim], line_no);
    s.reward = parse_cell<double>(cells[5 + dim], line_no);
    s.inst_regret = parse_cell<double>(cells[6 + dim], line_no);
    s.cum_regret = parse_cell<double>(cells[7 + dim], line_no);
    trace.steps.push_back(std::move(s));
  }
  return trace;
}

std::string summary_csv(const std::string& algorithm, const SummarySeries& summary,
                        const std::string& value_column) {
  const bool band = !summary.half_width.empty();
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "algorithm,t,{}{}\n", value_column,
                 band ? ",half_width" : "");
  for (std::size_t i = 0; i < summary.checkpoints.size(); ++i) {
    fmt::format_to(std::back_inserter(buf), "{},{},{}", algorithm, summary.checkpoints[i],
                   summary.mean[i]);
    if (band) fmt::format_to(std::back_inserter(buf), ",{}", summary.half_width[i]);
    fmt::format_to(std::back_inserter(buf), "\n");
  }
  return fmt::to_string(buf);
}

}  // namespace bankucb
