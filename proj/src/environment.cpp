#include "bankucb/environment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace bankucb {

Environment::Environment(int num_arms, int dim, double sigma)
    : num_arms_(num_arms), dim_(dim), sigma_(sigma) {
  if (num_arms < 2) throw std::invalid_argument("environment needs at least two arms");
  if (dim < 1) throw std::invalid_argument("environment dimension must be at least 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("noise scale must be nonnegative");
  }
}

void Environment::check_arm(ArmId arm) const {
  if (arm < 0 || arm >= num_arms_) throw std::out_of_range("arm outside [0, K)");
}

double Environment::optimal_value(const Arrival& arrival) const {
  double best = mean_reward(0, arrival);
  for (ArmId a = 1; a < num_arms_; ++a) best = std::max(best, mean_reward(a, arrival));
  return best;
}

ArmId Environment::optimal_arm(const Arrival& arrival) const {
  ArmId best = 0;
  double best_value = mean_reward(0, arrival);
  for (ArmId a = 1; a < num_arms_; ++a) {
    const double v = mean_reward(a, arrival);
    if (v > best_value) {
      best = a;
      best_value = v;
    }
  }
  return best;
}

double Environment::draw_reward(ArmId arm, const Arrival& arrival, Rng& noise) const {
  const double mean = mean_reward(arm, arrival);
  if (sigma_ == 0.0) return mean;
  std::normal_distribution<double> gauss(0.0, sigma_);
  return mean + gauss(noise);
}

namespace {

class UniformCubeStream final : public ContextStream {
public:
  UniformCubeStream(int dim, std::uint64_t seed) : dim_(dim), rng_(seed) {}

  Arrival next() override {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(dim_));
    for (auto& v : x) v = u(rng_);
    return Arrival{Context(std::move(x)), -1};
  }

private:
  int dim_;
  Rng rng_;
};

class PermutationStream final : public ContextStream {
public:
  PermutationStream(const DatasetEnvironment& env, std::vector<std::size_t> order)
      : env_(env), order_(std::move(order)) {}

  Arrival next() override {
    if (pos_ >= order_.size()) throw std::out_of_range("dataset stream exhausted");
    const std::size_t row = order_[pos_++];
    return Arrival{env_.features()[row], static_cast<std::ptrdiff_t>(row)};
  }

private:
  const DatasetEnvironment& env_;
  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
};

double norm2(const Context& x) {
  double acc = 0.0;
  for (double v : x.coords()) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace

std::unique_ptr<ContextStream> UniformCubeEnvironment::stream(std::uint64_t seed) const {
  return std::make_unique<UniformCubeStream>(dim(), seed);
}

Box UniformCubeEnvironment::support() const {
  const auto d = static_cast<std::size_t>(dim());
  return Box{std::vector<double>(d, -1.0), std::vector<double>(d, 1.0)};
}

BumpEnvironment::BumpEnvironment(BumpSpec spec, int dim, double sigma)
    : UniformCubeEnvironment(2, dim, sigma), spec_(std::move(spec)) {
  if (spec_.centers.empty()) throw std::invalid_argument("need at least one bump");
  if (spec_.centers.size() != spec_.signs.size()) {
    throw std::invalid_argument("one sign per bump center");
  }
  if (!(spec_.radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
  if (!(spec_.height > 0.0)) throw std::invalid_argument("bump height must be positive");
  for (const auto& c : spec_.centers) {
    if (c.dim() != static_cast<std::size_t>(dim)) throw DimensionError(dim, c.dim());
  }
  for (int v : spec_.signs) {
    if (v != 1 && v != -1) throw std::invalid_argument("bump signs must be +1 or -1");
  }
}

double BumpEnvironment::mean(ArmId arm, const Context& x) const {
  check_arm(arm);
  if (arm == 1) return 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < spec_.centers.size(); ++j) {
    if (euclidean_distance(x.coords(), spec_.centers[j].coords()) <= spec_.radius) {
      total += spec_.signs[j] * spec_.height;
    }
  }
  return total;
}

NormEnvironment::NormEnvironment(int dim, double sigma) : UniformCubeEnvironment(2, dim, sigma) {}

double NormEnvironment::mean(ArmId arm, const Context& x) const {
  check_arm(arm);
  const double r = norm2(x);
  return arm == 0 ? r : 0.5 - r;
}

BumpEnvironment make_setting1(int dim, int num_bumps, double radius, double height, double sigma,
                              Rng& rng) {
  if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
  if (num_bumps < 1) throw std::invalid_argument("need at least one bump");
  BumpSpec spec;
  spec.radius = radius;
  spec.height = height;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int j = 0; j < num_bumps; ++j) {
    std::vector<double> c(static_cast<std::size_t>(dim));
    for (auto& v : c) v = u(rng);
    spec.centers.emplace_back(std::move(c));
    spec.signs.push_back(coin(rng) ? 1 : -1);
  }
  return BumpEnvironment(std::move(spec), dim, sigma);
}

NormEnvironment make_setting2(int dim, double sigma) { return NormEnvironment(dim, sigma); }

DatasetEnvironment::DatasetEnvironment(std::vector<std::vector<double>> features,
                                       std::vector<int> labels,
                                       std::vector<std::string> class_names,
                                       std::uint64_t runs_seed)
    : Environment(static_cast<int>(class_names.size()),
                  features.empty() ? 1 : static_cast<int>(features.front().size()), 0.0),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)),
      runs_seed_(runs_seed) {
  if (features.empty()) throw DatasetError("dataset has no rows");
  if (features.size() != labels_.size()) throw DatasetError("one label per feature row");
  features_.reserve(features.size());
  for (auto& row : features) {
    if (row.size() != static_cast<std::size_t>(dim())) throw DimensionError(dim(), row.size());
    features_.emplace_back(std::move(row));
  }
  for (int y : labels_) {
    if (y < 0 || y >= num_arms()) throw DatasetError("label outside [0, K)");
  }
}

double DatasetEnvironment::mean_reward(ArmId arm, const Arrival& arrival) const {
  check_arm(arm);
  if (arrival.row < 0 || static_cast<std::size_t>(arrival.row) >= labels_.size()) {
    throw std::out_of_range("dataset rewards need the arrival's row index");
  }
  return labels_[static_cast<std::size_t>(arrival.row)] == arm ? 1.0 : 0.0;
}

std::vector<std::size_t> DatasetEnvironment::permutation(std::uint64_t seed) const {
  std::vector<std::size_t> order(labels_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

std::vector<std::size_t> DatasetEnvironment::permutation_for_run(std::uint64_t run) const {
  return permutation(derive_seed(runs_seed_, "contexts", run));
}

std::unique_ptr<ContextStream> DatasetEnvironment::stream(std::uint64_t seed) const {
  return std::make_unique<PermutationStream>(*this, permutation(seed));
}

Box DatasetEnvironment::support() const {
  const auto d = static_cast<std::size_t>(dim());
  return Box{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
}

namespace {

std::string trim(std::string_view s) {
  const auto ws = " \t\r\n\"";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    cells.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return cells;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

DatasetEnvironment load_dataset(const std::filesystem::path& path, const DatasetOptions& options,
                                std::uint64_t runs_seed) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open dataset file " + path.string());

  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (lines.empty() && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!blank(line)) lines.push_back(std::move(line));
  }
  if (lines.empty()) throw DatasetError(path.string() + ": file is empty");

  char delim = options.delimiter;
  if (delim == 0) {
    const auto& first = lines.front();
    delim = (first.find('\t') != std::string::npos && first.find(',') == std::string::npos) ? '\t'
                                                                                          : ',';
  }

  std::size_t first_data = 0;
  std::vector<std::string> header;
  if (options.has_header) {
    header = split(lines.front(), delim);
    first_data = 1;
  }
  if (first_data >= lines.size()) throw DatasetError(path.string() + ": no data rows");

  const std::size_t columns = split(lines[first_data], delim).size();
  std::size_t label_col = 0;
  if (const auto* name = std::get_if<std::string>(&options.label_column)) {
    if (!options.has_header) {
      throw DatasetError("label column '" + *name + "' given by name but the file has no header");
    }
    const auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) {
      throw DatasetError(path.string() + ": no column named '" + *name + "'");
    }
    label_col = static_cast<std::size_t>(it - header.begin());
  } else {
    label_col = std::get<std::size_t>(options.label_column);
  }
  if (label_col >= columns) {
    throw DatasetError(path.string() + ": label column index " + std::to_string(label_col) +
                       " out of range for " + std::to_string(columns) + " columns");
  }
  if (columns < 2) throw DatasetError(path.string() + ": need at least one feature column");

  std::vector<std::vector<double>> features;
  std::vector<std::string> raw_labels;
  for (std::size_t i = first_data; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto cells = split(lines[i], delim);
    if (cells.size() != columns) {
      throw DatasetError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                         std::to_string(columns) + " cells, found " +
                         std::to_string(cells.size()));
    }
    if (cells[label_col].empty()) {
      throw DatasetError(path.string() + ":" + std::to_string(line_no) + ": missing label");
    }
    std::vector<double> row;
    row.reserve(columns - 1);
    for (std::size_t c = 0; c < columns; ++c) {
      if (c == label_col) continue;
      const auto& cell = cells[c];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw DatasetError(path.string() + ":" + std::to_string(line_no) + ": column " +
                           std::to_string(c) + " value '" + cell + "' is not numeric");
      }
      row.push_back(v);
    }
    features.push_back(std::move(row));
    raw_labels.push_back(std::move(cells[label_col]));
  }

  std::map<std::string, int> classes;
  for (const auto& y : raw_labels) classes.emplace(y, 0);
  if (classes.size() < 2) {
    throw DatasetError(path.string() + ": need at least two distinct labels, found " +
                       std::to_string(classes.size()));
  }
  std::vector<std::string> class_names;
  for (auto& [name, id] : classes) {
    id = static_cast<int>(class_names.size());
    class_names.push_back(name);
  }
  std::vector<int> labels;
  labels.reserve(raw_labels.size());
  for (const auto& y : raw_labels) labels.push_back(classes.at(y));

  const std::size_t d = columns - 1;
  for (std::size_t c = 0; c < d; ++c) {
    double lo = features.front()[c];
    double hi = lo;
    for (const auto& row : features) {
      lo = std::min(lo, row[c]);
      hi = std::max(hi, row[c]);
    }
    const double range = hi - lo;
    for (auto& row : features) row[c] = range > 0.0 ? (row[c] - lo) / range : 0.0;
  }

  return DatasetEnvironment(std::move(features), std::move(labels), std::move(class_names),
                            runs_seed);
}

}  // namespace bankucb
