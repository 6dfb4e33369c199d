#include "moeope/core/dataset_io.hpp"

#include "moeope/core/error.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace moeope {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

bool has_pb_column(const Dataset& ds) {
  if (ds.empty()) return false;
  for (const auto& tr : ds.transitions())
    if (!tr.behavior_prob) return false;
  return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error("dataset csv line " + std::to_string(line_no) + ": cannot parse '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s, std::size_t line_no) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error("dataset csv line " + std::to_string(line_no) + ": cannot parse '" + s + "'");
  return v;
}

}  // namespace

void write_dataset_csv(const Dataset& ds, std::ostream& out) {
  const std::size_t d = ds.dim();
  const bool pb = has_pb_column(ds);
  out << "traj_id,t";
  for (std::size_t i = 0; i < d; ++i) out << ",x_" << i;
  out << ",a,r";
  for (std::size_t i = 0; i < d; ++i) out << ",y_" << i;
  if (pb) out << ",pb";
  out << '\n';
  for (const auto& tr : ds.transitions()) {
    out << tr.traj_id << ',' << tr.t;
    for (Eigen::Index i = 0; i < tr.x.size(); ++i) out << ',' << format_double(tr.x[i]);
    out << ',' << tr.a.value << ',' << format_double(tr.r);
    for (Eigen::Index i = 0; i < tr.x_next.size(); ++i) out << ',' << format_double(tr.x_next[i]);
    if (pb) out << ',' << format_double(*tr.behavior_prob);
    out << '\n';
  }
}

std::string dataset_descriptor_json(const Dataset& ds) {
  nlohmann::ordered_json j;
  j["dim"] = ds.dim();
  j["n_actions"] = ds.n_actions();
  auto starts = nlohmann::ordered_json::array();
  for (const auto& s : ds.initial_states())
    starts.push_back(std::vector<double>(s.data(), s.data() + s.size()));
  j["initial_states"] = std::move(starts);
  return j.dump(2);
}

void save_dataset(const Dataset& ds, const std::filesystem::path& csv_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw Error("cannot write " + csv_path.string());
  write_dataset_csv(ds, csv);
  std::ofstream meta(csv_path.string() + ".json");
  if (!meta) throw Error("cannot write " + csv_path.string() + ".json");
  meta << dataset_descriptor_json(ds) << '\n';
}

Dataset read_dataset(std::istream& csv, const std::string& descriptor_json) {
  const auto meta = nlohmann::json::parse(descriptor_json);
  const std::size_t d = meta.at("dim").get<std::size_t>();
  const std::size_t n_actions = meta.at("n_actions").get<std::size_t>();
  std::vector<StateVec> starts;
  for (const auto& s : meta.at("initial_states")) {
    const auto v = s.get<std::vector<double>>();
    if (v.size() != d) throw DimensionMismatch("initial state in descriptor has wrong dimension");
    starts.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(d)));
  }

  std::string line;
  if (!std::getline(csv, line)) throw Error("dataset csv is empty");
  const auto header = split_csv_line(line);
  const std::size_t base_cols = 2 + d + 2 + d;
  const bool pb = header.size() == base_cols + 1 && header.back() == "pb";
  if (header.size() != base_cols && !pb)
    throw Error("dataset csv header has " + std::to_string(header.size()) +
                " columns, expected " + std::to_string(base_cols));

  std::vector<Transition> transitions;
  std::size_t line_no = 1;
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw Error("dataset csv line " + std::to_string(line_no) + " has " +
                  std::to_string(cells.size()) + " columns");
    Transition tr;
    std::size_t c = 0;
    tr.traj_id = parse_int(cells[c++], line_no);
    tr.t = parse_int(cells[c++], line_no);
    tr.x.resize(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) tr.x[static_cast<Eigen::Index>(i)] = parse_double(cells[c++], line_no);
    tr.a = ActionId(static_cast<std::uint32_t>(parse_int(cells[c++], line_no)));
    tr.r = parse_double(cells[c++], line_no);
    tr.x_next.resize(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i)
      tr.x_next[static_cast<Eigen::Index>(i)] = parse_double(cells[c++], line_no);
    if (pb) tr.behavior_prob = parse_double(cells[c++], line_no);
    transitions.push_back(std::move(tr));
  }
  return Dataset(std::move(transitions), std::move(starts), d, n_actions);
}

Dataset load_dataset(const std::filesystem::path& csv_path) {
  std::ifstream csv(csv_path);
  if (!csv) throw Error("cannot read " + csv_path.string());
  std::ifstream meta(csv_path.string() + ".json");
  if (!meta) throw Error("cannot read " + csv_path.string() + ".json");
  std::stringstream buf;
  buf << meta.rdbuf();
  return read_dataset(csv, buf.str());
}

}  // namespace moeope
