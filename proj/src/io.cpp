#include "hiermc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace hiermc {

namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IngestionError("could not parse number '" + s + "' in " + context);
  }
}

long parse_long(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IngestionError("could not parse integer '" + s + "' in " + context);
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open: " + path.string());
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_dataset_csv(const std::filesystem::path& path,
                       const HierarchicalDataset& dataset) {
  dataset.validate();
  const int d = dataset.sources.front().obs_dim();
  int k = 0;
  if (dataset.sources.front().covariates &&
      !dataset.sources.front().covariates->empty()) {
    k = static_cast<int>(dataset.sources.front().covariates->front().size());
  }
  auto out = open_out(path);
  std::vector<std::string> header = {"source_id", "obs_index"};
  for (int a = 1; a <= d; ++a) header.push_back("y_" + std::to_string(a));
  for (int a = 1; a <= k; ++a) header.push_back("c_" + std::to_string(a));
  out << join(header) << '\n';
  for (const auto& s : dataset.sources) {
    for (int i = 0; i < s.size(); ++i) {
      std::vector<std::string> row = {std::to_string(s.source_id),
                                      std::to_string(i + 1)};
      for (int a = 0; a < d; ++a) {
        row.push_back(format_double(s.observations[i](a)));
      }
      for (int a = 0; a < k; ++a) {
        row.push_back(format_double((*s.covariates)[i](a)));
      }
      out << join(row) << '\n';
    }
  }
}

HierarchicalDataset read_dataset_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw IngestionError("empty dataset file: " + path.string());
  }
  auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "source_id" || header[1] != "obs_index") {
    throw IngestionError("bad dataset header in " + path.string());
  }
  int d = 0, k = 0;
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c] == "y_" + std::to_string(d + 1)) {
      ++d;
    } else if (header[c] == "c_" + std::to_string(k + 1)) {
      ++k;
    } else {
      throw IngestionError("unexpected dataset column '" + header[c] + "'");
    }
  }
  if (d == 0) throw IngestionError("dataset has no observation columns");

  std::map<int, SourceData> sources;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw IngestionError("row width mismatch in " + path.string());
    }
    const int sid = static_cast<int>(parse_long(cells[0], path.string()));
    auto& src = sources[sid];
    src.source_id = sid;
    Vector y(d);
    for (int a = 0; a < d; ++a) y(a) = parse_double(cells[2 + a], path.string());
    src.observations.push_back(std::move(y));
    if (k > 0) {
      if (!src.covariates) src.covariates.emplace();
      Vector c(k);
      for (int a = 0; a < k; ++a) {
        c(a) = parse_double(cells[2 + d + a], path.string());
      }
      src.covariates->push_back(std::move(c));
    }
  }
  HierarchicalDataset ds;
  for (auto& [sid, src] : sources) ds.sources.push_back(std::move(src));
  ds.validate();
  return ds;
}

void write_meta_json(const std::filesystem::path& path,
                     const HierarchicalDataset& dataset, std::uint64_t seed) {
  json j;
  j["seed"] = seed;
  j["true_values"] = json::object();
  for (const auto& [name, value] : dataset.meta) j["true_values"][name] = value;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_draws_csv(const std::filesystem::path& path, const SourceDraws& draws) {
  if (draws.draws.rows() == 0) {
    throw InputError("write_draws_csv: summary-only draws have no rows");
  }
  auto out = open_out(path);
  std::vector<std::string> header = {"source_id", "draw_index"};
  for (int a = 1; a <= draws.dim(); ++a) header.push_back("v_" + std::to_string(a));
  if (draws.nu) header.push_back("nu");
  out << join(header) << '\n';
  for (int l = 0; l < draws.draws.rows(); ++l) {
    std::vector<std::string> row = {std::to_string(draws.source_id),
                                    std::to_string(l + 1)};
    for (int a = 0; a < draws.dim(); ++a) {
      row.push_back(format_double(draws.draws(l, a)));
    }
    if (draws.nu) row.push_back(format_double(*draws.nu));
    out << join(row) << '\n';
  }
}

std::vector<SourceDraws> read_draws_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw IngestionError("empty draws file: " + path.string());
  }
  auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "source_id" || header[1] != "draw_index") {
    throw IngestionError("bad draws header in " + path.string());
  }
  bool has_nu = header.back() == "nu";
  const int q = static_cast<int>(header.size()) - 2 - (has_nu ? 1 : 0);
  if (q < 1) throw IngestionError("draws file has no value columns");

  std::map<int, std::vector<std::vector<double>>> rows;
  std::map<int, double> nus;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw IngestionError("row width mismatch in " + path.string());
    }
    const int sid = static_cast<int>(parse_long(cells[0], path.string()));
    std::vector<double> vals(q);
    for (int a = 0; a < q; ++a) vals[a] = parse_double(cells[2 + a], path.string());
    rows[sid].push_back(std::move(vals));
    if (has_nu) nus[sid] = parse_double(cells.back(), path.string());
  }
  std::vector<SourceDraws> out;
  for (auto& [sid, data] : rows) {
    Matrix m(static_cast<int>(data.size()), q);
    for (std::size_t l = 0; l < data.size(); ++l) {
      for (int a = 0; a < q; ++a) m(static_cast<int>(l), a) = data[l][a];
    }
    SourceDraws sd = summarize_draws(sid, m);
    if (has_nu) sd.nu = nus[sid];
    out.push_back(std::move(sd));
  }
  return out;
}

std::vector<SourceDraws> read_draws_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IngestionError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw IngestionError("no draw CSV files in " + dir.string());
  }
  std::vector<SourceDraws> out;
  std::map<int, std::string> dims;  // dimensionality -> example file
  for (const auto& f : files) {
    for (auto& sd : read_draws_csv(f)) {
      dims.emplace(sd.dim(), f.filename().string());
      out.push_back(std::move(sd));
    }
  }
  if (dims.size() > 1) {
    std::string msg = "mixed draw dimensionalities:";
    for (const auto& [q, file] : dims) {
      msg += " dim " + std::to_string(q) + " (" + file + ")";
    }
    throw IngestionError(msg);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.source_id < b.source_id;
  });
  return out;
}

void write_summaries_json(const std::filesystem::path& path,
                          const std::vector<SourceDraws>& sources) {
  json arr = json::array();
  for (const auto& s : sources) {
    json item;
    item["source_id"] = s.source_id;
    item["num_draws"] = s.num_draws;
    item["mean"] = std::vector<double>(s.mean_cache.data(),
                                       s.mean_cache.data() + s.mean_cache.size());
    json cov = json::array();
    for (int a = 0; a < s.cov_cache.dim(); ++a) {
      json row = json::array();
      for (int b = 0; b < s.cov_cache.dim(); ++b) row.push_back(s.cov_cache(a, b));
      cov.push_back(row);
    }
    item["cov"] = cov;
    if (s.nu) item["nu"] = *s.nu;
    arr.push_back(item);
  }
  auto out = open_out(path);
  out << arr.dump(2) << '\n';
}

std::vector<SourceDraws> read_summaries_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  json arr;
  try {
    in >> arr;
  } catch (const json::exception& e) {
    throw IngestionError("bad summaries JSON in " + path.string() + ": " + e.what());
  }
  if (!arr.is_array() || arr.empty()) {
    throw IngestionError("summaries JSON must be a non-empty array");
  }
  std::vector<SourceDraws> out;
  for (const auto& item : arr) {
    if (!item.contains("source_id") || !item.contains("mean") ||
        !item.contains("cov")) {
      throw IngestionError("summaries entry needs source_id, mean and cov");
    }
    const auto mean_list = item["mean"].get<std::vector<double>>();
    Vector mean(static_cast<int>(mean_list.size()));
    for (std::size_t i = 0; i < mean_list.size(); ++i) {
      mean(static_cast<int>(i)) = mean_list[i];
    }
    const auto cov_rows = item["cov"].get<std::vector<std::vector<double>>>();
    Matrix cov(static_cast<int>(cov_rows.size()), static_cast<int>(cov_rows.size()));
    for (std::size_t a = 0; a < cov_rows.size(); ++a) {
      if (cov_rows[a].size() != cov_rows.size()) {
        throw IngestionError("summaries cov must be square");
      }
      for (std::size_t b = 0; b < cov_rows.size(); ++b) {
        cov(static_cast<int>(a), static_cast<int>(b)) = cov_rows[a][b];
      }
    }
    std::optional<double> nu;
    if (item.contains("nu")) nu = item["nu"].get<double>();
    const int num_draws = item.value("num_draws", 0);
    out.push_back(source_draws_from_summary(item["source_id"].get<int>(), mean,
                                            repair_spd(std::move(cov)),
                                            num_draws, nu));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.source_id < b.source_id;
  });
  return out;
}

void write_trace_csv(const std::filesystem::path& path, const ChainTrace& trace) {
  auto out = open_out(path);
  std::vector<std::string> header = {"iteration"};
  header.insert(header.end(), trace.names.begin(), trace.names.end());
  out << join(header) << '\n';
  for (int t = trace.burn_in; t < trace.iterations(); ++t) {
    out << (t - trace.burn_in + 1);
    for (int c = 0; c < trace.draws.cols(); ++c) {
      out << ',' << format_double(trace.draws(t, c));
    }
    out << '\n';
  }
}

void write_report_csv(const std::filesystem::path& path,
                      const std::vector<ExperimentReport>& reports) {
  auto out = open_out(path);
  out << "method,parameter,coverage,mse,avg_seconds\n";
  for (const auto& r : reports) {
    for (const auto& p : r.params) {
      out << r.method << ',' << p.parameter << ',' << format_double(p.coverage)
          << ',' << format_double(p.mse) << ',' << format_double(r.avg_seconds)
          << '\n';
    }
  }
}

void write_report_json(const std::filesystem::path& path,
                       const std::vector<ExperimentReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json item;
    item["method"] = r.method;
    item["avg_seconds"] = r.avg_seconds;
    item["mse_sum"] = r.mse_sum();
    item["mse_mean"] = r.mse_mean();
    json params = json::array();
    for (const auto& p : r.params) {
      params.push_back({{"parameter", p.parameter},
                        {"coverage", p.coverage},
                        {"mse", p.mse}});
    }
    item["params"] = params;
    json reps = json::array();
    for (const auto& rep : r.replicates) {
      json jr;
      for (const auto& [name, mean] : rep.post_mean) {
        jr[name] = {{"mean", mean},
                    {"ci_lo", rep.ci.at(name).lo},
                    {"ci_hi", rep.ci.at(name).hi}};
      }
      jr["seconds"] = rep.seconds;
      reps.push_back(jr);
    }
    item["replicates"] = reps;
    arr.push_back(item);
  }
  auto out = open_out(path);
  out << arr.dump(2) << '\n';
}

std::uint64_t file_hash(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::uint64_t h = 1469598103934665603ULL;
  char ch;
  while (in.get(ch)) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace hiermc
