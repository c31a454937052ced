#include "cspg/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cspg {

namespace {

constexpr char kMagic[8] = {'C', 'S', 'P', 'G', 'B', 'I', 'N', '1'};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_container(const std::string& path, const nlohmann::json& header,
                     const std::vector<double>& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot open '" + path + "' for writing");
  const std::string h = header.dump();
  const std::uint64_t hlen = h.size();
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(double)));
  if (!out) throw std::runtime_error("io: write failed for '" + path + "'");
}

std::pair<nlohmann::json, std::vector<double>> read_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot open '" + path + "'");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("io: '" + path + "' is not a CSPG binary container");
  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  std::string h(hlen, '\0');
  in.read(h.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw std::runtime_error("io: truncated header in '" + path + "'");
  nlohmann::json header = nlohmann::json::parse(h);
  const std::uint64_t count = header.at("count").get<std::uint64_t>();
  std::vector<double> payload(count);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw std::runtime_error("io: truncated payload in '" + path + "'");
  return {std::move(header), std::move(payload)};
}

} // namespace

std::uint64_t fnv1a(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a(const std::string& text) { return fnv1a(text.data(), text.size()); }

std::uint64_t index_set_hash(const IndexSet& set) { return fnv1a(set.to_json()); }

std::uint64_t surrogate_hash(const ChebyshevSurrogate& surrogate) {
  std::uint64_t h = index_set_hash(surrogate.set);
  const std::uint64_t c =
      fnv1a(surrogate.coeffs.data(), surrogate.coeffs.size() * sizeof(double));
  return h ^ (c + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

void write_matrix_binary(const std::string& path, const SamplingMatrix& phi,
                         std::uint64_t set_hash) {
  nlohmann::json header;
  header["kind"] = "matrix";
  header["rows"] = phi.m;
  header["cols"] = phi.n;
  header["count"] = phi.data.size();
  header["seed"] = phi.seed;
  header["index_set_hash"] = set_hash;
  write_container(path, header, phi.data);
}

SamplingMatrix read_matrix_binary(const std::string& path) {
  auto [header, payload] = read_container(path);
  if (header.at("kind").get<std::string>() != "matrix")
    throw std::runtime_error("io: '" + path + "' does not hold a matrix");
  SamplingMatrix phi;
  phi.m = header.at("rows").get<int>();
  phi.n = header.at("cols").get<int>();
  phi.seed = header.at("seed").get<std::uint64_t>();
  if (payload.size() != static_cast<std::size_t>(phi.m) * static_cast<std::size_t>(phi.n))
    throw std::runtime_error("io: matrix payload size mismatch in '" + path + "'");
  phi.data = std::move(payload);
  return phi;
}

void write_vector_binary(const std::string& path, const std::vector<double>& values,
                         std::uint64_t set_hash) {
  nlohmann::json header;
  header["kind"] = "vector";
  header["count"] = values.size();
  header["index_set_hash"] = set_hash;
  write_container(path, header, values);
}

std::vector<double> read_vector_binary(const std::string& path) {
  auto [header, payload] = read_container(path);
  if (header.at("kind").get<std::string>() != "vector")
    throw std::runtime_error("io: '" + path + "' does not hold a vector");
  return std::move(payload);
}

std::string surrogate_to_json(const ChebyshevSurrogate& surrogate) {
  nlohmann::json j;
  j["plan"]["s"] = surrogate.plan.s;
  j["plan"]["m"] = surrogate.plan.m;
  j["plan"]["N"] = surrogate.set.size();
  j["plan"]["oversample_c"] = surrogate.plan.oversample_C;
  j["plan"]["epsilon"] = surrogate.plan.epsilon;
  j["plan"]["seed"] = surrogate.plan.seed;
  j["plan"]["sampling_dim"] = surrogate.plan.sampling_dim;
  j["plan"]["mesh_h"] = surrogate.plan.disc.h;
  j["plan"]["truncation"] = surrogate.plan.disc.B;
  j["solver"]["iterations"] = surrogate.solver_stats.iterations;
  j["solver"]["residual"] = format_double(surrogate.solver_stats.residual);
  j["solver"]["objective"] = format_double(surrogate.solver_stats.objective);
  j["solver"]["converged"] = surrogate.solver_stats.converged;
  j["index_set"] = nlohmann::json::parse(surrogate.set.to_json());
  nlohmann::json coeffs = nlohmann::json::array();
  for (double c : surrogate.coeffs) coeffs.push_back(format_double(c));
  j["coefficients"] = coeffs;
  j["hash"] = surrogate_hash(surrogate);
  return j.dump(2) + "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("io: CSV row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("io: write failed for '" + path + "'");
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("io: write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace cspg
