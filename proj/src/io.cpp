#include "backscatter/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace backscatter {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

}  // namespace

void write_profile_csv(const std::filesystem::path& path, const RadialProfile& profile) {
  if (!profile.is_sampled())
    throw std::invalid_argument("write_profile_csv: analytic profiles have no node list");
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  out << "rho,re,im\n";
  for (std::size_t i = 0; i < profile.nodes().size(); ++i)
    out << fmt(profile.nodes()[i]) << ',' << fmt(profile.values()[i].real()) << ','
        << fmt(profile.values()[i].imag()) << '\n';
  if (!out) fail(path, "write failed");
}

RadialProfile read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  std::string line;
  if (!std::getline(in, line) || line.rfind("rho,re,im", 0) != 0)
    fail(path, "expected header rho,re,im");
  std::vector<double> rho;
  std::vector<Complex> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double r, re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &re, &im) != 3)
      fail(path, "bad row: " + line);
    rho.push_back(r);
    values.emplace_back(re, im);
  }
  return RadialProfile::sampled(std::move(rho), std::move(values));
}

void write_field(const std::filesystem::path& path, const Field& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "bsfield dim=" << field.grid.dim << " extent=" << fmt(field.grid.half_extent)
      << " points=" << field.grid.points_per_axis << "\n";
  out.write(reinterpret_cast<const char*>(field.samples.data()),
            static_cast<std::streamsize>(field.samples.size() * sizeof(Complex)));
  if (!out) fail(path, "write failed");
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  std::string header;
  if (!std::getline(in, header)) fail(path, "missing header");
  int dim = 0, points = 0;
  double extent = 0.0;
  if (std::sscanf(header.c_str(), "bsfield dim=%d extent=%lf points=%d", &dim, &extent,
                  &points) != 3)
    fail(path, "bad header: " + header);
  CartesianGrid grid(dim, extent, points);
  std::vector<Complex> samples(grid.node_count());
  in.read(reinterpret_cast<char*>(samples.data()),
          static_cast<std::streamsize>(samples.size() * sizeof(Complex)));
  if (in.gcount() != static_cast<std::streamsize>(samples.size() * sizeof(Complex)))
    fail(path, "truncated sample block");
  return Field(grid, std::move(samples));
}

void write_dispersion_csv(const std::filesystem::path& path, const DispersionSample& sample) {
  sample.validate();
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  out << "eta_abs,r,re,im\n";
  for (std::size_t i = 0; i < sample.r_values.size(); ++i)
    out << fmt(sample.eta_abs) << ',' << fmt(sample.r_values[i]) << ','
        << fmt(sample.values[i].real()) << ',' << fmt(sample.values[i].imag()) << '\n';
  if (!out) fail(path, "write failed");
}

void write_born_csv(const std::filesystem::path& path, const BornResult& result) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  const bool has_q3 = result.q3hat.has_value();
  out << "eta_abs,re_qhat,im_qhat,re_q2,im_q2";
  if (has_q3) out << ",re_q3,im_q3";
  out << ",re_qB,im_qB,re_res,im_res\n";
  for (std::size_t i = 0; i < result.eta.size(); ++i) {
    if (result.masked[i]) continue;
    out << fmt(result.eta[i]) << ',' << fmt(result.qhat[i].real()) << ','
        << fmt(result.qhat[i].imag()) << ',' << fmt(result.q2hat[i].real()) << ','
        << fmt(result.q2hat[i].imag());
    if (has_q3)
      out << ',' << fmt((*result.q3hat)[i].real()) << ',' << fmt((*result.q3hat)[i].imag());
    out << ',' << fmt(result.qB_hat[i].real()) << ',' << fmt(result.qB_hat[i].imag()) << ','
        << fmt(result.residual_hat[i].real()) << ',' << fmt(result.residual_hat[i].imag())
        << '\n';
  }
  if (!out) fail(path, "write failed");
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open config");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    const std::string trimmed = strip(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      fail(path, "line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = strip(trimmed.substr(0, eq));
    const std::string value = strip(trimmed.substr(eq + 1));
    if (key.empty()) fail(path, "line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) fail(path, "duplicate key " + key);
    kv[key] = value;
  }
  return kv;
}

}  // namespace backscatter
