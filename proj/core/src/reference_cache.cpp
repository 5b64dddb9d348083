#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mlmcfv/analysis.hpp"

namespace mlmcfv {

namespace {

constexpr const char* kMagic = "# mlmcfv reference v1";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::map<std::string, std::string> ReferenceKey::fields() const {
  return {
      {"model", model},
      {"flux", flux},
      {"nodes", std::to_string(nodes)},
      {"dx_star", format_double(dx_star)},
      {"lambda", format_double(lambda)},
      {"t_end", format_double(t_end)},
      {"alignment", alignment},
      {"output_cells", std::to_string(output_cells)},
  };
}

std::string ReferenceKey::digest() const {
  std::string joined;
  for (const auto& [k, v] : fields()) joined += k + '=' + v + '\n';
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(joined)));
  return buf;
}

std::filesystem::path reference_cache_path(const std::filesystem::path& dir,
                                           const ReferenceKey& key) {
  return dir / ("reference_" + key.digest() + ".csv");
}

void save_reference(const std::filesystem::path& file, const ReferenceKey& key,
                    const ReferenceSolution& ref) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  // Write to a temporary then rename, so readers never see partial files.
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream os(tmp);
    if (!os) throw ConfigError("cannot write reference file " + tmp.string());
    os << kMagic << '\n';
    for (const auto& [k, v] : key.fields()) os << "# " << k << '=' << v << '\n';
    os << "# digest=" << key.digest() << '\n';
    os << "# cell_updates=" << ref.cell_updates << '\n';
    os << "x,mean\n";
    const auto& g = ref.mean.grid();
    for (std::size_t j = 0; j < ref.mean.size(); ++j)
      os << format_double(g.center(j)) << ',' << format_double(ref.mean[j])
         << '\n';
  }
  std::filesystem::rename(tmp, file);
}

std::optional<ReferenceSolution> load_reference(
    const std::filesystem::path& file, const ReferenceKey& key,
    const GridPtr& output_grid) {
  std::ifstream is(file);
  if (!is) return std::nullopt;
  std::string line;
  if (!std::getline(is, line) || line != kMagic) return std::nullopt;

  std::map<std::string, std::string> meta;
  while (std::getline(is, line) && line.rfind("# ", 0) == 0) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) return std::nullopt;
    meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
  }
  for (const auto& [k, v] : key.fields()) {
    const auto it = meta.find(k);
    if (it == meta.end() || it->second != v) return std::nullopt;
  }
  if (line != "x,mean") return std::nullopt;

  std::vector<double> values;
  values.reserve(output_grid->cells());
  while (std::getline(is, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) return std::nullopt;
    values.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
  }
  if (values.size() != output_grid->cells()) return std::nullopt;

  ReferenceSolution ref;
  ref.mean = GridFunction(output_grid, std::move(values));
  ref.nodes.push_back(key.nodes);
  ref.dx_star = key.dx_star;
  ref.model = key.model;
  if (auto it = meta.find("cell_updates"); it != meta.end())
    ref.cell_updates = std::strtoull(it->second.c_str(), nullptr, 10);
  return ref;
}

}  // namespace mlmcfv
