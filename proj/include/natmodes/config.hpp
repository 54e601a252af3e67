#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "natmodes/completeness.hpp"
#include "natmodes/modefinder.hpp"

namespace natmodes {

struct QuarterWaveSpec {
  double ratio = 1.5;
  int layers = 8;
  Polarization polarization = Polarization::TE;
};

struct ModesConfig {
  enum class Method { Contour, Polynomial } method = Method::Contour;
  SearchRegion region;                 // Contour
  std::pair<int, int> periods{0, 0};   // Polynomial
};

struct SpectrumConfig {
  double omega_min = 0.0;
  double omega_max = 1.0;
  int points = 1001;
};

struct CensusConfig {
  SearchRegion region;
  std::size_t layer = 1;
  bool positive_pole = true;
  std::vector<double> radii{0.1, 0.05, 0.02, 0.01};
};

struct CompletenessConfig {
  enum class Source { Synthetic, Modes, Constancy } source = Source::Synthetic;
  SyntheticSet set = SyntheticSet::Sine;
  std::size_t pairs = 1000;
  TailModel tail = TailModel::AsymptoticPairing;
  ClassifyOptions classify;
  // Modes source
  ZMap z_map = ZMap::LargeFrequency;
  std::size_t layer = 1;
  SearchRegion region;
  // Constancy source
  double A = 0.25;
  double d = 1.0;
  std::size_t M = 100000;
  double z_min = 100.0;
  double z_max = 1000.0;
  int samples = 41;
};

struct AsymptoticsConfig {
  std::size_t layer = 1;
  std::vector<int> m{10, 20, 50, 100};
  std::optional<std::pair<int, int>> near_resonance;
};

struct RunConfig {
  Stack stack;
  std::optional<QuarterWaveSpec> quarterwave;  // set when the stack came from a quarterwave block
  std::optional<ModesConfig> modes;
  std::optional<SpectrumConfig> spectrum;
  std::optional<CensusConfig> census;
  std::optional<CompletenessConfig> completeness;
  std::optional<AsymptoticsConfig> asymptotics;
  std::uint64_t seed = 0;
  /// FNV-1a of the canonical (key-sorted, compact) JSON dump.
  std::uint64_t fingerprint = 0;
};

/// Parses and validates a config document. Unknown keys, wrong types and
/// broken invariants raise Error(ErrorKind::Config) naming the JSON path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

std::string hex64(std::uint64_t value);

}  // namespace natmodes
