#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "hgut/distribution.hpp"

namespace hgut::io {

/// Named distribution generators for files of kind "generator" and for corpus
/// construction. Parameters (all optional, with defaults):
///   uniform           - none
///   biased_coord      - num_biased (1), mass0 (0.75): the first num_biased
///                       coordinates put mass0 on symbol 0, the rest uniform
///   dirichlet         - alpha (1.0): dense symmetric Dirichlet table
///   perturbed_uniform - delta (0.1): dense (1 + delta * s_x)/Z with random
///                       signs s_x
///   heavy_atom        - mass (0.5), atom (0): dense (1-mass) U + mass * delta_atom
Distribution make_generated(const GridShape& shape, const std::string& name,
                            const std::map<std::string, double>& params, std::uint64_t seed);

/// Serialize as the distribution file format:
/// {"shape":[...], "kind":"dense"|"product", "data":..., ("d_tv": ...)}
std::string distribution_to_json(const Distribution& p,
                                 std::optional<double> d_tv = std::nullopt);

/// Parse either an inline body ("dense"/"product") or a "generator" file,
/// which is materialized deterministically from its embedded seed.
Distribution parse_distribution_json(const std::string& text);

/// d_tv annotation of a distribution file, when present.
std::optional<double> parse_dtv_annotation(const std::string& text);

Distribution load_distribution_file(const std::string& path);
void save_distribution_file(const std::string& path, const Distribution& p,
                            std::optional<double> d_tv = std::nullopt);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hgut::io
