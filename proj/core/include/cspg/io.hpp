#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspg/multiindex.hpp"
#include "cspg/pipeline.hpp"
#include "cspg/recovery.hpp"

namespace cspg {

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a(const void* data, std::size_t len);
std::uint64_t fnv1a(const std::string& text);

/// Hash of the canonical JSON serialization of an index set.
std::uint64_t index_set_hash(const IndexSet& set);

/// Hash of a surrogate's raw coefficient bytes (determinism checks).
std::uint64_t surrogate_hash(const ChebyshevSurrogate& surrogate);

/// Binary container: magic "CSPGBIN1", u64 header length, JSON header
/// (dims, seed, index-set hash, kind), then raw little-endian doubles.
void write_matrix_binary(const std::string& path, const SamplingMatrix& phi,
                         std::uint64_t set_hash);
SamplingMatrix read_matrix_binary(const std::string& path);

void write_vector_binary(const std::string& path, const std::vector<double>& values,
                         std::uint64_t set_hash);
std::vector<double> read_vector_binary(const std::string& path);

/// Surrogate as JSON: plan summary, index set, coefficients (full precision).
std::string surrogate_to_json(const ChebyshevSurrogate& surrogate);

/// CSV with a header row; each row must match the header's column count.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace cspg
