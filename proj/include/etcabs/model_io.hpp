#ifndef ETCABS_MODEL_IO_HPP_
#define ETCABS_MODEL_IO_HPP_

#include <string>
#include <vector>

#include "etcabs/types.hpp"

namespace etcabs {

/// Raised on schema violations; message carries the offending field path.
class ManifestError : public EtcabsError {
 public:
  using EtcabsError::EtcabsError;
};

/// Parses and validates a manifest document (JSON text).
RunManifest parse_manifest(const std::string& document);

/// Reads a manifest from a file path.
RunManifest load_manifest(const std::string& path);

/// Canonical serialization; parse_manifest(serialize_manifest(m)) == m.
std::string serialize_manifest(const RunManifest& m);

/// A named-column table of scalars for CSV emission.
struct Table {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
};

/// RFC-4180-style CSV with a header row; values printed with 9 significant
/// digits. Throws on ragged columns.
std::string emit_csv(const Table& table);

}  // namespace etcabs

#endif
