#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "discoreward/error.hpp"
#include "discoreward/motif_engine.hpp"
#include "versioning.hpp"

namespace discoreward {

namespace {
constexpr const char* kMotifSetFormat = "discoreward.motif_set";
}

std::string serialize_motif_set(const DistinctiveMotifSet& dset) {
  nlohmann::ordered_json out;
  out["format"] = kMotifSetFormat;
  out["version"] = detail::kFileFormatVersion;
  out["k"] = dset.k();
  out["fingerprint"] = dset.fingerprint();
  out["human_documents"] = dset.human_documents();
  out["machine_documents"] = dset.machine_documents();
  out["mean_delta"] = dset.mean_delta();
  out["std_delta"] = dset.std_delta();
  out["threshold"] = dset.threshold();
  auto motifs = nlohmann::ordered_json::array();
  for (const auto& e : dset.entries()) {
    nlohmann::ordered_json m;
    m["key"] = e.key;
    m["document_frequency"] = e.document_frequency;
    m["idf"] = e.idf;
    m["human_mfidf"] = e.human_mean;
    m["machine_mfidf"] = e.machine_mean;
    m["delta"] = e.delta;
    m["distinctive"] = e.distinctive;
    motifs.push_back(std::move(m));
  }
  out["motifs"] = std::move(motifs);
  return out.dump(2) + "\n";
}

DistinctiveMotifSet parse_motif_set(std::string_view text) {
  const auto root = detail::parse_versioned(text, kMotifSetFormat);
  try {
    std::vector<MotifStats> entries;
    for (const auto& m : root.at("motifs")) {
      MotifStats s;
      s.key = m.at("key").get<std::string>();
      s.document_frequency = m.at("document_frequency").get<std::size_t>();
      s.idf = m.at("idf").get<double>();
      s.human_mean = m.at("human_mfidf").get<double>();
      s.machine_mean = m.at("machine_mfidf").get<double>();
      s.delta = m.at("delta").get<double>();
      s.distinctive = m.at("distinctive").get<bool>();
      entries.push_back(std::move(s));
    }
    DistinctiveMotifSet dset(root.at("k").get<int>(), std::move(entries),
                             root.at("mean_delta").get<double>(),
                             root.at("std_delta").get<double>(),
                             root.at("human_documents").get<std::size_t>(),
                             root.at("machine_documents").get<std::size_t>());
    if (dset.fingerprint() != root.at("fingerprint").get<std::string>()) {
      throw Error(ErrorCode::kFingerprintMismatch,
                  "motif set fingerprint does not match its vocabulary");
    }
    return dset;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptFile, std::string("motif set file: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kFingerprintMismatch) throw;
    throw Error(ErrorCode::kCorruptFile, std::string("motif set file: ") + e.what());
  }
}

void save_motif_set(const DistinctiveMotifSet& dset, const std::string& path) {
  detail::write_file(path, serialize_motif_set(dset));
}

DistinctiveMotifSet load_motif_set(const std::string& path) {
  return parse_motif_set(detail::read_file(path));
}

}  // namespace discoreward
