#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dupaudit {

enum class Language { PythonFamily, JavaFamily };
enum class Split { Train, Valid, Test, None };
enum class DatasetRole { PreTraining, FineTuning };

std::string to_string(Language lang);
std::string to_string(Split split);
std::string to_string(DatasetRole role);

// Accepts the canonical names plus common shorthands ("python", "java",
// "csharp"); returns nullopt for anything else.
std::optional<Language> parse_language(std::string_view text);
std::optional<Split> parse_split(std::string_view text);
std::optional<DatasetRole> parse_role(std::string_view text);

/// One ingested code sample. Immutable after ingestion; downstream modules
/// refer to snippets by id only.
struct Snippet {
    std::string id;
    std::string dataset;
    Split split = Split::None;
    Language language = Language::PythonFamily;
    std::string source;
    std::optional<std::string> doc;
};

struct IngestSummary {
    std::string dataset;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t collapsed = 0;  // dropped by unique-code mode
    std::map<Split, std::size_t> per_split;
    std::map<Language, std::size_t> per_language;
    std::vector<std::string> warnings;
};

struct DatasetInfo {
    std::string name;
    std::string path;
    DatasetRole role = DatasetRole::FineTuning;
    bool unique_code = false;
    std::vector<std::string> snippet_ids;  // sorted lexicographically
    std::map<Split, std::size_t> per_split;
    std::map<Language, std::size_t> per_language;
};

class IngestError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Registry of all corpora under audit. Single-writer during ingestion,
/// read-only afterwards.
class DatasetRegistry {
  public:
    /// Ingests a line-delimited JSON dataset file. One record per line with
    /// required keys `split`, `language`, `code` and optional `id`, `doc`.
    /// Records missing an id get `name + "/" + zero-padded line index`.
    /// Idempotent per (name, path): re-ingesting the same pair is a no-op
    /// returning the original summary.
    IngestSummary ingest_file(const std::string& path, const std::string& name,
                              DatasetRole role, bool unique_code = false);

    /// Same as ingest_file but from an already-open stream; `path` is only
    /// recorded for idempotence checks and error messages.
    IngestSummary ingest_stream(std::istream& in, const std::string& path,
                                const std::string& name, DatasetRole role,
                                bool unique_code = false);

    bool has_dataset(const std::string& name) const;
    const DatasetInfo& dataset(const std::string& name) const;
    std::vector<std::string> dataset_names() const;  // registration order
    std::optional<std::string> pretraining_dataset() const;

    /// Ids ingested with the given split, in lexicographic order.
    std::vector<std::string> get_split(const std::string& name, Split split) const;

    bool has_snippet(const std::string& id) const;
    const Snippet& snippet(const std::string& id) const;
    std::size_t size() const { return snippets_.size(); }

    /// All snippets sorted by id.
    const std::map<std::string, Snippet>& snippets() const { return snippets_; }

    /// Canonical serialization: one JSON object per line, datasets first
    /// (registration order), then snippets sorted by id. Byte-stable for a
    /// given ingestion history.
    void save(std::ostream& out) const;
    static DatasetRegistry load(std::istream& in);

  private:
    std::vector<DatasetInfo> datasets_;              // registration order
    std::map<std::string, std::size_t> dataset_index_;
    std::map<std::string, Snippet> snippets_;        // id -> snippet
    std::map<std::string, IngestSummary> summaries_; // by dataset name

    void register_snippet(Snippet snippet);
};

}  // namespace dupaudit
