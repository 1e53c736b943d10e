#include "dupaudit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

namespace dupaudit {

using nlohmann::json;

std::string to_string(Language lang) {
    switch (lang) {
        case Language::PythonFamily: return "python-family";
        case Language::JavaFamily: return "java-family";
    }
    return "?";
}

std::string to_string(Split split) {
    switch (split) {
        case Split::Train: return "train";
        case Split::Valid: return "valid";
        case Split::Test: return "test";
        case Split::None: return "none";
    }
    return "?";
}

std::string to_string(DatasetRole role) {
    return role == DatasetRole::PreTraining ? "pre-training" : "fine-tuning";
}

std::optional<Language> parse_language(std::string_view text) {
    if (text == "python-family" || text == "python" || text == "py")
        return Language::PythonFamily;
    if (text == "java-family" || text == "java" || text == "csharp" || text == "c#")
        return Language::JavaFamily;
    return std::nullopt;
}

std::optional<Split> parse_split(std::string_view text) {
    if (text == "train") return Split::Train;
    if (text == "valid" || text == "validation" || text == "dev") return Split::Valid;
    if (text == "test") return Split::Test;
    if (text == "none") return Split::None;
    return std::nullopt;
}

std::optional<DatasetRole> parse_role(std::string_view text) {
    if (text == "pre-training" || text == "pretraining") return DatasetRole::PreTraining;
    if (text == "fine-tuning" || text == "finetuning") return DatasetRole::FineTuning;
    return std::nullopt;
}

namespace {

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

bool trimmed_empty(const std::string& text) {
    return is_blank(text);
}

std::string padded_index(std::size_t line_index) {
    std::string digits = std::to_string(line_index);
    if (digits.size() < 8) digits.insert(0, 8 - digits.size(), '0');
    return digits;
}

}  // namespace

IngestSummary DatasetRegistry::ingest_file(const std::string& path,
                                           const std::string& name,
                                           DatasetRole role, bool unique_code) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open dataset file: " + path);
    return ingest_stream(in, path, name, role, unique_code);
}

IngestSummary DatasetRegistry::ingest_stream(std::istream& in, const std::string& path,
                                             const std::string& name, DatasetRole role,
                                             bool unique_code) {
    if (auto it = dataset_index_.find(name); it != dataset_index_.end()) {
        const DatasetInfo& existing = datasets_[it->second];
        if (existing.path == path && existing.role == role)
            return summaries_.at(name);  // idempotent re-ingest
        throw IngestError("dataset '" + name + "' already ingested from a different source");
    }
    if (role == DatasetRole::PreTraining) {
        for (const auto& info : datasets_)
            if (info.role == DatasetRole::PreTraining)
                throw IngestError("a pre-training dataset ('" + info.name +
                                  "') is already registered; only one is allowed per audit");
    }

    DatasetInfo info;
    info.name = name;
    info.path = path;
    info.role = role;
    info.unique_code = unique_code;

    IngestSummary summary;
    summary.dataset = name;

    std::vector<Snippet> pending;
    std::unordered_set<std::string> ids_in_file;
    std::unordered_set<std::string> seen_code;  // unique-code mode

    std::string line;
    std::size_t line_index = 0;
    for (; std::getline(in, line); ++line_index) {
        if (is_blank(line)) continue;

        json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (record.is_discarded() || !record.is_object()) {
            ++summary.rejected;
            continue;
        }
        if (!record.contains("split") || !record["split"].is_string() ||
            !record.contains("language") || !record["language"].is_string() ||
            !record.contains("code") || !record["code"].is_string()) {
            ++summary.rejected;
            continue;
        }

        auto language = parse_language(record["language"].get<std::string>());
        if (!language)
            throw IngestError("unknown language tag '" + record["language"].get<std::string>() +
                              "' in " + path + " line " + std::to_string(line_index + 1));

        auto split = parse_split(record["split"].get<std::string>());
        if (!split) {
            ++summary.rejected;
            continue;
        }
        if (*split == Split::None && role != DatasetRole::PreTraining) {
            // split=none is reserved for pre-training corpora
            ++summary.rejected;
            continue;
        }

        std::string code = record["code"].get<std::string>();
        if (trimmed_empty(code)) {
            ++summary.rejected;
            continue;
        }

        Snippet snippet;
        snippet.dataset = name;
        snippet.split = *split;
        snippet.language = *language;
        snippet.source = std::move(code);
        if (record.contains("doc") && record["doc"].is_string())
            snippet.doc = record["doc"].get<std::string>();
        if (record.contains("id") && record["id"].is_string())
            snippet.id = record["id"].get<std::string>();
        else
            snippet.id = name + "/" + padded_index(line_index);

        if (!ids_in_file.insert(snippet.id).second)
            throw IngestError("duplicate snippet id '" + snippet.id + "' in " + path);
        if (snippets_.count(snippet.id))
            throw IngestError("snippet id '" + snippet.id + "' collides with an already-registered snippet");

        if (unique_code && !seen_code.insert(snippet.source).second) {
            ++summary.collapsed;
            continue;
        }
        pending.push_back(std::move(snippet));
    }

    if (pending.empty())
        summary.warnings.push_back("dataset '" + name + "' produced no snippets");

    for (Snippet& snippet : pending) {
        ++summary.accepted;
        ++summary.per_split[snippet.split];
        ++summary.per_language[snippet.language];
        info.snippet_ids.push_back(snippet.id);
        register_snippet(std::move(snippet));
    }
    std::sort(info.snippet_ids.begin(), info.snippet_ids.end());
    info.per_split = summary.per_split;
    info.per_language = summary.per_language;

    dataset_index_[name] = datasets_.size();
    datasets_.push_back(std::move(info));
    summaries_[name] = summary;
    return summary;
}

void DatasetRegistry::register_snippet(Snippet snippet) {
    std::string id = snippet.id;
    snippets_.emplace(std::move(id), std::move(snippet));
}

bool DatasetRegistry::has_dataset(const std::string& name) const {
    return dataset_index_.count(name) != 0;
}

const DatasetInfo& DatasetRegistry::dataset(const std::string& name) const {
    auto it = dataset_index_.find(name);
    if (it == dataset_index_.end()) throw IngestError("unknown dataset: " + name);
    return datasets_[it->second];
}

std::vector<std::string> DatasetRegistry::dataset_names() const {
    std::vector<std::string> names;
    names.reserve(datasets_.size());
    for (const auto& info : datasets_) names.push_back(info.name);
    return names;
}

std::optional<std::string> DatasetRegistry::pretraining_dataset() const {
    for (const auto& info : datasets_)
        if (info.role == DatasetRole::PreTraining) return info.name;
    return std::nullopt;
}

std::vector<std::string> DatasetRegistry::get_split(const std::string& name, Split split) const {
    const DatasetInfo& info = dataset(name);
    std::vector<std::string> ids;
    for (const std::string& id : info.snippet_ids)
        if (snippets_.at(id).split == split) ids.push_back(id);
    return ids;  // snippet_ids already sorted
}

bool DatasetRegistry::has_snippet(const std::string& id) const {
    return snippets_.count(id) != 0;
}

const Snippet& DatasetRegistry::snippet(const std::string& id) const {
    auto it = snippets_.find(id);
    if (it == snippets_.end()) throw IngestError("unknown snippet id: " + id);
    return it->second;
}

void DatasetRegistry::save(std::ostream& out) const {
    for (const auto& info : datasets_) {
        json rec{{"kind", "dataset"},
                 {"name", info.name},
                 {"path", info.path},
                 {"role", to_string(info.role)},
                 {"unique_code", info.unique_code}};
        const IngestSummary& summary = summaries_.at(info.name);
        rec["accepted"] = summary.accepted;
        rec["rejected"] = summary.rejected;
        rec["collapsed"] = summary.collapsed;
        out << rec.dump() << "\n";
    }
    for (const auto& [id, snippet] : snippets_) {
        json rec{{"kind", "snippet"},
                 {"id", id},
                 {"dataset", snippet.dataset},
                 {"split", to_string(snippet.split)},
                 {"language", to_string(snippet.language)},
                 {"code", snippet.source}};
        if (snippet.doc) rec["doc"] = *snippet.doc;
        out << rec.dump() << "\n";
    }
}

DatasetRegistry DatasetRegistry::load(std::istream& in) {
    DatasetRegistry registry;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank(line)) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object() || !rec.contains("kind"))
            throw IngestError("corrupt registry at line " + std::to_string(lineno));
        std::string kind = rec["kind"].get<std::string>();
        if (kind == "dataset") {
            DatasetInfo info;
            info.name = rec.at("name").get<std::string>();
            info.path = rec.at("path").get<std::string>();
            info.role = *parse_role(rec.at("role").get<std::string>());
            info.unique_code = rec.at("unique_code").get<bool>();
            IngestSummary summary;
            summary.dataset = info.name;
            summary.accepted = rec.at("accepted").get<std::size_t>();
            summary.rejected = rec.at("rejected").get<std::size_t>();
            summary.collapsed = rec.at("collapsed").get<std::size_t>();
            registry.dataset_index_[info.name] = registry.datasets_.size();
            registry.datasets_.push_back(std::move(info));
            registry.summaries_[summary.dataset] = std::move(summary);
        } else if (kind == "snippet") {
            Snippet snippet;
            snippet.id = rec.at("id").get<std::string>();
            snippet.dataset = rec.at("dataset").get<std::string>();
            snippet.split = *parse_split(rec.at("split").get<std::string>());
            snippet.language = *parse_language(rec.at("language").get<std::string>());
            snippet.source = rec.at("code").get<std::string>();
            if (rec.contains("doc")) snippet.doc = rec["doc"].get<std::string>();
            auto it = registry.dataset_index_.find(snippet.dataset);
            if (it == registry.dataset_index_.end())
                throw IngestError("registry snippet references unknown dataset '" +
                                  snippet.dataset + "'");
            DatasetInfo& info = registry.datasets_[it->second];
            info.snippet_ids.push_back(snippet.id);
            ++info.per_split[snippet.split];
            ++info.per_language[snippet.language];
            registry.register_snippet(std::move(snippet));
        } else {
            throw IngestError("corrupt registry: unknown record kind '" + kind + "'");
        }
    }
    for (auto& info : registry.datasets_) {
        std::sort(info.snippet_ids.begin(), info.snippet_ids.end());
        if (auto it = registry.summaries_.find(info.name); it != registry.summaries_.end()) {
            it->second.per_split = info.per_split;
            it->second.per_language = info.per_language;
        }
    }
    return registry;
}

}  // namespace dupaudit
