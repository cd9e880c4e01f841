#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cascade/document.hpp"

namespace cascade {

//! File-backed model and scenario documents.
//!
//! Layout under each root: `models/<id>.model` and `scenarios/<id>.scenario`.
//! The bundled root is read-only; the user root (optional) shadows it for
//! reads and receives every write. Reads are freely concurrent. Scenario
//! writes are exclusive: saving to an id that already exists fails.
class ModelStore {
public:
    explicit ModelStore(std::filesystem::path bundled_root,
                        std::optional<std::filesystem::path> user_root = std::nullopt);

    std::vector<std::string> list_models() const;
    ModelDocument load_model(const std::string& id) const;
    //! Raw document text, as stored.
    std::string read_model_text(const std::string& id) const;

    std::vector<ScenarioDocument> list_scenarios() const;
    ScenarioDocument load_scenario(const std::string& id) const;

    //! Persists the scenario under its content id and returns that id.
    //! Fills created_at when empty. Throws NotFoundError for an unknown base
    //! model, ValidationError for unknown override ids, and StorageError on
    //! I/O failure or when the id (or a non-empty note) is already taken.
    std::string save_scenario(ScenarioDocument scenario);

    //! The scenario's base model with its overrides applied.
    CascadeModel resolve(const ScenarioDocument& scenario) const;

    const std::filesystem::path& bundled_root() const { return bundled_root_; }
    const std::optional<std::filesystem::path>& user_root() const { return user_root_; }

private:
    std::optional<std::filesystem::path> locate(const std::string& dir, const std::string& id,
                                                const std::string& extension) const;
    std::vector<std::string> list_ids(const std::string& dir, const std::string& extension) const;

    std::filesystem::path bundled_root_;
    std::optional<std::filesystem::path> user_root_;
    std::mutex write_mutex_;
};

//! Path of the bundled data directory compiled into the build, overridable
//! through CASCADE_BUNDLED_DIR.
std::filesystem::path default_bundled_root();

//! CASCADE_DATA_DIR when set, otherwise none.
std::optional<std::filesystem::path> default_user_root();

std::string utc_timestamp_now();

}  // namespace cascade
