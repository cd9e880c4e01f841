#include "cascade/store.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

namespace cascade {

namespace fs = std::filesystem;

namespace {

constexpr const char* kModelsDir = "models";
constexpr const char* kScenariosDir = "scenarios";
constexpr const char* kModelExt = ".model";
constexpr const char* kScenarioExt = ".scenario";

bool valid_id(const std::string& id) {
    if (id.empty() || id.size() > 128) return false;
    return std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_' || c == '.';
    }) && id.front() != '.';
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw StorageError("error while reading '" + path.string() + "'");
    return buf.str();
}

}  // namespace

ModelStore::ModelStore(fs::path bundled_root, std::optional<fs::path> user_root)
    : bundled_root_(std::move(bundled_root)), user_root_(std::move(user_root)) {}

std::optional<fs::path> ModelStore::locate(const std::string& dir, const std::string& id,
                                           const std::string& extension) const {
    if (!valid_id(id)) return std::nullopt;
    std::error_code ec;
    if (user_root_) {
        fs::path p = *user_root_ / dir / (id + extension);
        if (fs::is_regular_file(p, ec)) return p;
    }
    fs::path p = bundled_root_ / dir / (id + extension);
    if (fs::is_regular_file(p, ec)) return p;
    return std::nullopt;
}

std::vector<std::string> ModelStore::list_ids(const std::string& dir, const std::string& extension) const {
    std::set<std::string> ids;
    auto scan = [&](const fs::path& root) {
        std::error_code ec;
        const fs::path d = root / dir;
        if (!fs::is_directory(d, ec)) return;
        for (const auto& entry : fs::directory_iterator(d, ec)) {
            if (entry.is_regular_file(ec) && entry.path().extension() == extension) {
                const std::string id = entry.path().stem().string();
                if (valid_id(id)) ids.insert(id);
            }
        }
    };
    scan(bundled_root_);
    if (user_root_) scan(*user_root_);
    return {ids.begin(), ids.end()};
}

std::vector<std::string> ModelStore::list_models() const { return list_ids(kModelsDir, kModelExt); }

std::string ModelStore::read_model_text(const std::string& id) const {
    auto path = locate(kModelsDir, id, kModelExt);
    if (!path) throw NotFoundError("no model '" + id + "'");
    return read_file(*path);
}

ModelDocument ModelStore::load_model(const std::string& id) const {
    const std::string text = read_model_text(id);
    try {
        return load_model_document(text);
    } catch (const ParseError& e) {
        throw ParseError("model '" + id + "': " + e.what(), e.line(), e.column());
    } catch (const ValidationError& e) {
        throw ValidationError("model '" + id + "': " + e.what());
    }
}

std::vector<ScenarioDocument> ModelStore::list_scenarios() const {
    std::vector<ScenarioDocument> out;
    for (const auto& id : list_ids(kScenariosDir, kScenarioExt)) out.push_back(load_scenario(id));
    return out;
}

ScenarioDocument ModelStore::load_scenario(const std::string& id) const {
    auto path = locate(kScenariosDir, id, kScenarioExt);
    if (!path) throw NotFoundError("no scenario '" + id + "'");
    ScenarioDocument s;
    try {
        s = scenario_from_json(parse_json(read_file(*path)));
    } catch (const ValidationError& e) {
        throw ValidationError("scenario '" + id + "': " + e.what());
    }
    if (s.id != id) throw ValidationError("scenario file '" + id + "' declares id '" + s.id + "'");
    return s;
}

CascadeModel ModelStore::resolve(const ScenarioDocument& scenario) const {
    return apply_overrides(load_model(scenario.base_model).model, scenario.overrides);
}

std::string ModelStore::save_scenario(ScenarioDocument scenario) {
    if (!user_root_) throw StorageError("no writable data directory configured (use --data-dir or CASCADE_DATA_DIR)");
    // Throws NotFoundError / ValidationError before anything touches disk.
    resolve(scenario);

    scenario.id = scenario_content_id(scenario);
    if (scenario.created_at.empty()) scenario.created_at = utc_timestamp_now();
    const std::string text = serialize(scenario);

    std::lock_guard lock(write_mutex_);
    if (!scenario.note.empty()) {
        for (const auto& existing : list_scenarios()) {
            if (existing.note == scenario.note && existing.id != scenario.id)
                throw StorageError("a scenario named '" + scenario.note + "' already exists (" + existing.id + ")", true);
        }
    }

    std::error_code ec;
    const fs::path dir = *user_root_ / kScenariosDir;
    fs::create_directories(dir, ec);
    if (ec) throw StorageError("cannot create '" + dir.string() + "': " + ec.message());

    const fs::path target = dir / (scenario.id + kScenarioExt);
    if (locate(kScenariosDir, scenario.id, kScenarioExt))
        throw StorageError("scenario '" + scenario.id + "' already exists", true);

    // Write a private temporary, then hard-link it into place: the link fails
    // if the target exists, so concurrent writers of one id cannot interleave.
    const fs::path tmp = dir / ("." + scenario.id + "." +
                                std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()) + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            throw StorageError("cannot write '" + tmp.string() + "'");
        }
    }
    fs::create_hard_link(tmp, target, ec);
    const std::error_code link_error = ec;
    fs::remove(tmp, ec);
    if (link_error) {
        if (link_error == std::errc::file_exists)
            throw StorageError("scenario '" + scenario.id + "' already exists", true);
        throw StorageError("cannot store scenario '" + scenario.id + "': " + link_error.message());
    }
    return scenario.id;
}

fs::path default_bundled_root() {
    if (const char* env = std::getenv("CASCADE_BUNDLED_DIR"); env != nullptr && *env != '\0') return env;
#ifdef CASCADE_BUNDLED_DATA_DIR
    return CASCADE_BUNDLED_DATA_DIR;
#else
    return "data";
#endif
}

std::optional<fs::path> default_user_root() {
    if (const char* env = std::getenv("CASCADE_DATA_DIR"); env != nullptr && *env != '\0') return fs::path(env);
    return std::nullopt;
}

std::string utc_timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace cascade
