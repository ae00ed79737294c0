#include "isc/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "isc/model.hpp"

namespace isc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void storage_error(const std::string& what, const fs::path& path, int err) {
    throw Error(ErrorCode::Storage, what + " " + path.string() + ": " + std::strerror(err),
                {{"storage", what}});
}

class FileDescriptor {
public:
    explicit FileDescriptor(int fd) : fd_(fd) {}
    ~FileDescriptor() {
        if (fd_ >= 0) ::close(fd_);
    }
    FileDescriptor(const FileDescriptor&) = delete;
    FileDescriptor& operator=(const FileDescriptor&) = delete;

    [[nodiscard]] int get() const { return fd_; }
    int release() { return std::exchange(fd_, -1); }

private:
    int fd_;
};

void fsync_directory(const fs::path& dir) {
    FileDescriptor fd(::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC));
    if (fd.get() >= 0) ::fsync(fd.get());
}

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool is_record_file(const fs::directory_entry& entry) {
    const auto name = entry.path().filename().string();
    return entry.is_regular_file() && !name.starts_with(".") && name.ends_with(".json");
}

void remove_stale_temporaries(const fs::path& dir) {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        const auto name = entry.path().filename().string();
        if (name.starts_with(".") && name.find(".tmp.") != std::string::npos) {
            fs::remove(entry.path(), ec);
        }
    }
}

Card load_card_file(const fs::path& path) {
    auto text = read_file(path);
    if (!text) storage_error("cannot read", path, errno);
    return read_card(parse_json(*text));
}

}  // namespace

json to_json(const CardSummary& s) {
    return {
        {"id", s.id},
        {"name", s.name},
        {"idiom", std::string(to_id(s.idiom))},
        {"task", s.task ? json(std::string(to_id(*s.task))) : json(nullptr)},
        {"updated_at", format_timestamp(s.updated_at)},
        {"version", s.version},
    };
}

void write_file_atomic(const fs::path& target, std::string_view content) {
    const fs::path dir = target.parent_path();
    const fs::path tmp = dir / ("." + target.filename().string() + ".tmp." + new_id().substr(0, 12));

    FileDescriptor fd(::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644));
    if (fd.get() < 0) storage_error("cannot create", tmp, errno);

    const char* p = content.data();
    std::size_t left = content.size();
    while (left > 0) {
        const ssize_t n = ::write(fd.get(), p, left);
        if (n < 0) {
            if (errno == EINTR) continue;
            const int err = errno;
            ::unlink(tmp.c_str());
            storage_error("cannot write", tmp, err);
        }
        p += n;
        left -= static_cast<std::size_t>(n);
    }
    if (::fsync(fd.get()) != 0 || ::close(fd.release()) != 0) {
        const int err = errno;
        ::unlink(tmp.c_str());
        storage_error("cannot flush", tmp, err);
    }
    if (::rename(tmp.c_str(), target.c_str()) != 0) {
        const int err = errno;
        ::unlink(tmp.c_str());
        storage_error("cannot commit", target, err);
    }
    fsync_directory(dir);
}

FileStore::FileStore(fs::path data_dir, RuleSet rules, Clock clock)
    : data_dir_(std::move(data_dir)), rules_(std::move(rules)), clock_(std::move(clock)) {
    for (const char* sub : {"cards", "drafts"}) {
        std::error_code ec;
        fs::create_directories(data_dir_ / sub, ec);
        if (ec) storage_error("cannot create", data_dir_ / sub, ec.value());
        remove_stale_temporaries(data_dir_ / sub);
    }
    const fs::path probe = data_dir_ / ".write-probe";
    write_file_atomic(probe, "ok");
    fs::remove(probe);
}

fs::path FileStore::card_path(const std::string& id) const { return data_dir_ / "cards" / (id + ".json"); }
fs::path FileStore::draft_path(const std::string& id) const { return data_dir_ / "drafts" / (id + ".json"); }

void FileStore::write_card(const Card& card) {
    throw_if_invalid(validate_card(card, rules_), "invalid card");
    write_file_atomic(card_path(card.id), serialize_card(card));
}

Card FileStore::save_card(Card card) {
    card.version = 1;
    throw_if_invalid(validate_card(card, rules_), "invalid card");
    auto lock = card_locks_.lock(card.id);
    if (fs::exists(card_path(card.id))) {
        throw Error(ErrorCode::Conflict, "card " + card.id + " already exists",
                    {{"id", "duplicate id"}});
    }
    write_card(card);
    return card;
}

std::optional<Card> FileStore::find_card(const std::string& id) const {
    if (!is_valid_id(id)) return std::nullopt;
    const auto path = card_path(id);
    if (!fs::exists(path)) return std::nullopt;
    return load_card_file(path);
}

Card FileStore::get_card(const std::string& id) const {
    auto card = find_card(id);
    if (!card) throw Error(ErrorCode::NotFound, "card " + id + " not found", {{"id", "not found"}});
    return *std::move(card);
}

std::vector<CardSummary> FileStore::list_cards() const {
    std::vector<CardSummary> out;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(data_dir_ / "cards", ec)) {
        if (!is_record_file(entry)) continue;
        try {
            Card c = load_card_file(entry.path());
            out.push_back(CardSummary{c.id, c.name, c.idiom, c.task, c.updated_at, c.version});
        } catch (const Error& e) {
            std::clog << "[store] skipping unreadable card " << entry.path() << ": " << e.what() << "\n";
        }
    }
    if (ec) storage_error("cannot list", data_dir_ / "cards", ec.value());
    std::sort(out.begin(), out.end(), [](const CardSummary& a, const CardSummary& b) {
        if (a.updated_at != b.updated_at) return a.updated_at > b.updated_at;
        return a.id < b.id;
    });
    return out;
}

Card FileStore::update_card(const std::string& id, Card content, std::int64_t expected_version) {
    auto lock = card_locks_.lock(id);
    Card stored = get_card(id);
    if (stored.version != expected_version) {
        throw Error(ErrorCode::Conflict,
                    "card " + id + " is at version " + std::to_string(stored.version) +
                        ", expected " + std::to_string(expected_version),
                    {{"version", "stale version"}}, {{"current_version", stored.version}});
    }
    content.id = id;
    content.created_at = stored.created_at;
    content.version = stored.version + 1;
    content.updated_at = std::max(clock_(), stored.updated_at + std::chrono::microseconds(1));
    write_card(content);
    return content;
}

Card FileStore::duplicate_card(const std::string& id) {
    Card copy = get_card(id);
    copy.id = new_id();
    copy.name += " (copy)";
    copy.version = 1;
    copy.created_at = copy.updated_at = clock_();
    return save_card(std::move(copy));
}

void FileStore::delete_card(const std::string& id) {
    if (!is_valid_id(id)) return;
    auto lock = card_locks_.lock(id);
    std::error_code ec;
    fs::remove(card_path(id), ec);
    if (ec) storage_error("cannot delete", card_path(id), ec.value());
    fsync_directory(data_dir_ / "cards");
}

void FileStore::save_draft(const Draft& draft) {
    if (!is_valid_id(draft.id)) {
        throw Error(ErrorCode::Validation, "invalid draft id", {{"id", "invalid id"}});
    }
    auto lock = draft_locks_.lock(draft.id);
    write_file_atomic(draft_path(draft.id), to_json(draft).dump());
}

std::optional<Draft> FileStore::find_draft(const std::string& id) const {
    if (!is_valid_id(id)) return std::nullopt;
    auto text = read_file(draft_path(id));
    if (!text) return std::nullopt;
    return read_draft(parse_json(*text));
}

Draft FileStore::get_draft(const std::string& id) const {
    auto d = find_draft(id);
    if (!d) throw Error(ErrorCode::NotFound, "draft " + id + " not found", {{"id", "not found"}});
    return *std::move(d);
}

void FileStore::delete_draft(const std::string& id) {
    if (!is_valid_id(id)) return;
    auto lock = draft_locks_.lock(id);
    std::error_code ec;
    fs::remove(draft_path(id), ec);
    if (ec) storage_error("cannot delete", draft_path(id), ec.value());
}

}  // namespace isc
