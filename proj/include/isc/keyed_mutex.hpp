#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace isc {

/// One mutex per key, created on demand and released when the last holder
/// drops it.
class KeyedMutex {
public:
    class Lock {
    public:
        Lock(std::shared_ptr<std::mutex> m) : mutex_(std::move(m)), lock_(*mutex_) {}

    private:
        std::shared_ptr<std::mutex> mutex_;
        std::unique_lock<std::mutex> lock_;
    };

    [[nodiscard]] Lock lock(const std::string& key) {
        std::shared_ptr<std::mutex> m;
        {
            std::lock_guard guard(table_mutex_);
            for (auto it = table_.begin(); it != table_.end();) {
                it = it->second.expired() && it->first != key ? table_.erase(it) : std::next(it);
            }
            auto& slot = table_[key];
            m = slot.lock();
            if (!m) {
                m = std::make_shared<std::mutex>();
                slot = m;
            }
        }
        return Lock(std::move(m));
    }

private:
    std::mutex table_mutex_;
    std::map<std::string, std::weak_ptr<std::mutex>> table_;
};

}  // namespace isc
