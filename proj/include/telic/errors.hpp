#pragma once

#include <stdexcept>
#include <string>

namespace telic {

// Exit-code conventions: 0 ok, 64 usage, 65 data/config/domain, 70 internal
// invariant violation, 75 resource cap exceeded.
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& m) : std::runtime_error(m) {}
};

struct data_error : std::runtime_error {
    explicit data_error(const std::string& m) : std::runtime_error(m) {}
};

struct internal_error : std::runtime_error {
    explicit internal_error(const std::string& m) : std::runtime_error(m) {}
};

struct resource_limit_error : std::runtime_error {
    explicit resource_limit_error(const std::string& m) : std::runtime_error(m) {}
};

// Control-flow signals: the operation is fine, the request needs a different route.
struct not_exact_error : std::runtime_error {
    explicit not_exact_error(const std::string& m) : std::runtime_error(m) {}
};

struct not_invertible_error : std::runtime_error {
    explicit not_invertible_error(const std::string& m) : std::runtime_error(m) {}
};

struct not_applicable_error : std::runtime_error {
    explicit not_applicable_error(const std::string& m) : std::runtime_error(m) {}
};

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const usage_error*>(&e)) return 64;
    if (dynamic_cast<const data_error*>(&e)) return 65;
    if (dynamic_cast<const not_applicable_error*>(&e)) return 65;
    if (dynamic_cast<const not_invertible_error*>(&e)) return 65;
    if (dynamic_cast<const resource_limit_error*>(&e)) return 75;
    return 70;
}

}  // namespace telic
