#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ppc {

/// Argument outside the domain of a closed-form map (e.g. |psi| >= 1 for the envelope).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The normalized error touched the funnel boundary (|zeta| >= 1 - eps_guard).
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what, double zeta = 0.0)
        : std::runtime_error(what), zeta_(zeta) {}

    double zeta() const noexcept { return zeta_; }

private:
    double zeta_;
};

/// Invalid scenario or model parameters. Carries every violation found, not just the first.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what)
        : std::invalid_argument(what), issues_{what} {}

    explicit ConfigError(std::vector<std::string> issues)
        : std::invalid_argument(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out;
        for (const auto& s : issues) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> issues_;
};

}  // namespace ppc
