// Named claim suite run by `phqm verify-all`.
#ifndef PHQM_VERIFY_HPP
#define PHQM_VERIFY_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace phqm {

enum class Profile { quick, full };

Profile profile_from_string(const std::string& s);
const char* to_string(Profile p);

enum class ClaimStatus { pass, fail, skipped };

const char* to_string(ClaimStatus s);

struct ClaimRecord {
    std::string id;
    std::string anchor;  // equation or section the claim comes from
    std::string description;
    double measured = 0.0;
    std::string relation;  // "<", "<=", ">", "in"
    double threshold = 0.0;
    double threshold_hi = 0.0;  // upper end for "in"
    int dimension = 0;
    ClaimStatus status = ClaimStatus::fail;
    std::string detail;
};

struct VerifyOptions {
    Profile profile = Profile::quick;
    // Mutation hook: couple the source to x where the physical X belongs.
    bool swap_x_for_naive = false;
};

struct VerifyReport {
    Profile profile = Profile::quick;
    std::vector<ClaimRecord> claims;

    bool passed() const;
    std::size_t count(ClaimStatus s) const;
};

VerifyReport verify_all(const VerifyOptions& options = {});

nlohmann::ordered_json report_to_json(const VerifyReport& report);

}  // namespace phqm

#endif  // PHQM_VERIFY_HPP
