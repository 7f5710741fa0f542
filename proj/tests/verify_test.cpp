#include <gtest/gtest.h>

#include <set>

#include "phqm/types.hpp"
#include "phqm/verify.hpp"

using namespace phqm;

namespace {

const VerifyReport& quick() {
    static const VerifyReport r = verify_all({Profile::quick, false});
    return r;
}

const ClaimRecord* find(const VerifyReport& r, const std::string& id) {
    for (const auto& c : r.claims)
        if (c.id == id) return &c;
    return nullptr;
}

}  // namespace

TEST(Verify, QuickPasses) {
    EXPECT_TRUE(quick().passed());
    EXPECT_EQ(quick().count(ClaimStatus::fail), 0u);
}

TEST(Verify, DistinctAnchoredClaims) {
    std::set<std::string> ids;
    for (const auto& c : quick().claims) {
        ids.insert(c.id);
        EXPECT_FALSE(c.anchor.empty()) << c.id;
        EXPECT_FALSE(c.description.empty()) << c.id;
    }
    EXPECT_EQ(ids.size(), quick().claims.size());
    EXPECT_GE(quick().count(ClaimStatus::pass), 12u);
}

TEST(Verify, QuickSkipsOrderFits) {
    for (const char* id : {"order-h-n64", "order-X-n128", "order-source-n64"}) {
        const auto* c = find(quick(), id);
        ASSERT_NE(c, nullptr) << id;
        EXPECT_EQ(c->status, ClaimStatus::skipped);
    }
}

TEST(Verify, MutationCaught) {
    const VerifyReport r = verify_all({Profile::quick, true});
    EXPECT_FALSE(r.passed());
    const auto* c = find(r, "missing-factor");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->status, ClaimStatus::fail);
    EXPECT_NE(c->anchor.find("Eq. (31)"), std::string::npos);
}

TEST(Verify, ReportJson) {
    const auto doc = report_to_json(quick());
    EXPECT_EQ(doc.at("format"), "phqm-verify-report");
    EXPECT_EQ(doc.at("claims").size(), quick().claims.size());
    EXPECT_EQ(doc.at("claims")[0].at("id"), quick().claims[0].id);
}

TEST(Verify, ProfileNames) {
    EXPECT_EQ(profile_from_string("full"), Profile::full);
    EXPECT_THROW(profile_from_string("slow"), ConfigError);
}
