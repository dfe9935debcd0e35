#pragma once

#include <string>
#include <vector>

namespace sdesplit {

struct CheckItem {
    std::string name;
    bool pass = false;
    std::string detail;  // empty when passing
};

struct SelfCheckReport {
    std::vector<CheckItem> items;
    bool all_pass() const {
        for (const auto& i : items)
            if (!i.pass) return false;
        return !items.empty();
    }
};

// Cross-module property suite on exact algebraic identities (no sampling).
// max_weight2 is twice the weight cap; the default covers weight 3.
SelfCheckReport run_selfcheck(int max_weight2 = 6);

}  // namespace sdesplit
