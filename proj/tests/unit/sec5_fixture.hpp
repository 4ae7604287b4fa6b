#pragma once

#include "ssf/trainer.hpp"

#include <string>
#include <vector>

namespace ssf::testkit {

inline const std::vector<std::string>& sec5_training_queries() {
    static const std::vector<std::string> q{
        "Select username, password from admin where id=?",
        "Select username, password from admin where id<?",
        "Select * from admin where username=? order by username",
        "Select username, product from admin where salary<? and IsActive=?",
    };
    return q;
}

inline std::string sec5_log() {
    std::string log;
    for (const auto& q : sec5_training_queries()) log += q + "\n";
    return log;
}

inline ProfileBundle sec5_bundle(MiningParams params = {}) {
    return train(read_log(sec5_log()), params);
}

} // namespace ssf::testkit
