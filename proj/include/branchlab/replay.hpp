#pragma once

#include "branchlab/io.hpp"
#include "branchlab/lemmalab.hpp"
#include "branchlab/syracuse.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace branchlab {

// Routes a certificate to the module that owns its claim id.
inline ReplayResult replay(const Counterexample& c) {
    if (auto r = replay_lemma(c)) return *r;
    if (auto r = replay_syracuse(c)) return *r;
    throw std::invalid_argument("no replayer for claim '" + c.claim_id + "'");
}

inline Counterexample load_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open certificate " + path);
    return certificate_from_json(Json::parse(in));
}

}  // namespace branchlab
