#pragma once

#include <string>
#include <vector>

namespace qdeform {

struct CheckEntry {
    std::string check;
    std::string instance;
    bool pass = false;
    std::string witness;  // first failing datum, empty on pass
};

struct CheckReport {
    std::vector<CheckEntry> entries;

    void add(std::string check, std::string instance, bool pass, std::string witness = "") {
        entries.push_back({std::move(check), std::move(instance), pass, std::move(witness)});
    }
    void merge(const CheckReport& o) {
        entries.insert(entries.end(), o.entries.begin(), o.entries.end());
    }
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    int failures() const {
        int n = 0;
        for (const auto& e : entries)
            if (!e.pass) ++n;
        return n;
    }
    std::string summary() const {
        std::string out;
        for (const auto& e : entries) {
            out += e.pass ? "[PASS] " : "[FAIL] ";
            out += e.check;
            if (!e.instance.empty()) out += " (" + e.instance + ")";
            if (!e.pass && !e.witness.empty()) out += " witness: " + e.witness;
            out += "\n";
        }
        return out;
    }
};

}  // namespace qdeform
