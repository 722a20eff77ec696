#include "safeplan/compiler.hpp"

#include <cstdio>

namespace safeplan {

namespace {
class Fnv {
public:
    void add(std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h_ ^= (x >> (8 * i)) & 0xff;
            h_ *= 0x100000001b3ULL;
        }
    }
    void add(const std::string &s) {
        add(s.size());
        for (unsigned char c : s) {
            h_ ^= c;
            h_ *= 0x100000001b3ULL;
        }
    }
    void add(const PartialAssignment &pa) {
        add(pa.size());
        for (const Fact &f : pa) {
            add(static_cast<std::uint64_t>(f.var));
            add(static_cast<std::uint64_t>(f.value));
        }
    }
    std::uint64_t value() const {
        return h_;
    }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};
} // namespace

std::string model_fingerprint(const LearnedModel &lm) {
    Fnv h;
    for (const VariableSpec &v : lm.variables) {
        h.add(v.name);
        for (const std::string &val : v.value_names)
            h.add(val);
    }
    for (const auto &[name, la] : lm.actions) {
        h.add(name);
        h.add(la.pre_upper);
        h.add(la.eff_lower);
        h.add(la.observations);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.value()));
    return buf;
}

CompiledProblem compile(const LearnedModel &lm, const State &init, const PartialAssignment &goal,
                        std::string provenance) {
    CompiledProblem out{Problem(learned_to_model(lm), init, goal), std::move(provenance)};
    if (out.provenance.empty())
        out.provenance = "learned-model:" + model_fingerprint(lm);
    return out;
}

} // namespace safeplan
