#pragma once

#include <stdexcept>
#include <string>

namespace pfwave {

// The four 1D evolution equations handled by this library. The "modified"
// pair carries the degenerate |v_x| mobility; the conserved pair advances in
// flux form.
enum class ModelKind { modified_ac, modified_ch, classic_ac, classic_ch };

inline bool is_conserved(ModelKind k) {
    return k == ModelKind::modified_ch || k == ModelKind::classic_ch;
}

inline bool is_modified(ModelKind k) {
    return k == ModelKind::modified_ac || k == ModelKind::modified_ch;
}

inline std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::modified_ac: return "modified_ac";
        case ModelKind::modified_ch: return "modified_ch";
        case ModelKind::classic_ac: return "classic_ac";
        case ModelKind::classic_ch: return "classic_ch";
    }
    return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "modified_ac") return ModelKind::modified_ac;
    if (s == "modified_ch") return ModelKind::modified_ch;
    if (s == "classic_ac") return ModelKind::classic_ac;
    if (s == "classic_ch") return ModelKind::classic_ch;
    throw std::invalid_argument("unknown model kind: " + s);
}

// Wave-construction family: the profile shape is shared; only the admissible
// speed differs (conserved waves must stand still).
enum class WaveFamily { nonconserved, conserved };

inline WaveFamily family_of(ModelKind k) {
    return is_conserved(k) ? WaveFamily::conserved : WaveFamily::nonconserved;
}

inline std::string to_string(WaveFamily f) {
    return f == WaveFamily::conserved ? "conserved" : "nonconserved";
}

} // namespace pfwave
