#pragma once

#include <filesystem>
#include <string>

#include "rumix/learner.hpp"

namespace rumix {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kModelFormatVersion = 1;

std::string classifier_to_json(const Classifier& clf);
// Throws InputError on malformed documents or unsupported versions.
Classifier classifier_from_json(const std::string& text);

void save_classifier(const Classifier& clf, const std::filesystem::path& path);
Classifier load_classifier(const std::filesystem::path& path);

}  // namespace rumix
