#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aeelm::ini {

// Sectioned key=value config files ('#' and ';' start comments).
struct File {
    std::map<std::string, std::map<std::string, std::string>> sections;

    std::optional<std::string> get(const std::string& section, const std::string& key) const;
};

File parse(const std::string& text);
File parse_file(const std::string& path);

} // namespace aeelm::ini
