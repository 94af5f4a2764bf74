#ifndef VIRSIM_INI_HPP
#define VIRSIM_INI_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace virsim {

// Minimal INI dialect: [section] headers, key = value lines, # and ;
// comments (inline # comments are stripped, so values cannot contain #),
// repeated keys kept in order. Sections keep declaration order.
struct IniSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    std::optional<std::string> get(const std::string& key) const;
    std::vector<std::string> all(const std::string& key) const;
};

struct IniDoc {
    std::vector<IniSection> sections;

    const IniSection* find(const std::string& name) const;
    std::optional<std::string> get(const std::string& section,
                                   const std::string& key) const;
};

// Throws ConfigError on a line that is neither blank, comment, section
// header, nor key = value.
IniDoc parse_ini(const std::string& text);

// Read a whole file; IoError if it cannot be opened.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace virsim

#endif
