#pragma once

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>

namespace dts {

using StopwordSet = std::set<std::string, std::less<>>;

// The shipped English list (data/stopwords_en_v1.txt), in file order.
std::span<const std::string_view> english_stopwords_v1();
StopwordSet default_stopwords();

// One token per line; blank lines and '#' comments are skipped.
StopwordSet load_stopwords(const std::filesystem::path& path);

}  // namespace dts
