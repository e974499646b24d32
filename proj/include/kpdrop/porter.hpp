#pragma once

#include <string>
#include <string_view>

namespace kpdrop {

// Porter (1980) suffix stripper. Input is expected to be lowercase; bytes
// outside a-z are treated as consonants.
std::string porter_stem(std::string_view word);

} // namespace kpdrop
