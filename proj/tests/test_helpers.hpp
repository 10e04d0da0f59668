#pragma once

#include <filesystem>
#include <string>

// Fresh scratch directory under the system temp root; wiped on entry so a
// failed earlier run cannot leak state into this one.
inline std::string fresh_dir(const std::string& name) {
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() / ("shrinkerlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}
